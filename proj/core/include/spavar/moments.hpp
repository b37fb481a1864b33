#pragma once

#include <cstddef>

#include "spavar/field_stats.hpp"
#include "spavar/types.hpp"

namespace spavar {

// Moments of the reported sums behind the ratio mean r = R/S, where
//   R = sum_i beta_i s_i r_i   (weighted sum of reported values)
//   S = sum_i beta_i s_i       (reported weight coverage)
// and the s_i are independent Bernoulli(alpha) reporting indicators.
// The second-order variance formula consumes E S^l (l = 1..4),
// E R S^l (l = 0..2) and E R^2 S^l (l = 0..2).

/// The mixed moments consumed by the second-order variance formula.
struct MomentSet {
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;    // E S^l
  double rs0 = 0, rs1 = 0, rs2 = 0;         // E R S^l
  double r2s0 = 0, r2s1 = 0, r2s2 = 0;      // E R^2 S^l
};

/// E S^l for l in {1, 2, 3, 4}, general weights. Distinct-index sums are
/// reduced to power sums of beta (e.g. sum_{i!=j} beta_i beta_j =
/// (sum beta)^2 - sum beta^2), so the cost is O(N), never the naive O(N^4).
double moment_s(int l, const WeightVector& w, const ReportingModel& rm);

/// E R S^l for l in {0, 1, 2}; linear in the first moments E r_i.
/// Throws std::invalid_argument on dimension mismatch.
double moment_rs(int l, const WeightVector& w, const ReportingModel& rm,
                 const FieldStats& f);

/// E R^2 S^l for l in {0, 1, 2}; bilinear in the raw second moments
/// E r_i r_j. The O(N^2) reductions use compensated accumulation.
double moment_r2s(int l, const WeightVector& w, const ReportingModel& rm,
                  const FieldStats& f);

/// Uniform-weight closed form
///   E S^l = N^-l * sum_{m=1}^{min(l,N)} {l over m} N!/(N-m)! alpha^m,
/// valid for any l up to the Stirling cap (std::domain_error beyond).
double moment_s_uniform(int l, std::size_t n, const ReportingModel& rm);

/// Uniform-weight closed form
///   E R S^l = (sum_i E r_i / N^{l+1}) *
///             sum_{m=1}^{min(l+1,N)} {l+1 over m} (N-1)!/(N-m)! alpha^m.
double moment_rs_uniform(int l, std::size_t n, const ReportingModel& rm,
                         const FieldAggregates& agg);

/// Uniform-weight closed form for E R^2 S^l: the sum_i E r_i^2 part with
/// coefficients {l+1 over m}(N-1)!/(N-m)!/N^{l+2} and the
/// sum_{i!=j} E r_i r_j part with coefficients
/// ({l+2 over m} - {l+1 over m})(N-2)!/(N-m)!/N^{l+2}. Requires N >= 2
/// (the off-diagonal term does not exist otherwise).
double moment_r2s_uniform(int l, std::size_t n, const ReportingModel& rm,
                          const FieldAggregates& agg);

// Per-power coefficients of the uniform closed forms, exposed so the
// alpha-polynomials can be checked term by term.
double uniform_s_coefficient(int l, int m, std::size_t n);        // in E S^l
double uniform_rs_coefficient(int l, int m, std::size_t n);       // of E r_i
double uniform_r2s_diag_coefficient(int l, int m, std::size_t n); // of E r_i^2
double uniform_r2s_cross_coefficient(int l, int m, std::size_t n);// of E r_i r_j

/// Exact integer check that the diagonal and off-diagonal coefficient
/// families of the uniform E R^2 S^l form jointly count all assignments of
/// l+2 distinguishable balls into m occupied bins out of N:
///   N*a_m + N(N-1)*b_m = {l+2 over m} N!/(N-m)! / N^{l+2}.
/// Evaluated with cleared denominators in 128-bit integers.
bool coefficient_identity_check(int l, int m, std::size_t n);

/// Fills every moment the second-order variance needs. For uniform weights
/// (all beta_i equal within 1e-12) the Stirling closed forms are used; debug
/// builds assert their agreement with the general formulas.
MomentSet compute_moment_set(const WeightVector& w, const ReportingModel& rm,
                             const FieldStats& f);

/// Large-N limits: E S^l -> alpha^l, E R S^l -> E R alpha^l,
/// E R^2 S^l -> E R^2 alpha^l, with E R and E R^2 evaluated from the
/// uniform-weight aggregates at the given alpha.
struct LargeNMoments {
  double s = 0;    // alpha^l
  double rs = 0;   // E R * alpha^l
  double r2s = 0;  // E R^2 * alpha^l
};
LargeNMoments moments_large_n(int l, const ReportingModel& rm,
                              const FieldAggregates& agg);

}  // namespace spavar
