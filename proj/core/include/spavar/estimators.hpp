#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "spavar/field_stats.hpp"
#include "spavar/moments.hpp"
#include "spavar/types.hpp"

namespace spavar {

enum class VarianceMethod {
  second_order,
  uniform_second_order,
  large_n,
  alpha_one,
  alpha_near_one,
  single_epoch,
  single_epoch_large_n,
};

std::string to_string(VarianceMethod m);

/// A variance estimate for the ratio mean R/S, tagged with the formula
/// that produced it. Truncated estimators may come out slightly negative
/// for extreme inputs (small N, small alpha); the value is returned as-is
/// so the convergence failure stays visible, and negative() flags it.
struct VarianceEstimate {
  double value = 0.0;
  VarianceMethod method = VarianceMethod::second_order;
  /// For the uniform second-order formula: the 1/N and 1/N^2 correction
  /// terms of the three bracketed series, in bracket order. Empty for the
  /// other methods.
  std::vector<double> correction_profile;

  bool negative() const noexcept { return value < 0.0; }
};

/// Second-order truncation of the delta-method series for Var(R/S),
/// evaluated term by term from the mixed moments. The term grouping is
/// kept exactly as in the derivation (ten terms plus a braced factor) with
/// compensated summation, so each term is auditable in isolation.
VarianceEstimate variance_second_order(const MomentSet& ms);

/// Uniform-weight second-order variance: three bracketed series in 1/N
/// multiplying sum E r_i^2, sum_{i!=j} E r_i r_j and (sum E r_i / N)^2.
/// All printed orders are evaluated, including the third bracket's 1/N^3
/// term. Requires N >= 2.
VarianceEstimate variance_uniform_second_order(std::size_t n,
                                               const ReportingModel& rm,
                                               const FieldAggregates& agg);

/// Large-N limit: Var(R) / alpha^2, the numerator variance inflated by the
/// missing-data factor.
VarianceEstimate variance_large_n(const ReportingModel& rm,
                                  const WeightVector& w, const FieldStats& f);

/// Large-N limit from uniform-weight aggregates (no N x N matrix needed).
VarianceEstimate variance_large_n_uniform(std::size_t n,
                                          const ReportingModel& rm,
                                          const FieldAggregates& agg);

/// Full-reporting variance: the quadratic form beta^T Sigma beta with
/// Sigma_ij = E r_i r_j - E r_i E r_j.
VarianceEstimate variance_alpha_one(const WeightVector& w, const FieldStats& f);

/// Near-full reporting, uniform weights: keep only the leading term of
/// each bracket, giving
///   (1/alpha)(1/N^2) sum E r_i^2 + (1/N^2) sum_{i!=j} E r_i r_j
///   - ((1/N) sum E r_i)^2.
/// Requires N >= 2.
VarianceEstimate variance_alpha_near_one(std::size_t n, const ReportingModel& rm,
                                         const FieldAggregates& agg);

/// Single-epoch (sampling without replacement) variance: two bracketed
/// polynomials in 1/N against sum r_i^2 and sum_{j!=i} r_i r_j, scaled by
/// (1-alpha)/alpha. Exactly 0 at alpha = 1. Requires N >= 2.
VarianceEstimate variance_single_epoch(const ReportingModel& rm,
                                       const EpochField& field);

/// Large-N single-epoch variance: ((1-alpha)/alpha) * sigma_s^2 / N with
/// sigma_s^2 the population spatial variance of the epoch.
VarianceEstimate variance_single_epoch_large_n(const ReportingModel& rm,
                                               const EpochField& field);

/// Order-1/N and order-1/N^2 correction terms of one bracketed series.
struct BracketCorrections {
  double order_n = 0.0;
  double order_n2 = 0.0;
};

/// Corrections for the three brackets of the uniform second-order formula
/// (in bracket order). All six terms vanish at alpha = 1.
std::array<BracketCorrections, 3> correction_terms(std::size_t n,
                                                   const ReportingModel& rm);

}  // namespace spavar
