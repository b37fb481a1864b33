#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spavar/field_stats.hpp"
#include "spavar/types.hpp"

namespace spavar {

// Stream tag layout (see rng.hpp for the mix construction; both are fixed
// across versions):
//   member draws   Stream(seed).fork(kTagMember).fork(member_index)
//   subset choice  Stream(seed).fork(kTagSubset).fork(subset_size)
//   sweep cells    Stream(seed).fork(kTagCell).fork(bits(alpha)).fork(n)
//   synthetic gen  Stream(seed).fork(kTagSynthetic)
inline constexpr std::uint64_t kTagMember = 1;
inline constexpr std::uint64_t kTagSubset = 2;
inline constexpr std::uint64_t kTagCell = 3;
inline constexpr std::uint64_t kTagSynthetic = 4;

/// Ensemble configuration: members are streamed, never stored. Results are
/// a pure function of (seed, n_members, alpha, field) regardless of the
/// thread count.
struct EnsembleSpec {
  std::int64_t n_members = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct EnsembleResult {
  double mean_of_means = 0.0;
  /// Sample variance of the member spatial means (n-1 denominator).
  double ensemble_variance = 0.0;
  std::int64_t n_members = 0;
  /// All-zero-coverage masks that were redrawn.
  std::int64_t rejected_count = 0;
  /// Delete-1 jackknife standard error of ensemble_variance (NaN when the
  /// ensemble is too small to jackknife, i.e. fewer than 3 members).
  double standard_error_of_variance = 0.0;
};

/// Simulates the ratio mean over an ensemble of Bernoulli(alpha) reporting
/// masks for one epoch. Masks with zero reported weight are rejected and
/// redrawn, so every retained member has S > 0. Preconditions:
/// n_members >= 2, threads >= 1, and (1-alpha)^N <= 0.999 so rejection
/// terminates in practice (std::domain_error otherwise).
EnsembleResult simulate_epoch_ensemble(const EpochField& field,
                                       const WeightVector& w,
                                       const ReportingModel& rm,
                                       const EnsembleSpec& spec);

/// Exact conditional mean and variance of the ratio mean for one epoch,
/// from all 2^N - 1 masks with S > 0; mask probabilities are renormalized
/// by the total probability of S > 0. N <= 20 (std::domain_error beyond).
std::pair<double, double> exact_enumeration_epoch(const EpochField& field,
                                                  const WeightVector& w,
                                                  const ReportingModel& rm);

struct MomentTriple {
  double s = 0.0;    // E S^l
  double rs = 0.0;   // E R S^l
  double r2s = 0.0;  // E R^2 S^l
};

/// Unconditional oracle for the closed-form moments: sums over all 2^N
/// masks, using linearity over the field (E R S^l per mask is
/// sum beta_i s_i E r_i * S^l; E R^2 S^l uses the second-moment matrix).
/// N <= 12 and l <= the Stirling cap (std::domain_error beyond).
MomentTriple exact_moment_enumeration(const WeightVector& w,
                                      const ReportingModel& rm,
                                      const FieldStats& f, int l);

struct SweepCell {
  double alpha = 0.0;
  std::size_t n = 0;
  double mc_variance = 0.0;
  double formula_variance = 0.0;
  /// |mc - formula| / mc; NaN for degenerate cells.
  double relative_error = 0.0;
  bool exceeds_threshold = false;  // relative_error > 0.1
  /// Both the simulated and the closed-form variance are exactly zero
  /// (e.g. alpha = 1), so the relative error is undefined.
  bool degenerate = false;
};

struct SweepGrid {
  std::vector<SweepCell> cells;
};

/// For each (alpha, n): picks a seeded random subset of n sites (without
/// replacement, one subset per n shared across alphas), simulates the
/// ensemble, and compares against the large-N single-epoch closed form.
/// The 0.1 threshold flag marks where that approximation degrades.
SweepGrid relative_error_sweep(const EpochField& field,
                               const std::vector<double>& alphas,
                               const std::vector<std::size_t>& ns,
                               std::int64_t members, std::uint64_t seed,
                               int threads = 1);

}  // namespace spavar
