#include "spavar/montecarlo.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "spavar/combinatorics.hpp"
#include "spavar/compensated.hpp"
#include "spavar/estimators.hpp"
#include "spavar/rng.hpp"

namespace spavar {

namespace {

constexpr std::size_t kEnumerationCap = 20;
constexpr std::size_t kMomentEnumerationCap = 12;

// Member means are evaluated about the first site value: the ratio
// r0 + sum beta s (r - r0) / sum beta s is algebraically identical but
// yields r0 bit-exactly for constant fields, which the exactness
// guarantees below rely on.
struct ShiftedField {
  double origin;
  std::vector<double> delta;

  explicit ShiftedField(const EpochField& field)
      : origin(field[0]), delta(field.size()) {
    for (std::size_t i = 0; i < field.size(); ++i) {
      delta[i] = field[i] - origin;
    }
  }
};

// One ensemble member: draws masks until S > 0, returns the shifted ratio
// sum beta s delta / sum beta s. Pure function of (seed, member_index).
double member_shifted_mean(const ShiftedField& sf, const WeightVector& w,
                           double alpha, std::uint64_t seed,
                           std::uint64_t member_index,
                           std::int64_t& rejected) {
  rng::Stream stream =
      rng::Stream(seed).fork(kTagMember).fork(member_index);
  constexpr int kMaxAttempts = 1 << 20;  // (1-alpha)^N <= 0.999 makes this
                                         // unreachable in practice
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CompensatedSum num, den;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (stream.next_bernoulli(alpha)) {
        num.add(w[i] * sf.delta[i]);
        den.add(w[i]);
      }
    }
    const double s = den.value();
    if (s > 0.0) return num.value() / s;
    ++rejected;
  }
  throw std::runtime_error(
      "simulate_epoch_ensemble: rejection loop failed to terminate");
}

double pow_int(double base, int exp) {
  double result = 1.0;
  for (int k = 0; k < exp; ++k) result *= base;
  return result;
}

}  // namespace

EnsembleResult simulate_epoch_ensemble(const EpochField& field,
                                       const WeightVector& w,
                                       const ReportingModel& rm,
                                       const EnsembleSpec& spec) {
  if (w.size() != field.size()) {
    throw std::invalid_argument("simulate_epoch_ensemble: dimension mismatch");
  }
  if (spec.n_members < 2) {
    throw std::invalid_argument(
        "simulate_epoch_ensemble: need at least 2 members, got " +
        std::to_string(spec.n_members));
  }
  if (spec.threads < 1) {
    throw std::invalid_argument("simulate_epoch_ensemble: threads must be >= 1");
  }
  const double miss_all =
      std::pow(rm.missing_probability(), static_cast<double>(field.size()));
  if (miss_all > 0.999) {
    throw std::domain_error(
        "simulate_epoch_ensemble: (1-alpha)^N = " + std::to_string(miss_all) +
        " > 0.999; rejection-conditioned sampling is infeasible");
  }

  const ShiftedField sf(field);
  const auto n = static_cast<std::size_t>(spec.n_members);
  std::vector<double> means(n);
  std::vector<std::int64_t> rejected_per_chunk;

  const auto worker = [&](std::size_t lo, std::size_t hi,
                          std::int64_t& rejected) {
    for (std::size_t m = lo; m < hi; ++m) {
      means[m] = member_shifted_mean(sf, w, rm.alpha(), spec.seed, m, rejected);
    }
  };

  const std::size_t chunk_count =
      std::min<std::size_t>(static_cast<std::size_t>(spec.threads), n);
  rejected_per_chunk.assign(chunk_count, 0);
  if (chunk_count <= 1) {
    worker(0, n, rejected_per_chunk[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(chunk_count);
    for (std::size_t c = 0; c < chunk_count; ++c) {
      const std::size_t lo = n * c / chunk_count;
      const std::size_t hi = n * (c + 1) / chunk_count;
      pool.emplace_back(worker, lo, hi, std::ref(rejected_per_chunk[c]));
    }
    for (auto& t : pool) t.join();
  }

  // Fixed-order sequential reduction: results cannot depend on scheduling.
  CompensatedSum delta_sum;
  for (double m : means) delta_sum.add(m);
  const double nd = static_cast<double>(n);
  const double mean_shifted = delta_sum.value() / nd;

  CompensatedSum centered_sq, centered;
  for (double m : means) {
    const double e = m - mean_shifted;
    centered_sq.add(e * e);
    centered.add(e);
  }
  const double residual = centered.value();
  const double ss = centered_sq.value() - residual * residual / nd;
  const double variance = ss / (nd - 1.0);

  double se = std::numeric_limits<double>::quiet_NaN();
  if (n >= 3) {
    // Delete-1 jackknife in closed form: dropping member i leaves
    // v_(i) = (ss - d_i^2 n/(n-1)) / (n-2) with d_i the centered value.
    CompensatedSum vsum;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = means[i] - mean_shifted;
      v[i] = (ss - d * d * nd / (nd - 1.0)) / (nd - 2.0);
      vsum.add(v[i]);
    }
    const double vbar = vsum.value() / nd;
    CompensatedSum dev;
    for (double vi : v) dev.add((vi - vbar) * (vi - vbar));
    se = std::sqrt((nd - 1.0) / nd * dev.value());
  }

  EnsembleResult result;
  result.mean_of_means = sf.origin + mean_shifted;
  result.ensemble_variance = variance;
  result.n_members = spec.n_members;
  for (std::int64_t r : rejected_per_chunk) result.rejected_count += r;
  result.standard_error_of_variance = se;
  return result;
}

std::pair<double, double> exact_enumeration_epoch(const EpochField& field,
                                                  const WeightVector& w,
                                                  const ReportingModel& rm) {
  if (w.size() != field.size()) {
    throw std::invalid_argument("exact_enumeration_epoch: dimension mismatch");
  }
  const std::size_t n = field.size();
  if (n > kEnumerationCap) {
    throw std::domain_error("exact_enumeration_epoch: N = " + std::to_string(n) +
                            " exceeds the 2^N enumeration cap of " +
                            std::to_string(kEnumerationCap));
  }
  const double a = rm.alpha();
  const double q = rm.missing_probability();
  std::vector<double> pow_a(n + 1), pow_q(n + 1);
  pow_a[0] = pow_q[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    pow_a[k] = pow_a[k - 1] * a;
    pow_q[k] = pow_q[k - 1] * q;
  }

  const ShiftedField sf(field);
  CompensatedSum norm, e1, e2;
  const std::uint64_t mask_end = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < mask_end; ++mask) {
    CompensatedSum num, den;
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(bits));
      num.add(w[i] * sf.delta[i]);
      den.add(w[i]);
    }
    const double s = den.value();
    if (s <= 0.0) continue;  // zero-weight-only mask: excluded like S = 0
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    const double prob = pow_a[k] * pow_q[n - k];
    const double g = num.value() / s;
    norm.add(prob);
    e1.add(prob * g);
    e2.add(prob * g * g);
  }
  const double z = norm.value();
  const double mean_shifted = e1.value() / z;
  const double variance = e2.value() / z - mean_shifted * mean_shifted;
  return {sf.origin + mean_shifted, variance};
}

MomentTriple exact_moment_enumeration(const WeightVector& w,
                                      const ReportingModel& rm,
                                      const FieldStats& f, int l) {
  if (w.size() != f.n()) {
    throw std::invalid_argument("exact_moment_enumeration: dimension mismatch");
  }
  if (l < 0 || l > kStirlingCap) {
    throw std::domain_error("exact_moment_enumeration: l = " + std::to_string(l) +
                            " outside the supported range");
  }
  const std::size_t n = w.size();
  if (n > kMomentEnumerationCap) {
    throw std::domain_error("exact_moment_enumeration: N = " + std::to_string(n) +
                            " exceeds the 2^N enumeration cap of " +
                            std::to_string(kMomentEnumerationCap));
  }
  const double a = rm.alpha();
  const double q = rm.missing_probability();
  std::vector<double> pow_a(n + 1), pow_q(n + 1);
  pow_a[0] = pow_q[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    pow_a[k] = pow_a[k - 1] * a;
    pow_q[k] = pow_q[k - 1] * q;
  }

  CompensatedSum es, ers, er2s;
  const std::uint64_t mask_end = std::uint64_t{1} << n;
  std::vector<std::size_t> sites;
  sites.reserve(n);
  for (std::uint64_t mask = 0; mask < mask_end; ++mask) {
    sites.clear();
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      sites.push_back(static_cast<std::size_t>(std::countr_zero(bits)));
    }
    CompensatedSum s_acc, r_acc;
    for (std::size_t i : sites) {
      s_acc.add(w[i]);
      r_acc.add(w[i] * f.mu(i));
    }
    CompensatedSum r2_acc;
    for (std::size_t i : sites) {
      for (std::size_t j : sites) {
        r2_acc.add(w[i] * w[j] * f.second(i, j));
      }
    }
    const double prob = pow_a[sites.size()] * pow_q[n - sites.size()];
    const double s_pow = pow_int(s_acc.value(), l);  // S^0 == 1 even at S = 0
    es.add(prob * s_pow);
    ers.add(prob * r_acc.value() * s_pow);
    er2s.add(prob * r2_acc.value() * s_pow);
  }
  return {es.value(), ers.value(), er2s.value()};
}

SweepGrid relative_error_sweep(const EpochField& field,
                               const std::vector<double>& alphas,
                               const std::vector<std::size_t>& ns,
                               std::int64_t members, std::uint64_t seed,
                               int threads) {
  if (alphas.empty() || ns.empty()) {
    throw std::invalid_argument("relative_error_sweep: empty grid");
  }
  for (std::size_t n : ns) {
    if (n == 0 || n > field.size()) {
      throw std::invalid_argument(
          "relative_error_sweep: subset size " + std::to_string(n) +
          " exceeds the field length " + std::to_string(field.size()));
    }
  }

  SweepGrid grid;
  grid.cells.reserve(alphas.size() * ns.size());
  for (std::size_t n : ns) {
    // One seeded subset per n, shared by every alpha (partial Fisher-Yates).
    std::vector<std::size_t> indices(field.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    rng::Stream subset_stream = rng::Stream(seed).fork(kTagSubset).fork(n);
    for (std::size_t i = 0; i < n && i + 1 < indices.size(); ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(subset_stream.next_below(indices.size() - i));
      std::swap(indices[i], indices[j]);
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = field[indices[i]];
    const EpochField subfield(std::move(values));

    for (double alpha : alphas) {
      const ReportingModel rm(alpha);
      SweepCell cell;
      cell.alpha = alpha;
      cell.n = n;
      EnsembleSpec spec;
      spec.n_members = members;
      spec.seed = rng::Stream(seed)
                      .fork(kTagCell)
                      .fork(rng::double_bits(alpha))
                      .fork(n)
                      .next_u64();
      spec.threads = threads;
      const EnsembleResult mc = simulate_epoch_ensemble(subfield,
                                                        WeightVector::uniform(n),
                                                        rm, spec);
      cell.mc_variance = mc.ensemble_variance;
      cell.formula_variance = variance_single_epoch_large_n(rm, subfield).value;
      if (cell.mc_variance == 0.0) {
        if (cell.formula_variance == 0.0) {
          cell.degenerate = true;
          cell.relative_error = std::numeric_limits<double>::quiet_NaN();
        } else {
          cell.relative_error = std::numeric_limits<double>::infinity();
          cell.exceeds_threshold = true;
        }
      } else {
        cell.relative_error =
            std::abs(cell.mc_variance - cell.formula_variance) / cell.mc_variance;
        cell.exceeds_threshold = cell.relative_error > 0.1;
      }
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

}  // namespace spavar
