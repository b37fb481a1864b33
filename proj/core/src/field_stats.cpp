#include "spavar/field_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spavar/compensated.hpp"

namespace spavar {

namespace {

// Cholesky probe: returns true when m + shift*I admits a Cholesky factor,
// i.e. the smallest eigenvalue of m is above -shift (up to rounding).
bool cholesky_succeeds(std::vector<double> m, std::size_t n, double shift) {
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] += shift;
  for (std::size_t j = 0; j < n; ++j) {
    CompensatedSum diag;
    diag.add(m[j * n + j]);
    for (std::size_t k = 0; k < j; ++k) diag.add(-m[j * n + k] * m[j * n + k]);
    const double d = diag.value();
    if (d <= 0.0) return false;
    const double root = std::sqrt(d);
    m[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      CompensatedSum off;
      off.add(m[i * n + j]);
      for (std::size_t k = 0; k < j; ++k) off.add(-m[i * n + k] * m[j * n + k]);
      m[i * n + j] = off.value() / root;
    }
  }
  return true;
}

}  // namespace

FieldStats::FieldStats(std::vector<double> mu, std::vector<double> second)
    : mu_(std::move(mu)), second_(std::move(second)) {
  const std::size_t n = mu_.size();
  if (n == 0) throw std::invalid_argument("FieldStats: need at least one site");
  if (second_.size() != n * n) {
    throw std::invalid_argument(
        "FieldStats: second-moment matrix has " + std::to_string(second_.size()) +
        " entries, expected " + std::to_string(n * n));
  }
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(mu_[i])) {
      throw std::invalid_argument("FieldStats: mu[" + std::to_string(i) +
                                  "] is non-finite");
    }
  }
  for (double v : second_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("FieldStats: second-moment entry is non-finite");
    }
    max_abs = std::max(max_abs, std::abs(v));
  }
  const double sym_tol = 1e-12 * std::max(max_abs, 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(second_[i * n + j] - second_[j * n + i]) > sym_tol) {
        throw std::invalid_argument(
            "FieldStats: second-moment matrix asymmetric at (" +
            std::to_string(i) + ", " + std::to_string(j) + ") beyond 1e-12 relative");
      }
    }
  }
  double max_cov_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double var_i = second_[i * n + i] - mu_[i] * mu_[i];
    if (var_i < -1e-12) {
      throw std::invalid_argument("FieldStats: second[" + std::to_string(i) +
                                  "][" + std::to_string(i) +
                                  "] below mu^2 - 1e-12");
    }
    max_cov_diag = std::max(max_cov_diag, var_i);
  }

  std::vector<double> cov(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cov[i * n + j] = second_[i * n + j] - mu_[i] * mu_[j];
    }
  }
  psd_ok_ = cholesky_succeeds(std::move(cov), n,
                              1e-9 * std::max(max_cov_diag, 1e-300));
}

FieldStats FieldStats::degenerate(const EpochField& field) {
  const std::size_t n = field.size();
  std::vector<double> mu(field.values());
  std::vector<double> second(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      second[i * n + j] = mu[i] * mu[j];
    }
  }
  return FieldStats(std::move(mu), std::move(second));
}

FieldAggregates aggregates_from(const FieldStats& stats) {
  const std::size_t n = stats.n();
  FieldAggregates agg;
  agg.n = n;
  CompensatedSum sum_mu, sum_mu_sq, sum_sq, total;
  for (std::size_t i = 0; i < n; ++i) {
    sum_mu.add(stats.mu(i));
    sum_mu_sq.add(stats.mu(i) * stats.mu(i));
    sum_sq.add(stats.second(i, i));
    for (std::size_t j = 0; j < n; ++j) total.add(stats.second(i, j));
  }
  agg.sum_mu = sum_mu.value();
  agg.sum_mu_outer = agg.sum_mu * agg.sum_mu - sum_mu_sq.value();
  agg.sum_sq = sum_sq.value();
  agg.sum_cross = total.value() - agg.sum_sq;
  return agg;
}

FieldAggregates aggregates_from(const EpochField& field) {
  FieldAggregates agg;
  agg.n = field.size();
  CompensatedSum sum, sq;
  for (double v : field.values()) {
    sum.add(v);
    sq.add(v * v);
  }
  agg.sum_mu = sum.value();
  agg.sum_sq = sq.value();
  agg.sum_cross = agg.sum_mu * agg.sum_mu - agg.sum_sq;
  agg.sum_mu_outer = agg.sum_cross;
  return agg;
}

}  // namespace spavar
