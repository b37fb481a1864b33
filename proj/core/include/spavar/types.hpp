#pragma once

#include <cstddef>
#include <vector>

namespace spavar {

/// Per-site averaging weights beta_i, nonnegative and summing to one.
/// Inputs whose sum deviates from 1 by more than 1e-6 are rejected;
/// anything closer is renormalized at construction, so downstream code can
/// rely on |sum(beta) - 1| <= 1e-12. Zero weights are allowed (the site
/// never contributes); the size still counts all supplied sites.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> beta);

  static WeightVector uniform(std::size_t n);

  std::size_t size() const noexcept { return beta_.size(); }
  double operator[](std::size_t i) const noexcept { return beta_[i]; }
  const std::vector<double>& beta() const noexcept { return beta_; }

  /// sum of beta_i^2; 1/N for uniform weights and larger otherwise.
  double sum_sq() const noexcept { return sum_sq_; }

  /// True when all weights agree with 1/N to the given absolute tolerance.
  bool is_uniform(double tol = 1e-12) const noexcept;

 private:
  std::vector<double> beta_;
  double sum_sq_ = 0.0;
};

/// Reporting model: every site reports independently with probability
/// alpha in (0, 1]; 1 - alpha is the missing-data probability.
class ReportingModel {
 public:
  explicit ReportingModel(double alpha);

  double alpha() const noexcept { return alpha_; }
  double missing_probability() const noexcept { return 1.0 - alpha_; }

 private:
  double alpha_;
};

/// One snapshot of site values r_i. In the single-epoch setting the field
/// moments degenerate to the observed values themselves.
class EpochField {
 public:
  explicit EpochField(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Population spatial variance of the epoch:
  /// (1/N) sum r_i^2 - ((1/N) sum r_i)^2.
  double spatial_variance() const;

 private:
  std::vector<double> values_;
};

}  // namespace spavar
