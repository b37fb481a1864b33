#include "spavar/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spavar/compensated.hpp"

namespace spavar {

WeightVector::WeightVector(std::vector<double> beta) : beta_(std::move(beta)) {
  if (beta_.empty()) {
    throw std::invalid_argument("WeightVector: need at least one site");
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < beta_.size(); ++i) {
    const double b = beta_[i];
    if (!std::isfinite(b) || b < 0.0) {
      throw std::invalid_argument("WeightVector: weight " + std::to_string(i) +
                                  " is negative or non-finite");
    }
    sum.add(b);
  }
  const double s = sum.value();
  if (std::abs(s - 1.0) > 1e-6) {
    throw std::invalid_argument(
        "WeightVector: weights sum to " + std::to_string(s) +
        "; renormalization is only applied within 1e-6 of 1");
  }
  CompensatedSum sq;
  for (double& b : beta_) {
    b /= s;
    sq.add(b * b);
  }
  sum_sq_ = sq.value();
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("WeightVector: need at least one site");
  return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

bool WeightVector::is_uniform(double tol) const noexcept {
  const double u = 1.0 / static_cast<double>(beta_.size());
  for (double b : beta_) {
    if (std::abs(b - u) > tol) return false;
  }
  return true;
}

ReportingModel::ReportingModel(double alpha) : alpha_(alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0) {
    throw std::invalid_argument("ReportingModel: alpha must lie in (0, 1], got " +
                                std::to_string(alpha));
  }
}

EpochField::EpochField(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("EpochField: need at least one site");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("EpochField: value " + std::to_string(i) +
                                  " is non-finite");
    }
  }
}

double EpochField::spatial_variance() const {
  const double n = static_cast<double>(values_.size());
  CompensatedSum s1, s2;
  for (double v : values_) {
    s1.add(v);
    s2.add(v * v);
  }
  const double mean = s1.value() / n;
  return s2.value() / n - mean * mean;
}

}  // namespace spavar
