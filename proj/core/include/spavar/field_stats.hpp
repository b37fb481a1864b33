#pragma once

#include <cstddef>
#include <vector>

#include "spavar/types.hpp"

namespace spavar {

/// First moments E r_i and raw second moments E r_i r_j of the underlying
/// field. Second moments are stored raw (not as covariances) because the
/// variance formulas are written in raw moments; the covariance
/// sigma_ij = E r_i r_j - E r_i E r_j is derived on demand.
///
/// Construction enforces symmetry of the second-moment matrix to 1e-12
/// relative and the diagonal bound E r_i^2 >= (E r_i)^2 - 1e-12. Positive
/// semidefiniteness of the implied covariance (within eigenvalue tolerance
/// -1e-9 * max diagonal) is probed but only recorded: empirical moment
/// estimates are routinely indefinite by sampling noise, and the
/// estimators remain evaluable. Callers that care check covariance_psd().
class FieldStats {
 public:
  /// second is dense row-major n*n.
  FieldStats(std::vector<double> mu, std::vector<double> second);

  /// Single-epoch embedding: mu_i = r_i, second_ij = r_i r_j.
  static FieldStats degenerate(const EpochField& field);

  std::size_t n() const noexcept { return mu_.size(); }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const std::vector<double>& second() const noexcept { return second_; }
  double mu(std::size_t i) const noexcept { return mu_[i]; }
  double second(std::size_t i, std::size_t j) const noexcept {
    return second_[i * mu_.size() + j];
  }
  double covariance(std::size_t i, std::size_t j) const noexcept {
    return second(i, j) - mu_[i] * mu_[j];
  }

  /// Result of the construction-time Cholesky probe of cov + tol*I.
  bool covariance_psd() const noexcept { return psd_ok_; }

 private:
  std::vector<double> mu_;
  std::vector<double> second_;
  bool psd_ok_ = true;
};

/// The field sums the uniform-weight formulas consume. sum_mu_outer is
/// unused by the estimators but kept for diagnostics.
struct FieldAggregates {
  std::size_t n = 0;
  double sum_mu = 0.0;        // sum_i E r_i
  double sum_mu_outer = 0.0;  // sum_{i != j} E r_i E r_j
  double sum_sq = 0.0;        // sum_i E r_i^2
  double sum_cross = 0.0;     // sum_{i != j} E r_i r_j
};

FieldAggregates aggregates_from(const FieldStats& stats);
FieldAggregates aggregates_from(const EpochField& field);

}  // namespace spavar
