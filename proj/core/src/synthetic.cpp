#include "spavar/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spavar/montecarlo.hpp"
#include "spavar/rng.hpp"

namespace spavar {

EpochField synthetic_field(std::uint64_t seed,
                           const SyntheticFieldParams& params) {
  if (params.n_sites == 0) {
    throw std::invalid_argument("synthetic_field: need at least one site");
  }
  if (!(params.corr_length > 0.0)) {
    throw std::invalid_argument("synthetic_field: corr_length must be positive");
  }
  rng::Stream stream = rng::Stream(seed).fork(kTagSynthetic);
  const double rho = std::exp(-1.0 / params.corr_length);
  const double innovation = std::sqrt(1.0 - rho * rho);

  std::vector<double> values(params.n_sites);
  double g = stream.next_gaussian();
  values[0] = std::exp(params.log_median + params.log_sigma * g);
  for (std::size_t i = 1; i < params.n_sites; ++i) {
    g = rho * g + innovation * stream.next_gaussian();
    values[i] = std::exp(params.log_median + params.log_sigma * g);
  }
  return EpochField(std::move(values));
}

}  // namespace spavar
