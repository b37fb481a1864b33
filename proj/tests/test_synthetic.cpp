#include <doctest.h>

#include <cmath>

#include "spavar/synthetic.hpp"

using namespace spavar;

TEST_CASE("synthetic field shape and determinism") {
  const EpochField field = synthetic_field(42);
  CHECK(field.size() == 357);
  for (double v : field.values()) CHECK(v > 0.0);

  const EpochField again = synthetic_field(42);
  for (std::size_t i = 0; i < field.size(); ++i) CHECK(field[i] == again[i]);

  const EpochField different = synthetic_field(43);
  bool any_differ = false;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != different[i]) any_differ = true;
  }
  CHECK(any_differ);
}

TEST_CASE("synthetic field is right-skewed with neighbor correlation") {
  SyntheticFieldParams params;
  params.n_sites = 20000;  // long series for stable sample statistics
  const EpochField field = synthetic_field(7, params);

  double mean = 0.0;
  for (double v : field.values()) mean += v;
  mean /= field.size();
  double var = 0.0, skew = 0.0;
  for (double v : field.values()) {
    var += (v - mean) * (v - mean);
    skew += (v - mean) * (v - mean) * (v - mean);
  }
  var /= field.size();
  skew = skew / field.size() / std::pow(var, 1.5);
  // lognormal with log-sd 1: cv = sqrt(e - 1) ~ 1.31, strong right skew
  CHECK(std::sqrt(var) / mean > 0.8);
  CHECK(skew > 1.0);

  // log-scale lag-1 autocorrelation should be close to exp(-1/corr_length)
  double log_mean = 0.0;
  for (double v : field.values()) log_mean += std::log(v);
  log_mean /= field.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < field.size(); ++i) {
    const double a = std::log(field[i]) - log_mean;
    const double b = std::log(field[i + 1]) - log_mean;
    num += a * b;
    den += a * a;
  }
  const double rho = num / den;
  CHECK(rho > 0.7);
  CHECK(rho < 0.9);
}
