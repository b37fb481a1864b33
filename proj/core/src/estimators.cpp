#include "spavar/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spavar/compensated.hpp"

namespace spavar {

namespace {

void require_n_at_least_2(std::size_t n, const char* where) {
  if (n < 2) {
    throw std::domain_error(std::string(where) +
                            ": needs N >= 2 (the off-diagonal sum is "
                            "meaningless for a single site)");
  }
}

}  // namespace

std::string to_string(VarianceMethod m) {
  switch (m) {
    case VarianceMethod::second_order: return "second-order";
    case VarianceMethod::uniform_second_order: return "uniform-second-order";
    case VarianceMethod::large_n: return "large-n";
    case VarianceMethod::alpha_one: return "alpha-one";
    case VarianceMethod::alpha_near_one: return "alpha-near-one";
    case VarianceMethod::single_epoch: return "epoch";
    case VarianceMethod::single_epoch_large_n: return "epoch-large-n";
  }
  return "unknown";
}

VarianceEstimate variance_second_order(const MomentSet& ms) {
  const double es = ms.s1;
  const double es2 = es * es;
  const double es3 = es2 * es;
  const double es4 = es2 * es2;
  const double es5 = es4 * es;
  const double es6 = es4 * es2;
  const double er = ms.rs0;

  CompensatedSum acc;
  acc.add(-6.0 * er * er / es2);
  acc.add(4.0 * ms.r2s0 / es2);
  acc.add(10.0 * er * er * ms.s2 / es4);
  acc.add(-(ms.rs1 * ms.rs1) / es4);
  acc.add(-er * er * ms.s2 * ms.s2 / es6);
  acc.add(2.0 * er * ms.rs2 / es4);
  acc.add(-4.0 * ms.r2s1 / es3);
  acc.add(-6.0 * er * er * ms.s3 / es5);
  acc.add(er * er * ms.s4 / es6);
  acc.add(ms.r2s2 / es4);
  acc.add(2.0 * er * ms.rs1 / es3 * (ms.s2 / es2 - 1.0));

  return {acc.value(), VarianceMethod::second_order, {}};
}

VarianceEstimate variance_uniform_second_order(std::size_t n,
                                               const ReportingModel& rm,
                                               const FieldAggregates& agg) {
  require_n_at_least_2(n, "variance_uniform_second_order");
  if (agg.n != n) {
    throw std::invalid_argument("variance_uniform_second_order: aggregate size " +
                                std::to_string(agg.n) + " != n " +
                                std::to_string(n));
  }
  const double a = rm.alpha();
  const double x = (a - 1.0) / a;  // every correction carries this factor
  const double nd = static_cast<double>(n);
  const double inv_n = 1.0 / nd;
  const double inv_n2 = inv_n * inv_n;

  const double b1_n = inv_n * x;
  const double b1_n2 = inv_n2 * x * (2.0 * a - 1.0) / a;
  const double b2_n = 3.0 * inv_n * x;
  const double b2_n2 = inv_n2 * x * (6.0 * a - 4.0) / a;
  const double b3_n = 2.0 * inv_n * x;
  const double b3_n2 = -inv_n2 * 3.0 * x * x;
  const double b3_n3 = inv_n2 * inv_n * (6.0 * x * x + x / (a * a));

  const double bracket1 = 1.0 + b1_n + b1_n2;
  const double bracket2 = 1.0 + b2_n + b2_n2;
  const double bracket3 = 1.0 + b3_n + b3_n2 + b3_n3;

  const double mean = agg.sum_mu * inv_n;
  CompensatedSum acc;
  acc.add(bracket1 / a * inv_n2 * agg.sum_sq);
  acc.add(bracket2 * inv_n2 * agg.sum_cross);
  acc.add(-bracket3 * mean * mean);

  VarianceEstimate est{acc.value(), VarianceMethod::uniform_second_order, {}};
  est.correction_profile = {b1_n, b1_n2, b2_n, b2_n2, b3_n, b3_n2};
  return est;
}

VarianceEstimate variance_large_n(const ReportingModel& rm, const WeightVector& w,
                                  const FieldStats& f) {
  const double a = rm.alpha();
  const double er = moment_rs(0, w, rm, f);
  const double er2 = moment_r2s(0, w, rm, f);
  const double sigma_r2 = er2 - er * er;
  return {sigma_r2 / (a * a), VarianceMethod::large_n, {}};
}

VarianceEstimate variance_large_n_uniform(std::size_t n, const ReportingModel& rm,
                                          const FieldAggregates& agg) {
  if (n == 0 || agg.n != n) {
    throw std::invalid_argument("variance_large_n_uniform: bad aggregate size");
  }
  const double a = rm.alpha();
  const double nd = static_cast<double>(n);
  const double er = a * agg.sum_mu / nd;
  const double er2 = a * agg.sum_sq / (nd * nd) + a * a * agg.sum_cross / (nd * nd);
  return {(er2 - er * er) / (a * a), VarianceMethod::large_n, {}};
}

VarianceEstimate variance_alpha_one(const WeightVector& w, const FieldStats& f) {
  if (w.size() != f.n()) {
    throw std::invalid_argument("variance_alpha_one: dimension mismatch");
  }
  const std::size_t n = w.size();
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      acc.add(w[i] * w[j] * f.covariance(i, j));
    }
  }
  return {acc.value(), VarianceMethod::alpha_one, {}};
}

VarianceEstimate variance_alpha_near_one(std::size_t n, const ReportingModel& rm,
                                         const FieldAggregates& agg) {
  require_n_at_least_2(n, "variance_alpha_near_one");
  if (agg.n != n) {
    throw std::invalid_argument("variance_alpha_near_one: bad aggregate size");
  }
  const double a = rm.alpha();
  const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  const double mean = agg.sum_mu / static_cast<double>(n);
  CompensatedSum acc;
  acc.add(agg.sum_sq * inv_n2 / a);
  acc.add(agg.sum_cross * inv_n2);
  acc.add(-mean * mean);
  return {acc.value(), VarianceMethod::alpha_near_one, {}};
}

VarianceEstimate variance_single_epoch(const ReportingModel& rm,
                                       const EpochField& field) {
  require_n_at_least_2(field.size(), "variance_single_epoch");
  const double a = rm.alpha();
  const double nd = static_cast<double>(field.size());
  const double inv_n = 1.0 / nd;

  CompensatedSum sum, sum_sq;
  for (double v : field.values()) {
    sum.add(v);
    sum_sq.add(v * v);
  }
  const double q = sum_sq.value();
  const double t = sum.value();
  const double cross = t * t - q;  // sum_{j != i} r_i r_j

  const double b1 = 1.0 + inv_n * (2.0 * a - 1.0) / a -
                    inv_n * inv_n * (a * a + a - 1.0) / (a * a) +
                    inv_n * inv_n * inv_n * (6.0 * a * a - 6.0 * a + 1.0) / (a * a);
  const double b2 = 1.0 + inv_n * (7.0 * a - 5.0) / a -
                    inv_n * inv_n * (6.0 * a * a - 6.0 * a + 1.0) / (a * a);

  const double lead = (1.0 - a) / a;  // exactly 0 at alpha = 1
  const double value =
      lead * (inv_n * inv_n * b1 * q - inv_n * inv_n * inv_n * b2 * cross);
  return {value, VarianceMethod::single_epoch, {}};
}

VarianceEstimate variance_single_epoch_large_n(const ReportingModel& rm,
                                               const EpochField& field) {
  const double a = rm.alpha();
  const double value = (1.0 - a) / a * field.spatial_variance() /
                       static_cast<double>(field.size());
  return {value, VarianceMethod::single_epoch_large_n, {}};
}

std::array<BracketCorrections, 3> correction_terms(std::size_t n,
                                                   const ReportingModel& rm) {
  if (n == 0) throw std::invalid_argument("correction_terms: n must be >= 1");
  const double a = rm.alpha();
  const double x = (a - 1.0) / a;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double inv_n2 = inv_n * inv_n;
  return {{
      {inv_n * x, inv_n2 * x * (2.0 * a - 1.0) / a},
      {3.0 * inv_n * x, inv_n2 * x * (6.0 * a - 4.0) / a},
      {2.0 * inv_n * x, -inv_n2 * 3.0 * x * x},
  }};
}

}  // namespace spavar
