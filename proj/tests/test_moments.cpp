#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "spavar/field_stats.hpp"
#include "spavar/moments.hpp"
#include "spavar/montecarlo.hpp"
#include "spavar/types.hpp"

using namespace spavar;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-30});
}

FieldStats constant_field(std::size_t n, double c) {
  return FieldStats::degenerate(EpochField(std::vector<double>(n, c)));
}

}  // namespace

TEST_CASE("moment_s frozen examples") {
  const WeightVector w2 = WeightVector::uniform(2);
  CHECK(moment_s(1, w2, ReportingModel(0.37)) == doctest::Approx(0.37).epsilon(1e-14));
  // N=2 uniform, alpha=0.5: enumeration over 4 masks gives E S^2 = 0.375
  CHECK(rel_close(moment_s(2, w2, ReportingModel(0.5)), 0.375, 1e-14));
  const WeightVector skew(std::vector<double>{0.7, 0.2, 0.1});
  CHECK(rel_close(moment_s(2, skew, ReportingModel(1.0)), 1.0, 1e-14));
  CHECK(rel_close(moment_s(4, skew, ReportingModel(1.0)), 1.0, 1e-14));
  CHECK_THROWS_AS(moment_s(5, w2, ReportingModel(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(moment_s(0, w2, ReportingModel(0.5)), std::invalid_argument);
}

TEST_CASE("moment_rs frozen examples") {
  const WeightVector w2 = WeightVector::uniform(2);
  const FieldStats ones = constant_field(2, 1.0);
  // l=0 is alpha * sum beta_i E r_i
  CHECK(rel_close(moment_rs(0, w2, ReportingModel(0.6), ones), 0.6, 1e-14));
  // constant field r = 1 forces E RS = E S^2
  CHECK(rel_close(moment_rs(1, w2, ReportingModel(0.5), ones),
                  moment_s(2, w2, ReportingModel(0.5)), 1e-13));
  CHECK(rel_close(moment_rs(1, w2, ReportingModel(0.5), ones), 0.375, 1e-13));
  const FieldStats three = constant_field(3, 1.0);
  CHECK_THROWS_AS(moment_rs(1, w2, ReportingModel(0.5), three),
                  std::invalid_argument);
}

TEST_CASE("moment_r2s frozen examples") {
  const WeightVector w2 = WeightVector::uniform(2);
  const FieldStats ones = constant_field(2, 1.0);
  // r = 1 forces R^2 S^2 = S^4
  CHECK(rel_close(moment_r2s(2, w2, ReportingModel(0.5), ones),
                  moment_s(4, w2, ReportingModel(0.5)), 1e-13));
  // alpha = 1: E R^2 = sum beta_i^2 E r_i^2 + sum_{i!=j} beta_i beta_j E r_i r_j
  const FieldStats stats = oracles::random_field_stats(4, 11);
  const WeightVector w4(oracles::random_weights(4, 11));
  double direct = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      direct += w4[i] * w4[j] * stats.second(i, j);
    }
  }
  CHECK(rel_close(moment_r2s(0, w4, ReportingModel(1.0), stats), direct, 1e-12));
}

TEST_CASE("power-sum reductions match the raw multi-index loops") {
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const std::vector<double> beta = oracles::random_weights(n, seed);
      const WeightVector w(beta);
      const FieldStats stats = oracles::random_field_stats(n, seed);
      for (double alpha : {0.15, 0.5, 0.85}) {
        const ReportingModel rm(alpha);
        for (int l = 1; l <= 4; ++l) {
          CHECK(rel_close(moment_s(l, w, rm),
                          oracles::naive_moment_s(l, w.beta(), alpha), 1e-12));
        }
        for (int l = 0; l <= 2; ++l) {
          CHECK(rel_close(moment_rs(l, w, rm, stats),
                          oracles::naive_moment_rs(l, w.beta(), alpha, stats.mu()),
                          1e-12));
          CHECK(rel_close(moment_r2s(l, w, rm, stats),
                          oracles::naive_moment_r2s(l, w.beta(), alpha, stats),
                          1e-12));
        }
      }
    }
  }
}

TEST_CASE("closed forms match unconditional mask enumeration") {
  for (std::size_t n : {2u, 4u, 7u, 10u, 12u}) {
    const WeightVector w(oracles::random_weights(n, n));
    const FieldStats stats = oracles::random_field_stats(n, n);
    for (double alpha : {0.2, 0.65, 1.0}) {
      const ReportingModel rm(alpha);
      for (int l = 0; l <= 2; ++l) {
        const MomentTriple oracle = exact_moment_enumeration(w, rm, stats, l);
        if (l >= 1) CHECK(rel_close(moment_s(l, w, rm), oracle.s, 1e-10));
        CHECK(rel_close(moment_rs(l, w, rm, stats), oracle.rs, 1e-10));
        CHECK(rel_close(moment_r2s(l, w, rm, stats), oracle.r2s, 1e-10));
      }
      for (int l = 3; l <= 4; ++l) {
        CHECK(rel_close(moment_s(l, w, rm),
                        exact_moment_enumeration(w, rm, stats, l).s, 1e-10));
      }
    }
  }
}

TEST_CASE("uniform closed forms equal the general formulas at beta = 1/N") {
  for (std::size_t n = 2; n <= 12; ++n) {
    const WeightVector w = WeightVector::uniform(n);
    const FieldStats stats = oracles::random_field_stats(n, 77 + n);
    const FieldAggregates agg = aggregates_from(stats);
    for (double alpha : {0.1, 0.5, 0.9, 1.0}) {
      const ReportingModel rm(alpha);
      for (int l = 1; l <= 4; ++l) {
        CHECK(rel_close(moment_s_uniform(l, n, rm), moment_s(l, w, rm), 1e-12));
      }
      for (int l = 0; l <= 2; ++l) {
        CHECK(rel_close(moment_rs_uniform(l, n, rm, agg),
                        moment_rs(l, w, rm, stats), 1e-12));
        CHECK(rel_close(moment_r2s_uniform(l, n, rm, agg),
                        moment_r2s(l, w, rm, stats), 1e-12));
      }
    }
  }
}

TEST_CASE("alpha-polynomial coefficients match the rational-function tables") {
  for (std::size_t n : {4u, 7u, 11u}) {
    const double nd = static_cast<double>(n);
    const double n2 = nd * nd, n3 = n2 * nd, n4 = n3 * nd, n5 = n4 * nd;
    // E S^l coefficients
    CHECK(rel_close(uniform_s_coefficient(1, 1, n), 1.0, 1e-12));
    CHECK(rel_close(uniform_s_coefficient(2, 1, n), 1.0 / nd, 1e-12));
    CHECK(rel_close(uniform_s_coefficient(2, 2, n), (nd - 1) / nd, 1e-12));
    CHECK(rel_close(uniform_s_coefficient(3, 1, n), 1.0 / n2, 1e-12));
    CHECK(rel_close(uniform_s_coefficient(3, 2, n), 3 * (nd - 1) / n2, 1e-12));
    CHECK(rel_close(uniform_s_coefficient(3, 3, n), (nd - 1) * (nd - 2) / n2, 1e-12));
    CHECK(rel_close(uniform_s_coefficient(4, 1, n), 1.0 / n3, 1e-12));
    CHECK(rel_close(uniform_s_coefficient(4, 2, n), 7 * (nd - 1) / n3, 1e-12));
    CHECK(rel_close(uniform_s_coefficient(4, 3, n), 6 * (nd - 1) * (nd - 2) / n3,
                    1e-12));
    CHECK(rel_close(uniform_s_coefficient(4, 4, n),
                    (nd - 1) * (nd - 2) * (nd - 3) / n3, 1e-12));
    // E R S^l coefficients of E r_i
    CHECK(rel_close(uniform_rs_coefficient(0, 1, n), 1.0 / nd, 1e-12));
    CHECK(rel_close(uniform_rs_coefficient(1, 1, n), 1.0 / n2, 1e-12));
    CHECK(rel_close(uniform_rs_coefficient(1, 2, n), (nd - 1) / n2, 1e-12));
    CHECK(rel_close(uniform_rs_coefficient(2, 2, n), 3 * (nd - 1) / n3, 1e-12));
    CHECK(rel_close(uniform_rs_coefficient(3, 2, n), 7 * (nd - 1) / n4, 1e-12));
    CHECK(rel_close(uniform_rs_coefficient(3, 4, n),
                    (nd - 1) * (nd - 2) * (nd - 3) / n4, 1e-12));
    // E R^2 S^l coefficients of E r_i^2
    CHECK(rel_close(uniform_r2s_diag_coefficient(0, 1, n), 1.0 / n2, 1e-12));
    CHECK(rel_close(uniform_r2s_diag_coefficient(1, 1, n), 1.0 / n3, 1e-12));
    CHECK(rel_close(uniform_r2s_diag_coefficient(1, 2, n), (nd - 1) / n3, 1e-12));
    CHECK(rel_close(uniform_r2s_diag_coefficient(2, 2, n), 3 * (nd - 1) / n4,
                    1e-12));
    CHECK(rel_close(uniform_r2s_diag_coefficient(3, 3, n),
                    6 * (nd - 1) * (nd - 2) / n5, 1e-12));
    // E R^2 S^l coefficients of E r_i r_j; the m = 1 column vanishes
    for (int l = 0; l <= 2; ++l) {
      CHECK(uniform_r2s_cross_coefficient(l, 1, n) == 0.0);
    }
    CHECK(rel_close(uniform_r2s_cross_coefficient(0, 2, n), 1.0 / n2, 1e-12));
    CHECK(rel_close(uniform_r2s_cross_coefficient(1, 2, n), 2.0 / n3, 1e-12));
    CHECK(rel_close(uniform_r2s_cross_coefficient(1, 3, n), (nd - 2) / n3, 1e-12));
    CHECK(rel_close(uniform_r2s_cross_coefficient(2, 2, n), 4.0 / n4, 1e-12));
    CHECK(rel_close(uniform_r2s_cross_coefficient(2, 3, n), 5 * (nd - 2) / n4,
                    1e-12));
    CHECK(rel_close(uniform_r2s_cross_coefficient(2, 4, n),
                    (nd - 2) * (nd - 3) / n4, 1e-12));
  }
}

TEST_CASE("uniform moment examples and caps") {
  CHECK(rel_close(moment_s_uniform(2, 2, ReportingModel(0.5)), 0.375, 1e-13));
  for (int l = 1; l <= 6; ++l) {
    CHECK(rel_close(moment_s_uniform(l, 9, ReportingModel(1.0)), 1.0, 1e-13));
  }
  FieldAggregates agg;
  agg.n = 5;
  agg.sum_mu = 10.0;
  agg.sum_sq = 30.0;
  agg.sum_cross = 70.0;
  // l=0: alpha * (1/N) * sum E r_i
  CHECK(rel_close(moment_rs_uniform(0, 5, ReportingModel(0.3), agg),
                  0.3 * 10.0 / 5.0, 1e-13));
  // alpha=1: (1/N) sum E r_i regardless of l
  for (int l = 0; l <= 5; ++l) {
    CHECK(rel_close(moment_rs_uniform(l, 5, ReportingModel(1.0), agg), 2.0, 1e-13));
  }
  CHECK_THROWS_AS(moment_s_uniform(26, 5, ReportingModel(0.5)), std::domain_error);
  CHECK_THROWS_AS(moment_rs_uniform(25, 5, ReportingModel(0.5), agg),
                  std::domain_error);
  CHECK_THROWS_AS(moment_r2s_uniform(24, 5, ReportingModel(0.5), agg),
                  std::domain_error);
  FieldAggregates one;
  one.n = 1;
  CHECK_THROWS_AS(moment_r2s_uniform(0, 1, ReportingModel(0.5), one),
                  std::domain_error);
}

TEST_CASE("coefficient identity holds exactly") {
  CHECK(coefficient_identity_check(0, 2, 5));
  CHECK(coefficient_identity_check(2, 4, 6));
  CHECK(coefficient_identity_check(1, 3, 4));
  for (int l = 0; l <= 2; ++l) {
    for (int m = 1; m <= 4; ++m) {
      for (std::size_t n = 4; n <= 8; ++n) {
        CHECK(coefficient_identity_check(l, m, n));
      }
    }
  }
}

TEST_CASE("compute_moment_set") {
  SUBCASE("alpha = 1 collapses every S moment to 1") {
    const WeightVector w(oracles::random_weights(6, 5));
    const FieldStats stats = oracles::random_field_stats(6, 5);
    const MomentSet ms = compute_moment_set(w, ReportingModel(1.0), stats);
    CHECK(ms.s1 == 1.0);
    CHECK(rel_close(ms.s2, 1.0, 1e-13));
    CHECK(rel_close(ms.s3, 1.0, 1e-13));
    CHECK(rel_close(ms.s4, 1.0, 1e-13));
  }
  SUBCASE("s1 is alpha exactly") {
    const WeightVector w = WeightVector::uniform(7);
    const FieldStats stats = oracles::random_field_stats(7, 6);
    CHECK(compute_moment_set(w, ReportingModel(0.713), stats).s1 == 0.713);
  }
  SUBCASE("uniform N=2 constant field at alpha=0.5") {
    const MomentSet ms = compute_moment_set(WeightVector::uniform(2),
                                            ReportingModel(0.5),
                                            constant_field(2, 1.0));
    CHECK(rel_close(ms.rs1, 0.375, 1e-13));
    CHECK(rel_close(ms.rs1, ms.s2, 1e-13));
  }
  SUBCASE("uniform detection routes through the closed forms consistently") {
    const WeightVector w = WeightVector::uniform(9);
    const FieldStats stats = oracles::random_field_stats(9, 31);
    const ReportingModel rm(0.42);
    const MomentSet ms = compute_moment_set(w, rm, stats);
    CHECK(rel_close(ms.s3, moment_s(3, w, rm), 1e-12));
    CHECK(rel_close(ms.rs2, moment_rs(2, w, rm, stats), 1e-12));
    CHECK(rel_close(ms.r2s2, moment_r2s(2, w, rm, stats), 1e-12));
  }
}

TEST_CASE("E S^l is nondecreasing in alpha") {
  const WeightVector uniform = WeightVector::uniform(6);
  const WeightVector skewed(oracles::random_weights(6, 9));
  for (int l = 1; l <= 4; ++l) {
    for (const WeightVector& w : {uniform, skewed}) {
      double previous = 0.0;
      for (int k = 1; k <= 50; ++k) {
        const double value = moment_s(l, w, ReportingModel(k / 50.0));
        CHECK(value >= previous - 1e-14);
        previous = value;
      }
    }
  }
}

TEST_CASE("large-N limits") {
  FieldAggregates agg;
  agg.n = 10000;
  agg.sum_mu = 10000.0 * 1.3;
  agg.sum_sq = 10000.0 * (1.3 * 1.3 + 0.4);
  agg.sum_cross = 10000.0 * 9999.0 * (1.3 * 1.3 + 0.01);
  const ReportingModel rm(0.8);

  const LargeNMoments limit4 = moments_large_n(4, rm, agg);
  CHECK(limit4.s == doctest::Approx(std::pow(0.8, 4)).epsilon(1e-14));

  const LargeNMoments limit0 = moments_large_n(0, rm, agg);
  CHECK(limit0.s == 1.0);
  CHECK(rel_close(limit0.rs, 0.8 * 1.3, 1e-13));
  const double er2 = 0.8 * agg.sum_sq / 1e8 + 0.64 * agg.sum_cross / 1e8;
  CHECK(rel_close(limit0.r2s, er2, 1e-13));

  // exact uniform moment approaches alpha^l: 0.1% at N = 1e4 for l = 2
  const double exact = moment_s_uniform(2, 10000, rm);
  CHECK(std::abs(exact - 0.64) / 0.64 < 1e-3);
}
