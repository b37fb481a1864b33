#include "spavar/moments.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spavar/combinatorics.hpp"
#include "spavar/compensated.hpp"

namespace spavar {

namespace {

// Power sums of the weights: p[k] = sum_i beta_i^k.
struct WeightPowerSums {
  double p1, p2, p3, p4;
};

WeightPowerSums weight_power_sums(const WeightVector& w) {
  CompensatedSum p1, p2, p3, p4;
  for (double b : w.beta()) {
    const double b2 = b * b;
    p1.add(b);
    p2.add(b2);
    p3.add(b2 * b);
    p4.add(b2 * b2);
  }
  return {p1.value(), p2.value(), p3.value(), p4.value()};
}

// Weighted first-moment sums: t[k] = sum_i beta_i^k E r_i.
struct MeanSums {
  double t1, t2, t3;
};

MeanSums mean_sums(const WeightVector& w, const FieldStats& f) {
  CompensatedSum t1, t2, t3;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double b = w[i];
    const double m = f.mu(i);
    t1.add(b * m);
    t2.add(b * b * m);
    t3.add(b * b * b * m);
  }
  return {t1.value(), t2.value(), t3.value()};
}

// Second-moment reductions. q[k] = sum_i beta_i^k E r_i^2 (diagonal);
// a11 = sum_{i!=j} beta_i beta_j E r_i r_j, and likewise with one index
// weighted by beta^2 (a21), both (a22) or beta^3 (a31). Each full bilinear
// form is accumulated over the matrix and the diagonal subtracted
// explicitly, which keeps the cost at one O(N^2) pass.
struct SecondMomentSums {
  double q2, q3, q4;
  double a11, a21, a22, a31;
};

SecondMomentSums second_moment_sums(const WeightVector& w, const FieldStats& f) {
  const std::size_t n = w.size();
  CompensatedSum q2, q3, q4, g11, g21, g22, g31;
  for (std::size_t i = 0; i < n; ++i) {
    const double bi = w[i];
    const double bi2 = bi * bi;
    const double mii = f.second(i, i);
    q2.add(bi2 * mii);
    q3.add(bi2 * bi * mii);
    q4.add(bi2 * bi2 * mii);
    for (std::size_t j = 0; j < n; ++j) {
      const double bj = w[j];
      const double mij = f.second(i, j);
      g11.add(bi * bj * mij);
      g21.add(bi2 * bj * mij);
      g22.add(bi2 * bj * bj * mij);
      g31.add(bi2 * bi * bj * mij);
    }
  }
  SecondMomentSums s;
  s.q2 = q2.value();
  s.q3 = q3.value();
  s.q4 = q4.value();
  s.a11 = g11.value() - s.q2;
  s.a21 = g21.value() - s.q3;
  s.a22 = g22.value() - s.q4;
  s.a31 = g31.value() - s.q4;
  return s;
}

double moment_s_from_sums(int l, double a, const WeightPowerSums& p) {
  switch (l) {
    case 1:
      return a * p.p1;
    case 2:
      // alpha sum beta_k^2 + alpha^2 sum_{j!=k} beta_j beta_k
      return a * p.p2 + a * a * (p.p1 * p.p1 - p.p2);
    case 3:
      // alpha sum beta^3 + 3 alpha^2 sum_{j!=k} beta_j beta_k^2
      // + alpha^3 sum over ordered distinct triples
      return a * p.p3 + 3 * a * a * (p.p1 * p.p2 - p.p3) +
             a * a * a * (p.p1 * p.p1 * p.p1 - 3 * p.p1 * p.p2 + 2 * p.p3);
    case 4: {
      const double p1 = p.p1, p2 = p.p2, p3 = p.p3, p4 = p.p4;
      const double a2 = a * a;
      CompensatedSum acc;
      acc.add(a * p4);
      acc.add(a2 * (4 * (p1 * p3 - p4) + 3 * (p2 * p2 - p4)));
      acc.add(a2 * a * 6 * (p1 * p1 * p2 - 2 * p1 * p3 - p2 * p2 + 2 * p4));
      acc.add(a2 * a2 *
              (p1 * p1 * p1 * p1 - 6 * p1 * p1 * p2 + 3 * p2 * p2 + 8 * p1 * p3 -
               6 * p4));
      return acc.value();
    }
    default:
      throw std::invalid_argument("moment_s: l must be in {1, 2, 3, 4}, got " +
                                  std::to_string(l));
  }
}

double moment_rs_from_sums(int l, double a, const WeightPowerSums& p,
                           const MeanSums& t) {
  switch (l) {
    case 0:
      return a * t.t1;
    case 1:
      return a * t.t2 + a * a * (t.t1 * p.p1 - t.t2);
    case 2: {
      CompensatedSum acc;
      acc.add(a * t.t3);
      acc.add(a * a * ((t.t1 * p.p2 - t.t3) + 2 * (t.t2 * p.p1 - t.t3)));
      acc.add(a * a * a *
              (t.t1 * p.p1 * p.p1 - 2 * t.t2 * p.p1 - t.t1 * p.p2 + 2 * t.t3));
      return acc.value();
    }
    default:
      throw std::invalid_argument("moment_rs: l must be in {0, 1, 2}, got " +
                                  std::to_string(l));
  }
}

double moment_r2s_from_sums(int l, double a, const WeightPowerSums& p,
                            const SecondMomentSums& s) {
  switch (l) {
    case 0:
      return a * s.q2 + a * a * s.a11;
    case 1: {
      CompensatedSum acc;
      acc.add(a * s.q3);
      acc.add(a * a * ((s.q2 * p.p1 - s.q3) + 2 * s.a21));
      acc.add(a * a * a * (p.p1 * s.a11 - 2 * s.a21));
      return acc.value();
    }
    case 2: {
      // Distinct-index groups of E (sum beta s r)^2 (sum beta s)^2, with the
      // third-index and fourth-index sums folded onto the pair sums.
      const double w_kk2 = p.p2 * s.a11 - 2 * s.a31;
      const double w_i2 =
          (p.p1 * p.p1 - p.p2) * s.q2 - 2 * p.p1 * s.q3 + 2 * s.q4;
      const double w_i2jk = p.p1 * s.a21 - s.a31 - s.a22;
      const double w_4 = (p.p1 * p.p1 - p.p2) * s.a11 - 4 * p.p1 * s.a21 +
                         4 * s.a31 + 2 * s.a22;
      CompensatedSum acc;
      acc.add(a * s.q4);
      acc.add(a * a *
              ((s.q2 * p.p2 - s.q4) + 2 * s.a31 + 2 * (s.q3 * p.p1 - s.q4) +
               2 * s.a22));
      acc.add(a * a * a * (w_kk2 + w_i2 + 4 * w_i2jk));
      acc.add(a * a * a * a * w_4);
      return acc.value();
    }
    default:
      throw std::invalid_argument("moment_r2s: l must be in {0, 1, 2}, got " +
                                  std::to_string(l));
  }
}

void check_dimensions(const WeightVector& w, const FieldStats& f,
                      const char* where) {
  if (w.size() != f.n()) {
    throw std::invalid_argument(std::string(where) + ": weight count " +
                                std::to_string(w.size()) +
                                " != field site count " + std::to_string(f.n()));
  }
}

void check_stirling_arg(int l, const char* where) {
  if (l > kStirlingCap) {
    throw std::domain_error(std::string(where) + ": order " + std::to_string(l) +
                            " exceeds the exact-arithmetic cap " +
                            std::to_string(kStirlingCap));
  }
}

unsigned __int128 checked_mul(unsigned __int128 a, unsigned __int128 b) {
  constexpr unsigned __int128 kMax = ~static_cast<unsigned __int128>(0);
  if (a != 0 && b > kMax / a) {
    throw std::domain_error("coefficient_identity_check: 128-bit overflow");
  }
  return a * b;
}

}  // namespace

double moment_s(int l, const WeightVector& w, const ReportingModel& rm) {
  return moment_s_from_sums(l, rm.alpha(), weight_power_sums(w));
}

double moment_rs(int l, const WeightVector& w, const ReportingModel& rm,
                 const FieldStats& f) {
  check_dimensions(w, f, "moment_rs");
  return moment_rs_from_sums(l, rm.alpha(), weight_power_sums(w),
                             mean_sums(w, f));
}

double moment_r2s(int l, const WeightVector& w, const ReportingModel& rm,
                  const FieldStats& f) {
  check_dimensions(w, f, "moment_r2s");
  return moment_r2s_from_sums(l, rm.alpha(), weight_power_sums(w),
                              second_moment_sums(w, f));
}

double uniform_s_coefficient(int l, int m, std::size_t n) {
  if (l < 1) throw std::invalid_argument("uniform_s_coefficient: l must be >= 1");
  check_stirling_arg(l, "uniform_s_coefficient");
  if (m < 1 || m > l || static_cast<std::size_t>(m) > n) return 0.0;
  // {l over m} * N(N-1)...(N-m+1) / N^l, interleaved as ratios to stay
  // well-scaled for large N.
  double c = static_cast<double>(stirling2(l, m));
  const double nd = static_cast<double>(n);
  for (int k = 0; k < m; ++k) c *= (nd - k) / nd;
  for (int k = m; k < l; ++k) c /= nd;
  return c;
}

double uniform_rs_coefficient(int l, int m, std::size_t n) {
  if (l < 0) throw std::invalid_argument("uniform_rs_coefficient: l must be >= 0");
  check_stirling_arg(l + 1, "uniform_rs_coefficient");
  if (m < 1 || m > l + 1 || static_cast<std::size_t>(m) > n) return 0.0;
  // {l+1 over m} * (N-1)...(N-m+1) / N^{l+1}
  double c = static_cast<double>(stirling2(l + 1, m));
  const double nd = static_cast<double>(n);
  for (int k = 1; k < m; ++k) c *= (nd - k) / nd;
  for (int k = m - 1; k < l + 1; ++k) c /= nd;
  return c;
}

double uniform_r2s_diag_coefficient(int l, int m, std::size_t n) {
  if (l < 0) {
    throw std::invalid_argument("uniform_r2s_diag_coefficient: l must be >= 0");
  }
  check_stirling_arg(l + 1, "uniform_r2s_diag_coefficient");
  if (m < 1 || m > l + 1 || static_cast<std::size_t>(m) > n) return 0.0;
  return uniform_rs_coefficient(l, m, n) / static_cast<double>(n);
}

double uniform_r2s_cross_coefficient(int l, int m, std::size_t n) {
  if (l < 0) {
    throw std::invalid_argument("uniform_r2s_cross_coefficient: l must be >= 0");
  }
  check_stirling_arg(l + 2, "uniform_r2s_cross_coefficient");
  if (n < 2) {
    throw std::domain_error(
        "uniform_r2s_cross_coefficient: off-diagonal term needs N >= 2");
  }
  if (m < 1 || m > l + 2 || static_cast<std::size_t>(m) > n) return 0.0;
  const std::uint64_t hi = stirling2(l + 2, m);
  const std::uint64_t lo = (m <= l + 1) ? stirling2(l + 1, m) : 0;
  if (hi == lo) return 0.0;  // m = 1 column vanishes identically
  // ({l+2 over m} - {l+1 over m}) * (N-2)...(N-m+1) / N^{l+2}
  double c = static_cast<double>(hi - lo);
  const double nd = static_cast<double>(n);
  for (int k = 2; k < m; ++k) c *= (nd - k) / nd;
  for (int k = m - 2; k < l + 2; ++k) c /= nd;
  return c;
}

double moment_s_uniform(int l, std::size_t n, const ReportingModel& rm) {
  if (l < 1) throw std::invalid_argument("moment_s_uniform: l must be >= 1");
  check_stirling_arg(l, "moment_s_uniform");
  if (n == 0) throw std::invalid_argument("moment_s_uniform: n must be >= 1");
  const double a = rm.alpha();
  const int m_max = static_cast<int>(std::min<std::size_t>(l, n));
  CompensatedSum acc;
  double apow = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    apow *= a;
    acc.add(uniform_s_coefficient(l, m, n) * apow);
  }
  return acc.value();
}

double moment_rs_uniform(int l, std::size_t n, const ReportingModel& rm,
                         const FieldAggregates& agg) {
  if (l < 0) throw std::invalid_argument("moment_rs_uniform: l must be >= 0");
  check_stirling_arg(l + 1, "moment_rs_uniform");
  if (n == 0 || agg.n != n) {
    throw std::invalid_argument("moment_rs_uniform: aggregate size " +
                                std::to_string(agg.n) + " != n " +
                                std::to_string(n));
  }
  const double a = rm.alpha();
  const int m_max = static_cast<int>(std::min<std::size_t>(l + 1, n));
  CompensatedSum acc;
  double apow = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    apow *= a;
    acc.add(uniform_rs_coefficient(l, m, n) * apow);
  }
  return agg.sum_mu * acc.value();
}

double moment_r2s_uniform(int l, std::size_t n, const ReportingModel& rm,
                          const FieldAggregates& agg) {
  if (l < 0) throw std::invalid_argument("moment_r2s_uniform: l must be >= 0");
  check_stirling_arg(l + 2, "moment_r2s_uniform");
  if (n < 2) {
    throw std::domain_error("moment_r2s_uniform: needs N >= 2, got " +
                            std::to_string(n));
  }
  if (agg.n != n) {
    throw std::invalid_argument("moment_r2s_uniform: aggregate size " +
                                std::to_string(agg.n) + " != n " +
                                std::to_string(n));
  }
  const double a = rm.alpha();
  CompensatedSum diag, cross;
  double apow = 1.0;
  const int m_diag = static_cast<int>(std::min<std::size_t>(l + 1, n));
  const int m_cross = static_cast<int>(std::min<std::size_t>(l + 2, n));
  for (int m = 1; m <= m_cross; ++m) {
    apow *= a;
    if (m <= m_diag) diag.add(uniform_r2s_diag_coefficient(l, m, n) * apow);
    cross.add(uniform_r2s_cross_coefficient(l, m, n) * apow);
  }
  return agg.sum_sq * diag.value() + agg.sum_cross * cross.value();
}

bool coefficient_identity_check(int l, int m, std::size_t n) {
  if (l < 0) {
    throw std::invalid_argument("coefficient_identity_check: l must be >= 0");
  }
  check_stirling_arg(l + 2, "coefficient_identity_check");
  if (m < 1 || static_cast<std::size_t>(m) > n || n < 2) {
    throw std::domain_error("coefficient_identity_check: need 1 <= m <= n, n >= 2");
  }
  // Cleared of the common 1/N^{l+2} factor:
  //   N * {l+1,m} (N-1)!/(N-m)!  +  N(N-1) * ({l+2,m}-{l+1,m}) (N-2)!/(N-m)!
  //   == {l+2,m} * N!/(N-m)!
  const std::uint64_t s_hi = stirling2(l + 2, m);
  const std::uint64_t s_lo = (m <= l + 1) ? stirling2(l + 1, m) : 0;
  const auto n64 = static_cast<std::int64_t>(n);

  unsigned __int128 lhs = checked_mul(n, checked_mul(s_lo, falling_factorial(n64 - 1, m - 1)));
  if (s_hi != s_lo) {
    // (N-2)!/(N-m)! carries m-2 factors; the m = 1 case never reaches here
    // because the Stirling difference is zero there.
    unsigned __int128 cross = checked_mul(
        checked_mul(static_cast<unsigned __int128>(n) * (n - 1), s_hi - s_lo),
        falling_factorial(n64 - 2, m - 2));
    lhs += cross;
  }
  const unsigned __int128 rhs = checked_mul(s_hi, falling_factorial(n64, m));
  return lhs == rhs;
}

MomentSet compute_moment_set(const WeightVector& w, const ReportingModel& rm,
                             const FieldStats& f) {
  check_dimensions(w, f, "compute_moment_set");
  const double a = rm.alpha();
  MomentSet ms;
  ms.s1 = a;

  const bool uniform = w.size() >= 2 && w.is_uniform();
  if (uniform) {
    const std::size_t n = w.size();
    const FieldAggregates agg = aggregates_from(f);
    ms.s2 = moment_s_uniform(2, n, rm);
    ms.s3 = moment_s_uniform(3, n, rm);
    ms.s4 = moment_s_uniform(4, n, rm);
    ms.rs0 = moment_rs_uniform(0, n, rm, agg);
    ms.rs1 = moment_rs_uniform(1, n, rm, agg);
    ms.rs2 = moment_rs_uniform(2, n, rm, agg);
    ms.r2s0 = moment_r2s_uniform(0, n, rm, agg);
    ms.r2s1 = moment_r2s_uniform(1, n, rm, agg);
    ms.r2s2 = moment_r2s_uniform(2, n, rm, agg);
#ifndef NDEBUG
    const auto close = [](double x, double y) {
      return std::abs(x - y) <= 1e-9 * std::max({std::abs(x), std::abs(y), 1e-30});
    };
    assert(close(ms.s2, moment_s(2, w, rm)));
    assert(close(ms.s4, moment_s(4, w, rm)));
    assert(close(ms.rs1, moment_rs(1, w, rm, f)));
    assert(close(ms.r2s2, moment_r2s(2, w, rm, f)));
#endif
    return ms;
  }

  const WeightPowerSums p = weight_power_sums(w);
  const MeanSums t = mean_sums(w, f);
  const SecondMomentSums s = second_moment_sums(w, f);
  ms.s2 = moment_s_from_sums(2, a, p);
  ms.s3 = moment_s_from_sums(3, a, p);
  ms.s4 = moment_s_from_sums(4, a, p);
  ms.rs0 = moment_rs_from_sums(0, a, p, t);
  ms.rs1 = moment_rs_from_sums(1, a, p, t);
  ms.rs2 = moment_rs_from_sums(2, a, p, t);
  ms.r2s0 = moment_r2s_from_sums(0, a, p, s);
  ms.r2s1 = moment_r2s_from_sums(1, a, p, s);
  ms.r2s2 = moment_r2s_from_sums(2, a, p, s);
  return ms;
}

LargeNMoments moments_large_n(int l, const ReportingModel& rm,
                              const FieldAggregates& agg) {
  if (l < 0) throw std::invalid_argument("moments_large_n: l must be >= 0");
  check_stirling_arg(l, "moments_large_n");
  if (agg.n == 0) throw std::invalid_argument("moments_large_n: empty aggregates");
  const double a = rm.alpha();
  const double nd = static_cast<double>(agg.n);
  const double er = a * agg.sum_mu / nd;
  const double er2 = a * agg.sum_sq / (nd * nd) + a * a * agg.sum_cross / (nd * nd);
  const double al = std::pow(a, l);
  return {al, er * al, er2 * al};
}

}  // namespace spavar
