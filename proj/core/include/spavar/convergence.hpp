#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "spavar/types.hpp"

namespace spavar {

enum class ConvergenceVerdict { assured, likely, risky };

std::string to_string(ConvergenceVerdict v);

/// Diagnostics for convergence of the truncated variance series.
struct ConvergenceReport {
  double alpha = 0.0;
  /// 1 - (1-alpha)/alpha. Positive iff alpha > 1/2, when convergence is
  /// assured regardless of N.
  double ratio_margin = 0.0;
  /// Upper bound on P(S >= 2 E S), the event where the series ratio test
  /// can fail.
  double hoeffding_tail = 0.0;
  /// How many binomial standard deviations S must stray for that event:
  /// sqrt(N alpha / (1-alpha)); +infinity at alpha = 1.
  double sd_distance = 0.0;
  ConvergenceVerdict verdict = ConvergenceVerdict::risky;
};

/// (alpha > 1/2, 1 - (1-alpha)/alpha).
std::pair<bool, double> ratio_condition(const ReportingModel& rm);

/// exp(-2 alpha^2 / sum beta_i^2), the tail bound on P(S >= 2 E S).
/// Uniform weights give the smallest bound exp(-2 N alpha^2); skewed
/// weights weaken it. Returns 0 at alpha = 1 (S <= 1 < 2 E S, so the
/// event is impossible).
double hoeffding_bound(const WeightVector& w, const ReportingModel& rm);

/// sqrt(N alpha / (1-alpha)); +infinity at alpha = 1.
double sd_distance(std::size_t n, const ReportingModel& rm);

/// Aggregates the three diagnostics. Verdict: assured when alpha > 1/2;
/// likely when alpha <= 1/2 but the tail bound is below 1e-3; risky
/// otherwise. The thresholds are a convenience on top of the raw numbers,
/// which are always reported alongside.
ConvergenceReport convergence_report(const WeightVector& w,
                                     const ReportingModel& rm);

}  // namespace spavar
