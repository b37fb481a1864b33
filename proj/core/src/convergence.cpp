#include "spavar/convergence.hpp"

#include <cmath>
#include <limits>

namespace spavar {

std::string to_string(ConvergenceVerdict v) {
  switch (v) {
    case ConvergenceVerdict::assured: return "assured";
    case ConvergenceVerdict::likely: return "likely";
    case ConvergenceVerdict::risky: return "risky";
  }
  return "unknown";
}

std::pair<bool, double> ratio_condition(const ReportingModel& rm) {
  const double a = rm.alpha();
  return {a > 0.5, 1.0 - (1.0 - a) / a};
}

double hoeffding_bound(const WeightVector& w, const ReportingModel& rm) {
  const double a = rm.alpha();
  if (a >= 1.0) return 0.0;
  return std::exp(-2.0 * a * a / w.sum_sq());
}

double sd_distance(std::size_t n, const ReportingModel& rm) {
  const double a = rm.alpha();
  if (a >= 1.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<double>(n) * a / (1.0 - a));
}

ConvergenceReport convergence_report(const WeightVector& w,
                                     const ReportingModel& rm) {
  ConvergenceReport report;
  report.alpha = rm.alpha();
  const auto [assured, margin] = ratio_condition(rm);
  report.ratio_margin = margin;
  report.hoeffding_tail = hoeffding_bound(w, rm);
  report.sd_distance = sd_distance(w.size(), rm);
  if (assured) {
    report.verdict = ConvergenceVerdict::assured;
  } else if (report.hoeffding_tail < 1e-3) {
    report.verdict = ConvergenceVerdict::likely;
  } else {
    report.verdict = ConvergenceVerdict::risky;
  }
  return report;
}

}  // namespace spavar
