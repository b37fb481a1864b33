#include "spavar/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "spavar/combinatorics.hpp"
#include "spavar/convergence.hpp"
#include "spavar/estimators.hpp"
#include "spavar/io.hpp"
#include "spavar/moments.hpp"
#include "spavar/montecarlo.hpp"
#include "spavar/synthetic.hpp"
#include "spavar/types.hpp"

namespace spavar::cli {

namespace {

using io::format_double;

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

double require_alpha(const RunConfig& c) {
  if (!c.alpha) throw InputError("--alpha is required");
  return *c.alpha;
}

const std::string& require_path(const std::optional<std::string>& p,
                                const char* flag) {
  if (!p) throw InputError(std::string(flag) + " is required");
  return *p;
}

EpochField load_field(const RunConfig& c) {
  return io::read_epoch_csv(require_path(c.field_path, "--field"));
}

FieldStats load_stats(const RunConfig& c) {
  FieldStats stats =
      io::read_field_stats_csv(require_path(c.mu_path, "--mu"),
                               require_path(c.second_path, "--second"));
  if (!stats.covariance_psd()) {
    std::cerr << "warning: implied covariance is not positive semidefinite "
                 "within tolerance; estimates may misbehave\n";
  }
  return stats;
}

WeightVector load_weights(const RunConfig& c, std::size_t n) {
  if (!c.weights_path) return WeightVector::uniform(n);
  WeightVector w = io::read_weights_csv(*c.weights_path);
  if (w.size() != n) {
    throw InputError("--weights has " + std::to_string(w.size()) +
                     " sites but the field inputs have " + std::to_string(n));
  }
  return w;
}

void validate_alpha_grid(const std::vector<double>& alphas) {
  for (double a : alphas) {
    if (!(a > 0.0) || a > 1.0) {
      throw InputError("alpha grid value " + format_double(a) +
                       " outside (0, 1]");
    }
  }
}

// Runs the emitter against --out or stdout.
void emit(const RunConfig& c, const std::function<void(std::ostream&)>& body) {
  if (c.out_path) {
    std::ofstream out(*c.out_path, std::ios::binary);
    if (!out) throw InputError("cannot open output file " + *c.out_path);
    body(out);
  } else {
    body(std::cout);
  }
}

void emit_row(const RunConfig& c, std::ostream& out,
              const std::vector<std::pair<std::string, std::string>>& fields,
              const std::vector<std::string>& quoted = {}) {
  const auto is_quoted = [&](const std::string& key) {
    for (const auto& q : quoted) {
      if (q == key) return true;
    }
    return false;
  };
  if (c.format == OutputFormat::csv) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << fields[i].first << (i + 1 < fields.size() ? ',' : '\n');
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << fields[i].second << (i + 1 < fields.size() ? ',' : '\n');
    }
  } else {
    const auto is_json_number = [](const std::string& v) {
      return v != "inf" && v != "-inf" && v != "nan" && v != "-nan";
    };
    out << '{';
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << '"' << fields[i].first << "\":";
      if (is_quoted(fields[i].first)) {
        out << '"' << fields[i].second << '"';
      } else if (is_json_number(fields[i].second)) {
        out << fields[i].second;
      } else {
        out << "null";
      }
      if (i + 1 < fields.size()) out << ',';
    }
    out << "}\n";
  }
}

int run_stirling(const RunConfig& c) {
  if (!c.stirling_l || !c.stirling_m) {
    throw InputError("stirling requires --l and --m");
  }
  const std::uint64_t value = stirling2(*c.stirling_l, *c.stirling_m);
  emit(c, [&](std::ostream& out) { out << value << '\n'; });
  return kExitOk;
}

int run_moments(const RunConfig& c) {
  const ReportingModel rm(require_alpha(c));
  const FieldStats stats = load_stats(c);
  const WeightVector w = load_weights(c, stats.n());
  const MomentSet ms = compute_moment_set(w, rm, stats);
  emit(c, [&](std::ostream& out) {
    const std::vector<std::pair<std::string, double>> rows = {
        {"s1", ms.s1},     {"s2", ms.s2},     {"s3", ms.s3},
        {"s4", ms.s4},     {"rs0", ms.rs0},   {"rs1", ms.rs1},
        {"rs2", ms.rs2},   {"r2s0", ms.r2s0}, {"r2s1", ms.r2s1},
        {"r2s2", ms.r2s2},
    };
    if (c.format == OutputFormat::csv) {
      out << "moment,value\n";
      for (const auto& [name, value] : rows) {
        out << name << ',' << format_double(value) << '\n';
      }
    } else {
      for (const auto& [name, value] : rows) {
        out << "{\"moment\":\"" << name << "\",\"value\":" << format_double(value)
            << "}\n";
      }
    }
  });
  return kExitOk;
}

int run_variance(const RunConfig& c) {
  if (c.mode.empty()) throw InputError("variance requires --mode");
  VarianceEstimate est;
  if (c.mode == "second-order") {
    const ReportingModel rm(require_alpha(c));
    const FieldStats stats = load_stats(c);
    const WeightVector w = load_weights(c, stats.n());
    est = variance_second_order(compute_moment_set(w, rm, stats));
  } else if (c.mode == "uniform-second-order" || c.mode == "alpha-near-one") {
    const ReportingModel rm(require_alpha(c));
    FieldAggregates agg;
    if (c.field_path) {
      agg = aggregates_from(load_field(c));
    } else {
      agg = aggregates_from(load_stats(c));
    }
    est = c.mode == "uniform-second-order"
              ? variance_uniform_second_order(agg.n, rm, agg)
              : variance_alpha_near_one(agg.n, rm, agg);
  } else if (c.mode == "large-n") {
    const ReportingModel rm(require_alpha(c));
    if (c.field_path) {
      const FieldAggregates agg = aggregates_from(load_field(c));
      est = variance_large_n_uniform(agg.n, rm, agg);
    } else {
      const FieldStats stats = load_stats(c);
      est = variance_large_n(rm, load_weights(c, stats.n()), stats);
    }
  } else if (c.mode == "alpha-one") {
    const FieldStats stats = load_stats(c);
    est = variance_alpha_one(load_weights(c, stats.n()), stats);
  } else if (c.mode == "epoch") {
    est = variance_single_epoch(ReportingModel(require_alpha(c)), load_field(c));
  } else if (c.mode == "epoch-large-n") {
    est = variance_single_epoch_large_n(ReportingModel(require_alpha(c)),
                                        load_field(c));
  } else {
    throw InputError("unknown variance mode '" + c.mode + "'");
  }
  emit(c, [&](std::ostream& out) {
    emit_row(c, out,
             {{"method", to_string(est.method)},
              {"value", format_double(est.value)},
              {"negative", est.negative() ? "1" : "0"}},
             {"method"});
  });
  return kExitOk;
}

int run_check(const RunConfig& c) {
  const ReportingModel rm(require_alpha(c));
  WeightVector w = [&] {
    if (c.weights_path) return io::read_weights_csv(*c.weights_path);
    if (!c.n) throw InputError("check requires --weights or --n");
    return WeightVector::uniform(*c.n);
  }();
  const ConvergenceReport report = convergence_report(w, rm);
  emit(c, [&](std::ostream& out) {
    emit_row(c, out,
             {{"alpha", format_double(report.alpha)},
              {"ratio_margin", format_double(report.ratio_margin)},
              {"hoeffding_tail", format_double(report.hoeffding_tail)},
              {"sd_distance", format_double(report.sd_distance)},
              {"verdict", to_string(report.verdict)}},
             {"verdict"});
  });
  return kExitOk;
}

int run_simulate(const RunConfig& c) {
  const ReportingModel rm(require_alpha(c));
  const EpochField field = load_field(c);
  const WeightVector w = load_weights(c, field.size());
  EnsembleSpec spec;
  spec.n_members = c.members;
  spec.seed = c.seed;
  spec.threads = c.threads;
  const EnsembleResult result = simulate_epoch_ensemble(field, w, rm, spec);
  emit(c, [&](std::ostream& out) {
    emit_row(c, out,
             {{"mean_of_means", format_double(result.mean_of_means)},
              {"ensemble_variance", format_double(result.ensemble_variance)},
              {"n_members", std::to_string(result.n_members)},
              {"rejected_count", std::to_string(result.rejected_count)},
              {"standard_error_of_variance",
               format_double(result.standard_error_of_variance)}});
  });
  return kExitOk;
}

int run_sweep(const RunConfig& c) {
  if (c.alphas.empty() || c.ns.empty()) {
    throw InputError("sweep requires --alphas and --ns");
  }
  validate_alpha_grid(c.alphas);
  const EpochField field = load_field(c);
  const SweepGrid grid = relative_error_sweep(field, c.alphas, c.ns, c.members,
                                              c.seed, c.threads);
  emit(c, [&](std::ostream& out) {
    if (c.format == OutputFormat::csv) {
      io::write_sweep_csv(out, grid);
    } else {
      io::write_sweep_jsonl(out, grid);
    }
  });
  return kExitOk;
}

int run_corrections(const RunConfig& c) {
  if (c.alphas.empty() || c.ns.empty()) {
    throw InputError("corrections requires --alphas and --ns");
  }
  validate_alpha_grid(c.alphas);
  emit(c, [&](std::ostream& out) {
    if (c.format == OutputFormat::csv) {
      out << "alpha,n,bracket1_order_n,bracket1_order_n2,bracket2_order_n,"
             "bracket2_order_n2,bracket3_order_n,bracket3_order_n2\n";
    }
    for (std::size_t n : c.ns) {
      for (double alpha : c.alphas) {
        const auto terms = correction_terms(n, ReportingModel(alpha));
        if (c.format == OutputFormat::csv) {
          out << format_double(alpha) << ',' << n;
          for (const auto& b : terms) {
            out << ',' << format_double(b.order_n) << ','
                << format_double(b.order_n2);
          }
          out << '\n';
        } else {
          out << "{\"alpha\":" << format_double(alpha) << ",\"n\":" << n
              << ",\"bracket1\":[" << format_double(terms[0].order_n) << ','
              << format_double(terms[0].order_n2) << "],\"bracket2\":["
              << format_double(terms[1].order_n) << ','
              << format_double(terms[1].order_n2) << "],\"bracket3\":["
              << format_double(terms[2].order_n) << ','
              << format_double(terms[2].order_n2) << "]}\n";
        }
      }
    }
  });
  return kExitOk;
}

int run_synth(const RunConfig& c) {
  SyntheticFieldParams params;
  if (c.n) params.n_sites = *c.n;
  const EpochField field = synthetic_field(c.seed, params);
  emit(c, [&](std::ostream& out) { io::write_epoch_csv(out, field); });
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    if (config.subcommand == "stirling") return run_stirling(config);
    if (config.subcommand == "moments") return run_moments(config);
    if (config.subcommand == "variance") return run_variance(config);
    if (config.subcommand == "check") return run_check(config);
    if (config.subcommand == "simulate") return run_simulate(config);
    if (config.subcommand == "sweep") return run_sweep(config);
    if (config.subcommand == "corrections") return run_corrections(config);
    if (config.subcommand == "synth") return run_synth(config);
    throw InputError("unknown subcommand '" + config.subcommand + "'");
  } catch (const io::ParseError& e) {
    std::cerr << "error: input: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: input: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: domain: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: domain: " << e.what() << '\n';
    return kExitDomainError;
  }
}

}  // namespace spavar::cli
