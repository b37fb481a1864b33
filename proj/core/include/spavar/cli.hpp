#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spavar::cli {

enum class OutputFormat { csv, jsonlines };

/// Everything a run needs; all state flows through here (no environment).
struct RunConfig {
  std::string subcommand;  // stirling | moments | variance | check |
                           // simulate | sweep | corrections | synth
  std::optional<std::string> field_path;
  std::optional<std::string> mu_path;
  std::optional<std::string> second_path;
  std::optional<std::string> weights_path;
  std::optional<std::string> out_path;  // stdout when absent
  OutputFormat format = OutputFormat::csv;

  std::optional<double> alpha;
  std::vector<double> alphas;
  std::optional<std::size_t> n;
  std::vector<std::size_t> ns;
  std::int64_t members = 20000;
  std::uint64_t seed = 42;
  int threads = 1;

  std::string mode;  // variance subcommand formula selector
  std::optional<int> stirling_l;
  std::optional<int> stirling_m;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitDomainError = 2;

/// Dispatches one subcommand. Returns 0 on success, 1 on input errors
/// (unreadable/malformed files, bad flags, dimension mismatches) and 2 on
/// domain or numeric errors (caps exceeded, infeasible parameters). Every
/// failure prints a single machine-parsable line to stderr:
///   error: input: <reason>   or   error: domain: <reason>
int run(const RunConfig& config);

}  // namespace spavar::cli
