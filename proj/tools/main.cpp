// spavar: variance estimators for spatial means under randomly missing
// observations. See README.md for the subcommand reference.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spavar/cli.hpp"
#include "spavar/io.hpp"

namespace {

using spavar::cli::RunConfig;

void add_output_options(CLI::App* cmd, RunConfig& config, std::string& format) {
  cmd->add_option("--out", config.out_path, "Output file (stdout when omitted)");
  cmd->add_option("--format", format, "Output format: csv | jsonlines")
      ->check(CLI::IsMember({"csv", "jsonlines"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance estimators for spatial means with missing observations"};
  app.require_subcommand(1);

  RunConfig config;
  std::string format = "csv";
  std::string alphas_text;
  std::string ns_text;

  auto* stirling = app.add_subcommand(
      "stirling", "Print a Stirling number of the second kind");
  stirling->add_option("--l", config.stirling_l, "Number of elements")->required();
  stirling->add_option("--m", config.stirling_m, "Number of nonempty sets")
      ->required();
  add_output_options(stirling, config, format);

  auto* moments = app.add_subcommand(
      "moments", "Closed-form mixed moments of the reported sums");
  moments->add_option("--alpha", config.alpha, "Reporting probability")->required();
  moments->add_option("--mu", config.mu_path, "First-moments CSV")->required();
  moments->add_option("--second", config.second_path, "Second-moments CSV")
      ->required();
  moments->add_option("--weights", config.weights_path,
                      "Weights CSV (uniform when omitted)");
  add_output_options(moments, config, format);

  auto* variance = app.add_subcommand("variance", "Variance of the ratio mean");
  variance
      ->add_option("--mode", config.mode,
                   "second-order | uniform-second-order | large-n | alpha-one | "
                   "alpha-near-one | epoch | epoch-large-n")
      ->required();
  variance->add_option("--alpha", config.alpha, "Reporting probability");
  variance->add_option("--field", config.field_path, "Epoch field CSV");
  variance->add_option("--mu", config.mu_path, "First-moments CSV");
  variance->add_option("--second", config.second_path, "Second-moments CSV");
  variance->add_option("--weights", config.weights_path, "Weights CSV");
  add_output_options(variance, config, format);

  auto* check = app.add_subcommand(
      "check", "Convergence diagnostics for the truncated series");
  check->add_option("--alpha", config.alpha, "Reporting probability")->required();
  check->add_option("--weights", config.weights_path, "Weights CSV");
  check->add_option("--n", config.n, "Site count for uniform weights");
  add_output_options(check, config, format);

  auto* simulate = app.add_subcommand(
      "simulate", "Seeded Bernoulli-mask ensemble for one epoch");
  simulate->add_option("--alpha", config.alpha, "Reporting probability")
      ->required();
  simulate->add_option("--field", config.field_path, "Epoch field CSV")
      ->required();
  simulate->add_option("--weights", config.weights_path, "Weights CSV");
  simulate->add_option("--members", config.members, "Ensemble size");
  simulate->add_option("--seed", config.seed, "64-bit stream seed");
  simulate->add_option("--threads", config.threads, "Worker threads");
  add_output_options(simulate, config, format);

  auto* sweep = app.add_subcommand(
      "sweep", "Relative error of the large-N epoch formula over an "
               "alpha x N grid");
  sweep->add_option("--field", config.field_path, "Epoch field CSV")->required();
  sweep->add_option("--alphas", alphas_text, "Alpha grid (a:b:step or list)")
      ->required();
  sweep->add_option("--ns", ns_text, "Subset-size grid (a:b:step or list)")
      ->required();
  sweep->add_option("--members", config.members, "Ensemble size per cell");
  sweep->add_option("--seed", config.seed, "64-bit stream seed");
  sweep->add_option("--threads", config.threads, "Worker threads");
  add_output_options(sweep, config, format);

  auto* corrections = app.add_subcommand(
      "corrections", "1/N and 1/N^2 correction terms of the uniform "
                     "second-order brackets");
  corrections->add_option("--alphas", alphas_text, "Alpha grid")->required();
  corrections->add_option("--ns", ns_text, "N grid")->required();
  add_output_options(corrections, config, format);

  auto* synth = app.add_subcommand(
      "synth", "Write a synthetic lognormal field with spatial correlation");
  synth->add_option("--n", config.n, "Site count (default 357)");
  synth->add_option("--seed", config.seed, "64-bit stream seed");
  add_output_options(synth, config, format);

  CLI11_PARSE(app, argc, argv);

  config.subcommand = app.get_subcommands().front()->get_name();
  config.format = format == "jsonlines" ? spavar::cli::OutputFormat::jsonlines
                                        : spavar::cli::OutputFormat::csv;
  try {
    if (!alphas_text.empty()) config.alphas = spavar::io::parse_real_grid(alphas_text);
    if (!ns_text.empty()) config.ns = spavar::io::parse_index_grid(ns_text);
  } catch (const spavar::io::ParseError& e) {
    std::cerr << "error: input: " << e.what() << '\n';
    return spavar::cli::kExitInputError;
  }
  return spavar::cli::run(config);
}
