#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "spavar/field_stats.hpp"
#include "spavar/montecarlo.hpp"
#include "spavar/types.hpp"

namespace spavar::io {

/// Malformed or unreadable input; messages carry "file:line:" context where
/// a line is involved.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trippable decimal form (std::to_chars), so written files
/// are byte-deterministic and re-read values compare bit-equal.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& context);

/// "start:stop:step" (endpoints inclusive within 1e-12) or a comma list.
/// The result must be strictly increasing.
std::vector<double> parse_real_grid(const std::string& text);
std::vector<std::size_t> parse_index_grid(const std::string& text);

// Epoch CSV: header row, then one "site_id,value" line per site; the line
// order defines the site index order and every value must be finite.
EpochField read_epoch_csv(const std::string& path);
void write_epoch_csv(std::ostream& out, const EpochField& field);

// Weights CSV: header row, then "site_id,weight" lines.
WeightVector read_weights_csv(const std::string& path);

// Field statistics: a mu file ("site_id,mu") plus a second-moment file,
// either a dense N x N matrix CSV (any header) or a sparse 0-based
// "i,j,value" triplet list (detected by that exact header). Asymmetry up
// to 1e-9 relative is averaged away; anything larger is rejected.
FieldStats read_field_stats_csv(const std::string& mu_path,
                                const std::string& second_path);

// Sweep grid CSV: alpha,n,mc_variance,formula_variance,relative_error,
// flag_gt_0.1 with the flag written as 0, 1 or "degenerate" (degenerate
// cells carry relative_error nan).
void write_sweep_csv(std::ostream& out, const SweepGrid& grid);
void write_sweep_jsonl(std::ostream& out, const SweepGrid& grid);
SweepGrid read_sweep_csv(const std::string& path);

/// Field-by-field equality with NaN == NaN, for round-trip checks.
bool sweep_grids_equal(const SweepGrid& a, const SweepGrid& b);

}  // namespace spavar::io
