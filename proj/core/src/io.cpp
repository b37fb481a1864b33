#include "spavar/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>

namespace spavar::io {

namespace {

std::string location(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double parse_double_at(const std::string& text, const std::string& path,
                       std::size_t line) {
  return parse_double(trim(text), location(path, line));
}

double parse_finite_at(const std::string& text, const std::string& path,
                       std::size_t line) {
  const double v = parse_double_at(text, path, line);
  if (!std::isfinite(v)) {
    throw ParseError(location(path, line) + ": non-finite value '" + trim(text) +
                     "'");
  }
  return v;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  return in;
}

// Reads "header + one record per line" files, handing each data line to
// the sink with its 1-based line number. Empty trailing lines are ignored;
// an empty file (no header) is an error.
template <typename Sink>
void for_each_record(const std::string& path, Sink&& sink) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path + ": empty file (header row is mandatory)");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    sink(line, line_no);
  }
}

bool is_sparse_header(const std::string& header) {
  const auto fields = split_fields(header);
  if (fields.size() != 3) return false;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  return lower(trim(fields[0])) == "i" && lower(trim(fields[1])) == "j" &&
         lower(trim(fields[2])) == "value";
}

std::vector<double> symmetrize(std::vector<double> m, std::size_t n,
                               const std::string& path) {
  double max_abs = 0.0;
  for (double v : m) max_abs = std::max(max_abs, std::abs(v));
  double max_skew = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      max_skew = std::max(max_skew, std::abs(m[i * n + j] - m[j * n + i]));
    }
  }
  if (max_skew > 1e-9 * std::max(max_abs, 1e-300)) {
    throw ParseError(path + ": second-moment matrix asymmetric beyond 1e-9 "
                            "relative (max skew " +
                     format_double(max_skew) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m[i * n + j] + m[j * n + i]);
      m[i * n + j] = avg;
      m[j * n + i] = avg;
    }
  }
  return m;
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) return "0";  // normalize negative zero
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

double parse_double(const std::string& text, const std::string& context) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end || text.empty()) {
    throw ParseError(context + ": cannot parse '" + text + "' as a number");
  }
  return value;
}

std::vector<double> parse_real_grid(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const auto fields = [&] {
      std::vector<std::string> parts;
      std::stringstream ss(text);
      std::string part;
      while (std::getline(ss, part, ':')) parts.push_back(part);
      return parts;
    }();
    if (fields.size() != 3) {
      throw ParseError("grid '" + text + "': expected start:stop:step");
    }
    const double start = parse_double(trim(fields[0]), "grid start");
    const double stop = parse_double(trim(fields[1]), "grid stop");
    const double step = parse_double(trim(fields[2]), "grid step");
    if (!(step > 0.0) || stop < start - 1e-12) {
      throw ParseError("grid '" + text + "': need step > 0 and stop >= start");
    }
    for (double v = start; v <= stop + 1e-12; v += step) {
      values.push_back(std::min(v, stop));
    }
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
      values.push_back(parse_double(trim(part), "grid value"));
    }
  }
  if (values.empty()) throw ParseError("grid '" + text + "' is empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw ParseError("grid '" + text + "' is not strictly increasing");
    }
  }
  return values;
}

std::vector<std::size_t> parse_index_grid(const std::string& text) {
  const auto reals = parse_real_grid(text);
  std::vector<std::size_t> values;
  values.reserve(reals.size());
  for (double v : reals) {
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9 || rounded < 1.0) {
      throw ParseError("grid '" + text + "': '" + format_double(v) +
                       "' is not a positive integer");
    }
    values.push_back(static_cast<std::size_t>(rounded));
  }
  return values;
}

EpochField read_epoch_csv(const std::string& path) {
  std::vector<double> values;
  for_each_record(path, [&](const std::string& line, std::size_t line_no) {
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw ParseError(location(path, line_no) + ": expected 'site_id,value', got " +
                       std::to_string(fields.size()) + " fields");
    }
    values.push_back(parse_finite_at(fields[1], path, line_no));
  });
  if (values.empty()) throw ParseError(path + ": no data rows");
  return EpochField(std::move(values));
}

void write_epoch_csv(std::ostream& out, const EpochField& field) {
  out << "site_id,value\n";
  for (std::size_t i = 0; i < field.size(); ++i) {
    out << i << ',' << format_double(field[i]) << '\n';
  }
}

WeightVector read_weights_csv(const std::string& path) {
  std::vector<double> weights;
  for_each_record(path, [&](const std::string& line, std::size_t line_no) {
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw ParseError(location(path, line_no) +
                       ": expected 'site_id,weight', got " +
                       std::to_string(fields.size()) + " fields");
    }
    weights.push_back(parse_finite_at(fields[1], path, line_no));
  });
  if (weights.empty()) throw ParseError(path + ": no data rows");
  try {
    return WeightVector(std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
}

FieldStats read_field_stats_csv(const std::string& mu_path,
                                const std::string& second_path) {
  std::vector<double> mu;
  for_each_record(mu_path, [&](const std::string& line, std::size_t line_no) {
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw ParseError(location(mu_path, line_no) +
                       ": expected 'site_id,mu', got " +
                       std::to_string(fields.size()) + " fields");
    }
    mu.push_back(parse_finite_at(fields[1], mu_path, line_no));
  });
  if (mu.empty()) throw ParseError(mu_path + ": no data rows");
  const std::size_t n = mu.size();

  std::ifstream probe = open_or_throw(second_path);
  std::string header;
  std::getline(probe, header);
  probe.close();

  std::vector<double> second(n * n, 0.0);
  if (is_sparse_header(header)) {
    for_each_record(second_path, [&](const std::string& line, std::size_t line_no) {
      const auto fields = split_fields(line);
      if (fields.size() != 3) {
        throw ParseError(location(second_path, line_no) +
                         ": expected 'i,j,value'");
      }
      const double di = parse_double_at(fields[0], second_path, line_no);
      const double dj = parse_double_at(fields[1], second_path, line_no);
      if (di < 0 || dj < 0 || di != std::floor(di) || dj != std::floor(dj) ||
          di >= static_cast<double>(n) || dj >= static_cast<double>(n)) {
        throw ParseError(location(second_path, line_no) +
                         ": index out of range for " + std::to_string(n) +
                         " sites");
      }
      const auto i = static_cast<std::size_t>(di);
      const auto j = static_cast<std::size_t>(dj);
      second[i * n + j] = parse_finite_at(fields[2], second_path, line_no);
    });
  } else {
    std::size_t row = 0;
    for_each_record(second_path, [&](const std::string& line, std::size_t line_no) {
      const auto fields = split_fields(line);
      if (fields.size() != n) {
        throw ParseError(location(second_path, line_no) + ": expected " +
                         std::to_string(n) + " columns, got " +
                         std::to_string(fields.size()));
      }
      if (row >= n) {
        throw ParseError(location(second_path, line_no) + ": more than " +
                         std::to_string(n) + " rows");
      }
      for (std::size_t j = 0; j < n; ++j) {
        second[row * n + j] = parse_finite_at(fields[j], second_path, line_no);
      }
      ++row;
    });
    if (row != n) {
      throw ParseError(second_path + ": got " + std::to_string(row) +
                       " rows, expected " + std::to_string(n));
    }
  }

  second = symmetrize(std::move(second), n, second_path);
  try {
    return FieldStats(std::move(mu), std::move(second));
  } catch (const std::invalid_argument& e) {
    throw ParseError(second_path + ": " + e.what());
  }
}

namespace {

std::string flag_text(const SweepCell& cell) {
  if (cell.degenerate) return "degenerate";
  return cell.exceeds_threshold ? "1" : "0";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepGrid& grid) {
  out << "alpha,n,mc_variance,formula_variance,relative_error,flag_gt_0.1\n";
  for (const SweepCell& c : grid.cells) {
    out << format_double(c.alpha) << ',' << c.n << ','
        << format_double(c.mc_variance) << ',' << format_double(c.formula_variance)
        << ',' << format_double(c.relative_error) << ',' << flag_text(c) << '\n';
  }
}

void write_sweep_jsonl(std::ostream& out, const SweepGrid& grid) {
  for (const SweepCell& c : grid.cells) {
    out << "{\"alpha\":" << format_double(c.alpha) << ",\"n\":" << c.n
        << ",\"mc_variance\":" << format_double(c.mc_variance)
        << ",\"formula_variance\":" << format_double(c.formula_variance)
        << ",\"relative_error\":"
        << (c.degenerate ? std::string("null") : format_double(c.relative_error))
        << ",\"flag_gt_0.1\":\"" << flag_text(c) << "\"}\n";
  }
}

SweepGrid read_sweep_csv(const std::string& path) {
  SweepGrid grid;
  for_each_record(path, [&](const std::string& line, std::size_t line_no) {
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw ParseError(location(path, line_no) + ": expected 6 columns, got " +
                       std::to_string(fields.size()));
    }
    SweepCell cell;
    cell.alpha = parse_double_at(fields[0], path, line_no);
    const double dn = parse_double_at(fields[1], path, line_no);
    cell.n = static_cast<std::size_t>(dn);
    cell.mc_variance = parse_double_at(fields[2], path, line_no);
    cell.formula_variance = parse_double_at(fields[3], path, line_no);
    cell.relative_error = parse_double_at(fields[4], path, line_no);
    const std::string flag = trim(fields[5]);
    if (flag == "degenerate") {
      cell.degenerate = true;
    } else if (flag == "1") {
      cell.exceeds_threshold = true;
    } else if (flag != "0") {
      throw ParseError(location(path, line_no) + ": bad flag '" + flag + "'");
    }
    grid.cells.push_back(cell);
  });
  return grid;
}

bool sweep_grids_equal(const SweepGrid& a, const SweepGrid& b) {
  if (a.cells.size() != b.cells.size()) return false;
  const auto same = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const SweepCell& ca = a.cells[i];
    const SweepCell& cb = b.cells[i];
    if (!same(ca.alpha, cb.alpha) || ca.n != cb.n ||
        !same(ca.mc_variance, cb.mc_variance) ||
        !same(ca.formula_variance, cb.formula_variance) ||
        !same(ca.relative_error, cb.relative_error) ||
        ca.exceeds_threshold != cb.exceeds_threshold ||
        ca.degenerate != cb.degenerate) {
      return false;
    }
  }
  return true;
}

}  // namespace spavar::io
