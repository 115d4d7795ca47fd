#include "ensavg/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "ensavg/errors.hpp"

namespace ensavg {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      cells.push_back(trim(line.substr(pos)));
      break;
    }
    cells.push_back(trim(line.substr(pos, next - pos)));
    pos = next + 1;
  }
  return cells;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find('\n', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view line = text.substr(pos, next - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = next + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Row {
  TimeIndex t;
  std::size_t line;
  std::vector<double> values;  // Y then models
};

}  // namespace

bool parse_real(std::string_view text, double& out) {
  if (text.empty()) return false;
  // from_chars rejects a leading '+', which keeps the accepted grammar narrow.
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] =
      std::from_chars(first, last, out, std::chars_format::general);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_integer(std::string_view text, TimeIndex& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

EnsembleData parse_ensemble_csv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  const auto lines = split_lines(text);
  if (lines.empty()) throw FormatError("input is empty; expected a header row");

  const auto header = split(lines.front(), ',');
  if (header.size() < 3) {
    throw FormatError("header needs columns t, Y and at least one model; got " +
                      std::to_string(header.size()) + " column(s)");
  }
  if (header[0] != "t" || header[1] != "Y") {
    throw FormatError("header must start with 't,Y'");
  }
  std::vector<std::string> names;
  std::set<std::string_view> seen;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c].empty()) {
      throw ParseError(1, c + 1, "empty model name in header");
    }
    if (!seen.insert(header[c]).second) {
      throw FormatError("duplicate model name '" + std::string(header[c]) +
                        "' in header");
    }
    names.emplace_back(header[c]);
  }
  if (lines.size() < 2) throw FormatError("no data rows after the header");

  std::vector<Row> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto cells = split(lines[i], ',');
    if (cells.size() < header.size()) {
      throw ParseError(line_no, cells.size() + 1, "missing cell");
    }
    if (cells.size() > header.size()) {
      throw ParseError(line_no, header.size() + 1, "unexpected extra cell");
    }
    Row row{0, line_no, {}};
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].empty()) throw ParseError(line_no, c + 1, "empty cell");
    }
    if (!parse_integer(cells[0], row.t)) {
      throw ParseError(line_no, 1,
                       "time '" + std::string(cells[0]) + "' is not an integer");
    }
    row.values.resize(cells.size() - 1);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (!parse_real(cells[c], row.values[c - 1])) {
        throw ParseError(line_no, c + 1,
                         "'" + std::string(cells[c]) + "' is not a finite number");
      }
    }
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].t == rows[i - 1].t) {
      throw FormatError("duplicate time " + std::to_string(rows[i].t) +
                        " on rows " + std::to_string(rows[i - 1].line) +
                        " and " + std::to_string(rows[i].line));
    }
    if (rows[i].t != rows[i - 1].t + 1) {
      throw FormatError("times must be consecutive; gap between " +
                        std::to_string(rows[i - 1].t) + " and " +
                        std::to_string(rows[i].t));
    }
  }

  std::vector<TimeIndex> times;
  Vector y;
  std::vector<Vector> outputs(names.size());
  for (const Row& row : rows) {
    times.push_back(row.t);
    y.push_back(row.values[0]);
    for (std::size_t m = 0; m < names.size(); ++m) {
      outputs[m].push_back(row.values[m + 1]);
    }
  }
  return EnsembleData{ObservationSeries(std::move(times), std::move(y)),
                      ModelEnsemble(std::move(names), std::move(outputs))};
}

EnsembleData read_ensemble_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_ensemble_csv(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(e.row(), e.column(), std::string(e.what()) + " in '" + path + "'");
  } catch (const Error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string write_ensemble_csv(const ObservationSeries& obs,
                               const ModelEnsemble& ensemble) {
  if (ensemble.num_points() != obs.size()) {
    throw AlignmentError("ensemble and observations differ in length");
  }
  std::string out = "t,Y";
  for (const auto& name : ensemble.names()) {
    if (name.find_first_of(",\r\n") != std::string::npos) {
      throw ValidationError("model name '" + name + "' cannot be written to CSV");
    }
    out += "," + name;
  }
  out += "\n";
  for (std::size_t t = 0; t < obs.size(); ++t) {
    out += std::to_string(obs.times()[t]);
    out += "," + format_real(obs.values()[t]);
    for (const auto& x : ensemble.outputs()) out += "," + format_real(x[t]);
    out += "\n";
  }
  return out;
}

}  // namespace ensavg
