#pragma once
// Plot-ready CSV tables: '#' comment lines, one header row, comma-separated
// values in shortest round-trip form, empty cells for masked points.

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "potrec/errors.hpp"
#include "potrec/reconstruct.hpp"
#include "potrec/systems.hpp"

namespace potrec {

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DomainError("CSV: cannot parse number '" + std::string(s) + "'");
  return v;
}

struct CsvTable {
  std::vector<std::string> comments;  // written as "# <text>"
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;

  void add_column(std::string name, const std::vector<std::optional<double>>& values) {
    if (rows.empty()) rows.resize(values.size());
    detail::require(values.size() == rows.size(), "CSV: column length mismatch");
    header.push_back(std::move(name));
    for (std::size_t i = 0; i < values.size(); ++i) rows[i].push_back(values[i]);
  }

  void add_column(std::string name, const std::vector<double>& values) {
    add_column(std::move(name), std::vector<std::optional<double>>(values.begin(), values.end()));
  }

  void add_column(std::string name, const Estimate& e) {
    std::vector<std::optional<double>> v(e.values.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      if (e.mask[i]) v[i] = e.values[i];
    add_column(std::move(name), v);
  }

  void write(std::ostream& os) const {
    for (const std::string& c : comments) os << "# " << c << '\n';
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << '\n';
    for (const auto& row : rows) {
      detail::require(row.size() == header.size(), "CSV: row width does not match the header");
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) os << ',';
        if (row[j] && std::isfinite(*row[j])) os << format_double(*row[j]);
      }
      os << '\n';
    }
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  static CsvTable parse(std::istream& is) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
      if (line.rfind("# ", 0) == 0) {
        t.comments.push_back(line.substr(2));
        continue;
      }
      std::vector<std::string> cells;
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (!have_header) {
        t.header = std::move(cells);
        have_header = true;
        continue;
      }
      detail::require(cells.size() == t.header.size(), "CSV: row width does not match the header");
      std::vector<std::optional<double>> row;
      for (const std::string& c : cells) row.push_back(c.empty() ? std::nullopt : std::optional(parse_double(c)));
      t.rows.push_back(std::move(row));
    }
    detail::require(have_header, "CSV: missing header row");
    return t;
  }
};

/// Closed-form curves V(x) for a sweep of one system parameter; the other
/// parameters stay at their values in `base`.
inline CsvTable sweep_curves(const SystemSpec& base, const std::string& parameter, const std::vector<double>& values,
                             const std::vector<double>& grid) {
  CsvTable t;
  t.comments.push_back("sweep of " + parameter);
  t.add_column("x", grid);
  for (double v : values) {
    SystemSpec s = base;
    std::visit(
        [&](auto& sys) {
          using S = std::decay_t<decltype(sys)>;
          double* field = nullptr;
          if constexpr (std::is_same_v<S, SinBox>) {
            if (parameter == "v0") field = &sys.v0;
            if (parameter == "v1") field = &sys.v1;
            if (parameter == "v2") field = &sys.v2;
          } else if constexpr (std::is_same_v<S, HyperbolicPulse>) {
            if (parameter == "v0") field = &sys.v0;
            if (parameter == "v1") field = &sys.v1;
          }
          if (field == nullptr) throw DomainError("sweep: parameter '" + parameter + "' is not sweepable here");
          *field = v;
        },
        s);
    const ReferencePotential ref = exact_potential(s);
    detail::require(ref.kind == ReferencePotential::Kind::Exact, "sweep: system has no closed-form potential");
    std::vector<std::optional<double>> col(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double y = ref.exact(grid[i]);
      if (std::isfinite(y)) col[i] = y;
    }
    t.add_column(parameter + "=" + format_double(v), col);
  }
  return t;
}

}  // namespace potrec
