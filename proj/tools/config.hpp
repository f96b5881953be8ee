#pragma once
// JSON run configs -> library specs. Unknown keys and wrong types are config errors.

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "potrec/potrec.hpp"

namespace potrec::cli {

using Json = nlohmann::json;

/// Malformed or invalid run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

inline void allow_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

inline double number(const Json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j[key].get<double>();
}

inline double required_number(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return number(j, key, 0.0, where);
}

inline int integer(const Json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return j[key].get<int>();
}

inline std::string text(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) throw ConfigError(where + ": missing string '" + key + "'");
  return j[key].get<std::string>();
}

inline std::vector<int> int_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of integers");
  std::vector<int> out;
  for (const Json& e : j) {
    if (!e.is_number_integer()) throw ConfigError(where + ": expected integers");
    out.push_back(e.get<int>());
  }
  return out;
}

inline std::vector<double> number_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const Json& e : j) {
    if (!e.is_number()) throw ConfigError(where + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline SystemSpec parse_system(const Json& j) {
  const std::string w = "system";
  const std::string kind = text(j, "kind", w);
  if (kind == "coulomb") {
    allow_keys(j, {"kind", "charge", "ell", "lambda"}, w);
    return Coulomb{number(j, "charge", 1.0, w), number(j, "ell", 0.0, w), number(j, "lambda", 1.0, w)};
  }
  if (kind == "morse") {
    allow_keys(j, {"kind", "alpha", "beta", "v0", "lambda"}, w);
    return Morse{number(j, "alpha", 0.0, w), number(j, "beta", 1.0, w), number(j, "v0", 0.125, w),
                 number(j, "lambda", 1.0, w)};
  }
  if (kind == "sinbox") {
    allow_keys(j, {"kind", "v0", "v1", "v2", "lambda"}, w);
    return SinBox{number(j, "v0", 0.0, w), number(j, "v1", 1.0, w), number(j, "v2", 0.0, w),
                  number(j, "lambda", 1.0, w)};
  }
  if (kind == "pulse") {
    allow_keys(j, {"kind", "v0", "v1", "lambda", "energy"}, w);
    return HyperbolicPulse{number(j, "v0", 0.0, w), number(j, "v1", 1.0, w), number(j, "lambda", 1.0, w),
                           required_number(j, "energy", w)};
  }
  if (kind == "cdh") {
    allow_keys(j, {"kind", "v2", "gamma", "mu", "lambda"}, w);
    return CDHSystem{required_number(j, "v2", w), required_number(j, "gamma", w), required_number(j, "mu", w),
                     number(j, "lambda", 1.0, w)};
  }
  if (kind == "wilson") {
    allow_keys(j, {"kind", "v2", "gamma", "mu", "a", "lambda"}, w);
    return WilsonSystem{required_number(j, "v2", w), required_number(j, "gamma", w), required_number(j, "mu", w),
                        required_number(j, "a", w), number(j, "lambda", 1.0, w)};
  }
  throw ConfigError("system: unknown kind '" + kind + "'");
}

inline BasisSpec parse_basis(const Json& j) {
  const std::string w = "basis";
  const std::string kind = text(j, "kind", w);
  if (kind == "laguerre_radial") {
    allow_keys(j, {"kind", "ell", "lambda"}, w);
    return LaguerreRadial{number(j, "ell", 0.0, w), number(j, "lambda", 1.0, w)};
  }
  if (kind == "hermite_line") {
    allow_keys(j, {"kind", "lambda"}, w);
    return HermiteLine{number(j, "lambda", 1.0, w)};
  }
  if (kind == "morse_laguerre") {
    allow_keys(j, {"kind", "alpha", "lambda"}, w);
    return MorseLaguerre{number(j, "alpha", 0.0, w), number(j, "lambda", 1.0, w)};
  }
  if (kind == "jacobi_sym") {
    allow_keys(j, {"kind", "alpha", "nu", "lambda", "map"}, w);
    JacobiMap map = JacobiMap::Sin;
    if (j.contains("map")) {
      const std::string m = text(j, "map", w);
      if (m == "tanh") map = JacobiMap::Tanh;
      else if (m != "sin") throw ConfigError("basis.map: expected 'sin' or 'tanh'");
    }
    return JacobiSym{number(j, "alpha", 0.75, w), number(j, "nu", 1.0, w), number(j, "lambda", 1.0, w), map};
  }
  if (kind == "jacobi_half") {
    allow_keys(j, {"kind", "mu", "nu", "lambda"}, w);
    return JacobiHalf{number(j, "mu", 0.0, w), number(j, "nu", 1.0, w), number(j, "lambda", 1.0, w)};
  }
  throw ConfigError("basis: unknown kind '" + kind + "'");
}

inline Grid parse_grid(const Json& j, Grid fallback) {
  const std::string w = "grid";
  allow_keys(j, {"min", "max", "count", "ends"}, w);
  Grid g = fallback;
  g.min = number(j, "min", g.min, w);
  g.max = number(j, "max", g.max, w);
  g.count = integer(j, "count", g.count, w);
  if (j.contains("ends")) {
    const std::string e = text(j, "ends", w);
    if (e == "closed") g.ends = Endpoints::Closed;
    else if (e == "open") g.ends = Endpoints::Open;
    else if (e == "open_lower") g.ends = Endpoints::OpenLower;
    else if (e == "open_upper") g.ends = Endpoints::OpenUpper;
    else throw ConfigError("grid.ends: expected closed, open, open_lower or open_upper");
  }
  if (g.count < 1) throw ConfigError("grid.count: must be >= 1");
  if (!(g.max > g.min)) throw ConfigError("grid: need max > min");
  return g;
}

inline std::vector<int> parse_size_flag(const std::string& s) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--sizes: '" + item + "' is not an integer");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace potrec::cli
