// potrec: gauss | system | reconstruct | verify
// Exit codes: 0 success, 1 verification failure, 2 config error, 3 numeric failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "config.hpp"
#include "potrec/acceptance.hpp"
#include "potrec/potrec.hpp"
#include "potrec/report.hpp"

namespace potrec::cli {
namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericFailure = 3;

struct Flags {
  std::string config;
  std::string out;
  std::string methods;
  std::string sizes;
  std::string suite;
  bool perturb = false;
};

// Writes to --out when given, otherwise stdout.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
}

std::string with_suffix(const std::string& path, const std::string& suffix, const std::string& ext) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

Json matrix_json(const Eigen::MatrixXd& m, int corner) {
  const Eigen::Index n = std::min<Eigen::Index>(m.rows(), corner);
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < n; ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

// ------------------------------------------------------------------ gauss

// A family with the closed-form moments used by the exactness self-test.
struct GaussSetup {
  OrthoFamily family;
  std::string label;
  std::function<double(double, int)> monomial;
  std::function<double(int)> moment;
  std::function<double(int)> scale;
};

GaussSetup parse_family(const Json& j) {
  namespace d = acceptance::detail;
  const std::string family = text(j, "family", "gauss");
  const auto power = [](double x, int k) { return std::pow(x, k); };
  if (family == "hermite") {
    allow_keys(j, {"family", "N", "out"}, "gauss");
    return {OrthoFamily::hermite(), "hermite", power, d::hermite_moment,
            [](int k) { return d::hermite_moment(k + k % 2) + 1.0; }};
  }
  if (family == "laguerre") {
    allow_keys(j, {"family", "nu", "N", "out"}, "gauss");
    const double nu = number(j, "nu", 0.0, "gauss");
    const auto m = [nu](int k) { return d::laguerre_moment(nu, k); };
    return {OrthoFamily::laguerre(nu), "laguerre nu=" + format_double(nu), power, m, m};
  }
  if (family == "jacobi") {
    allow_keys(j, {"family", "a", "b", "N", "out"}, "gauss");
    const double a = number(j, "a", 0.0, "gauss"), b = number(j, "b", 0.0, "gauss");
    // Monomials in t = (1 + x)/2 span the same space and have positive moments.
    const auto m = [a, b](int k) { return d::jacobi_t_moment(a, b, k); };
    return {OrthoFamily::jacobi(a, b), "jacobi a=" + format_double(a) + " b=" + format_double(b),
            [](double x, int k) { return std::pow(0.5 * (1.0 + x), k); }, m, m};
  }
  throw ConfigError("gauss.family: expected hermite, laguerre or jacobi");
}

int cmd_gauss(const Flags& flags) {
  const Json cfg = load_json(flags.config);
  const GaussSetup g = parse_family(cfg);
  const int n = integer(cfg, "N", 0, "gauss");
  if (n < 1) throw ConfigError("gauss.N: need N >= 1");
  const GaussRule rule = g.family.rule(n);
  CsvTable t;
  t.comments.push_back("gauss rule: " + g.label + ", N = " + std::to_string(n));
  t.add_column("node", rule.nodes);
  t.add_column("weight", rule.weights);
  t.add_column("deriv_weight", rule.deriv_weights);
  double err = 0.0;
  for (int k = 0; k <= 2 * n - 1; ++k) {
    const double q = integrate(rule, [&](double x) { return g.monomial(x, k); });
    err = std::max(err, std::abs(q - g.moment(k)) / g.scale(k));
  }
  std::ostringstream os;
  t.write(os);
  os << "# exactness self-test: degrees 0.." << 2 * n - 1 << ", max relative error " << format_double(err)
     << (err <= 1e-10 ? " (pass)" : " (FAIL)") << '\n';
  emit(flags.out.empty() && cfg.contains("out") ? cfg["out"].get<std::string>() : flags.out, os.str());
  return kOk;
}

// ------------------------------------------------------------------ system

Json counterterm_json(const Counterterm& c) {
  return {{"description", c.description}, {"coefficient", c.coefficient}, {"is_potential", c.is_potential()}};
}

int cmd_system(const Flags& flags) {
  const Json cfg = load_json(flags.config);
  allow_keys(cfg, {"system", "N", "corner", "out"}, "config");
  if (!cfg.contains("system")) throw ConfigError("config: missing 'system'");
  const SystemSpec spec = parse_system(cfg["system"]);
  std::vector<int> sizes = flags.sizes.empty() ? std::vector<int>{integer(cfg, "N", 10, "config")}
                                               : parse_size_flag(flags.sizes);
  if (sizes.size() != 1) throw ConfigError("system: exactly one size N is expected");
  const int n = sizes[0];
  if (n < 2) throw ConfigError("system: need N >= 2");
  const int corner = integer(cfg, "corner", n, "config");
  if (corner < 1) throw ConfigError("system.corner: must be >= 1");

  const AssembledSystem s = assemble(spec, n);
  Json rep;
  rep["system"] = cfg["system"];
  rep["basis"] = s.basis.name();
  rep["N"] = n;
  rep["corner"] = std::min(corner, n);
  Json mats;
  mats["H"] = matrix_json(s.H, corner);
  mats["T_tilde"] = matrix_json(s.T_tilde, corner);
  mats["Omega"] = matrix_json(s.Omega, corner);
  mats["V_tilde"] = matrix_json(s.V_tilde, corner);
  if (s.T) mats["T"] = matrix_json(*s.T, corner);
  if (s.V) mats["V"] = matrix_json(*s.V, corner);
  rep["matrices"] = mats;
  rep["counterterm"] = counterterm_json(s.counterterm);
  rep["reference_potential"] = s.reference.description;
  if (s.energy) rep["energy"] = *s.energy;
  if (s.energy_recursion)
    rep["energy_recursion"] = {{"variable", s.energy_recursion->variable},
                               {"diag", s.energy_recursion->diag},
                               {"offdiag", s.energy_recursion->offdiag}};
  Json tri = Json::array();
  for (double e : sample_energies(s)) {
    const TridiagonalityReport r = tridiagonality_report(s, e);
    tri.push_back({{"energy", r.energy}, {"max_off_band", r.max_off_band}, {"band_profile", r.band_profile}});
  }
  rep["tridiagonality"] = tri;
  rep["warnings"] = s.warnings;
  for (const std::string& w : s.warnings) std::cerr << "warning: " << w << '\n';
  emit(flags.out.empty() && cfg.contains("out") ? cfg["out"].get<std::string>() : flags.out, rep.dump(2) + "\n");
  return kOk;
}

// ------------------------------------------------------------------ reconstruct

struct Source {
  std::optional<SystemSpec> system;
  std::optional<BasisSpec> basis;
  std::string potential_name;
  RealFn potential;
  int quad_factor = 4;
  std::optional<Eigen::MatrixXd> matrix;
  std::string description;
};

Source parse_source(const Json& j, const std::string& config_path) {
  allow_keys(j, {"system", "potential", "basis", "quad_factor", "matrix_file"}, "source");
  Source src;
  const int kinds = j.contains("system") + j.contains("potential") + j.contains("matrix_file");
  if (kinds != 1) throw ConfigError("source: give exactly one of system, potential, matrix_file");
  if (j.contains("system")) {
    src.system = parse_system(j["system"]);
    src.description = "system " + j["system"].dump();
    return src;
  }
  if (j.contains("potential")) {
    src.potential_name = text(j, "potential", "source");
    if (src.potential_name == "smooth_bump") src.potential = smooth_bump;
    else if (src.potential_name == "piecewise_bump") src.potential = piecewise_bump;
    else throw ConfigError("source.potential: expected smooth_bump or piecewise_bump");
    if (!j.contains("basis")) throw ConfigError("source: a potential needs a basis");
    src.basis = parse_basis(j["basis"]);
    src.quad_factor = integer(j, "quad_factor", 4, "source");
    if (src.quad_factor < 1) throw ConfigError("source.quad_factor: must be >= 1");
    src.description = "potential " + src.potential_name + ", basis " + j["basis"].dump() +
                      ", matrix by quadrature with K = " + std::to_string(src.quad_factor) + "N";
    return src;
  }
  // Matrix file: {"basis": {...}, "matrix": [[...], ...]} row-major.
  std::filesystem::path mp = text(j, "matrix_file", "source");
  if (mp.is_relative()) mp = std::filesystem::path(config_path).parent_path() / mp;
  const Json mj = load_json(mp.string());
  allow_keys(mj, {"basis", "matrix"}, "matrix file");
  if (!mj.contains("basis") || !mj.contains("matrix")) throw ConfigError("matrix file: needs 'basis' and 'matrix'");
  src.basis = parse_basis(mj["basis"]);
  const Json& rows = mj["matrix"];
  if (!rows.is_array() || rows.empty()) throw ConfigError("matrix file: 'matrix' must be a non-empty array");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::vector<double> row = number_list(rows[i], "matrix file row");
    if (static_cast<Eigen::Index>(row.size()) != n) throw ConfigError("matrix file: matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row[k];
  }
  src.matrix = m;
  src.description = "matrix file " + mp.filename().string() + ", basis " + mj["basis"].dump();
  return src;
}

// Everything one reconstruction run needs at a given N.
struct Problem {
  Basis basis;
  Eigen::MatrixXd matrix;
  Counterterm counterterm;
  std::function<double(double)> exact;
  std::optional<ReferencePotential> family;  // Poschl-Teller family with fitted V1, V0
  bool half_lambda2_units = false;
  std::vector<std::string> warnings;
};

Problem build_problem(const Source& src, int n) {
  if (src.system) {
    if (n < 2) throw ConfigError("reconstruct: need N >= 2 for a system");
    AssembledSystem s = assemble(*src.system, n);
    // Reconstruct V when the counterterm is not a potential; otherwise Vtilde and add the counterterm back.
    const bool use_v = !s.counterterm.is_potential() && s.V.has_value();
    Problem p{s.basis, use_v ? *s.V : s.V_tilde, use_v ? Counterterm{} : s.counterterm};
    if (s.reference.kind == ReferencePotential::Kind::Exact) p.exact = s.reference.exact;
    if (s.reference.kind == ReferencePotential::Kind::PoschlTellerFamily) {
      p.family = s.reference;
      p.half_lambda2_units = true;
    }
    p.warnings = s.warnings;
    return p;
  }
  const Basis basis(*src.basis);
  if (src.matrix) {
    if (n > src.matrix->rows()) throw ConfigError("reconstruct: N exceeds the matrix file size");
    return {basis, src.matrix->topLeftCorner(n, n)};
  }
  if (n < 1) throw ConfigError("reconstruct: need N >= 1");
  Problem p{basis, matrix_elements_by_quadrature(basis, src.potential, n, src.quad_factor * n)};
  p.exact = src.potential;
  return p;
}

std::vector<std::string> parse_methods(const std::string& flag, const Json& cfg) {
  std::vector<std::string> m;
  if (!flag.empty()) {
    std::stringstream ss(flag);
    for (std::string item; std::getline(ss, item, ',');) m.push_back(item);
  } else if (cfg.contains("methods")) {
    if (!cfg["methods"].is_array()) throw ConfigError("methods: expected an array");
    for (const Json& e : cfg["methods"]) {
      if (!e.is_string()) throw ConfigError("methods: expected strings");
      m.push_back(e.get<std::string>());
    }
  } else {
    m = {"m1", "m2", "m3", "m4"};
  }
  if (m.empty()) throw ConfigError("methods: select at least one method");
  for (const std::string& s : m)
    if (s != "m1" && s != "m2" && s != "m3" && s != "m4") throw ConfigError("methods: unknown method '" + s + "'");
  return m;
}

Method3Options parse_method3(const Json& cfg) {
  Method3Options opt;
  if (!cfg.contains("method3")) return opt;
  const Json& j = cfg["method3"];
  allow_keys(j, {"variant", "K"}, "method3");
  if (j.contains("variant")) {
    const std::string v = text(j, "variant", "method3");
    if (v == "matrix") opt.variant = Method3Variant::Matrix;
    else if (v == "sum") opt.variant = Method3Variant::Sum;
    else if (v == "literal") opt.variant = Method3Variant::Literal;
    else throw ConfigError("method3.variant: expected matrix, sum or literal");
  }
  opt.quad_size = integer(j, "K", 0, "method3");
  if (opt.quad_size < 0) throw ConfigError("method3.K: must be >= 0");
  return opt;
}

std::vector<std::optional<double>> column_of(const std::vector<double>& grid, const std::function<double(double)>& f) {
  std::vector<std::optional<double>> c(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = f(grid[i]);
    if (std::isfinite(y)) c[i] = y;
  }
  return c;
}

std::vector<std::optional<double>> scaled(std::vector<std::optional<double>> c, double s) {
  for (auto& v : c)
    if (v) *v /= s;
  return c;
}

std::vector<std::optional<double>> as_column(const Estimate& e) {
  std::vector<std::optional<double>> c(e.values.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (e.mask[i]) c[i] = e.values[i];
  return c;
}

int run_sweep(const Json& cfg, const Flags& flags) {
  const Json& j = cfg["sweep"];
  allow_keys(j, {"system", "parameter", "values"}, "sweep");
  if (!j.contains("system") || !j.contains("values")) throw ConfigError("sweep: needs system, parameter, values");
  const SystemSpec spec = parse_system(j["system"]);
  const std::string param = text(j, "parameter", "sweep");
  const std::vector<double> values = number_list(j["values"], "sweep.values");
  if (values.empty()) throw ConfigError("sweep.values: empty");
  const Grid fallback = assemble(spec, 2).basis.default_grid();
  const Grid grid = cfg.contains("grid") ? parse_grid(cfg["grid"], fallback) : fallback;
  CsvTable t = sweep_curves(spec, param, values, grid.points());
  t.comments.insert(t.comments.begin(), "system " + j["system"].dump());
  emit(flags.out.empty() && cfg.contains("out") ? cfg["out"].get<std::string>() : flags.out, t.str());
  return kOk;
}

int cmd_reconstruct(const Flags& flags) {
  const Json cfg = load_json(flags.config);
  allow_keys(cfg, {"source", "sweep", "sizes", "methods", "grid", "method3", "column", "out"}, "config");
  if (cfg.contains("sweep")) return run_sweep(cfg, flags);
  if (!cfg.contains("source")) throw ConfigError("config: missing 'source' or 'sweep'");
  const Source src = parse_source(cfg["source"], flags.config);
  const std::vector<std::string> methods = parse_methods(flags.methods, cfg);
  const Method3Options m3opt = parse_method3(cfg);
  const int column = integer(cfg, "column", 0, "config");
  std::vector<int> sizes;
  if (!flags.sizes.empty()) sizes = parse_size_flag(flags.sizes);
  else if (cfg.contains("sizes")) sizes = int_list(cfg["sizes"], "sizes");
  else if (src.matrix) sizes = {static_cast<int>(src.matrix->rows())};
  else throw ConfigError("config: missing 'sizes'");
  if (sizes.empty()) throw ConfigError("sizes: empty");
  const std::string out = flags.out.empty() && cfg.contains("out") ? cfg["out"].get<std::string>() : flags.out;

  // Validate every size before computing anything.
  std::vector<Problem> problems;
  for (int n : sizes) problems.push_back(build_problem(src, n));
  for (std::size_t si = 0; si < sizes.size(); ++si)
    if (column < 0 || column >= sizes[si]) throw ConfigError("column: out of range for N = " + std::to_string(sizes[si]));

  Json diag;
  diag["source"] = src.description;
  diag["methods"] = methods;
  diag["runs"] = Json::array();
  bool any_failed_all = false;
  std::ostringstream stdout_csv;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int n = sizes[si];
    const Problem& p = problems[si];
    const Grid grid_spec = cfg.contains("grid") ? parse_grid(cfg["grid"], p.basis.default_grid())
                                                : p.basis.default_grid();
    const std::vector<double> grid = grid_spec.points();
    Json run;
    run["N"] = n;
    run["warnings"] = p.warnings;
    run["counterterm"] = counterterm_json(p.counterterm);
    std::map<std::string, Estimate> est;
    std::map<std::string, Estimate> raw;  // before the counterterm, for the family fit
    for (const std::string& m : methods) {
      try {
        Estimate e;
        if (m == "m1") e = method1(p.basis, p.matrix, grid);
        if (m == "m2") e = method2(p.basis, p.matrix, grid, column);
        if (m == "m3") e = method3(p.basis, p.matrix, grid, m3opt);
        if (m == "m4") {
          Method4Result r = method4(p.basis, p.matrix, grid);
          run["m4"] = {{"off_diagonal_residual", r.off_diagonal_residual},
                       {"fit_terms", r.fit ? static_cast<int>(r.fit->terms()) : 0},
                       {"warnings", r.warnings}};
          for (const std::string& w : r.warnings) std::cerr << "warning (N=" << n << ", m4): " << w << '\n';
          if (r.estimate.valid_count() == 0) throw ReconstructionFailed("method 4: no valid point");
          e = std::move(r.estimate);
        }
        raw[m] = e;
        est[m] = with_counterterm(std::move(e), p.counterterm, grid);
        run["valid_points"][m] = est[m].valid_count();
      } catch (const NumericError& ex) {
        run["errors"][m] = ex.what();
        std::cerr << "error (N=" << n << ", " << m << "): " << ex.what() << '\n';
      }
    }
    if (est.empty()) any_failed_all = true;

    CsvTable t;
    t.comments.push_back("source: " + src.description);
    t.comments.push_back("N = " + std::to_string(n) + ", methods " + Json(methods).dump());
    if (p.counterterm.is_potential()) t.comments.push_back("counterterm added to every estimate: " + p.counterterm.description);
    t.add_column("x", grid);
    std::vector<std::pair<std::string, std::vector<std::optional<double>>>> cols;
    if (p.exact) cols.emplace_back("exact", column_of(grid, p.exact));
    if (p.family && raw.count("m2")) {
      // Fit the m2 estimate of Vtilde on the central 80% of the grid.
      const double span = grid.back() - grid.front();
      const PoschlTellerFit f = fit_poschl_teller(grid, raw["m2"], p.family->lambda, grid.front() + 0.1 * span,
                                                  grid.back() - 0.1 * span);
      run["poschl_teller_fit"] = {{"v2", p.family->v2}, {"v1", f.v1}, {"v0", f.v0},
                                  {"relative_residual", f.relative_residual}, {"points", f.points}};
      t.comments.push_back("pt_fit: V2/sinh^2 + V1/cosh^2 + V0 with V2 = " + format_double(p.family->v2) +
                           ", V1 = " + format_double(f.v1) + ", V0 = " + format_double(f.v0));
      cols.emplace_back("pt_fit", column_of(grid, p.family->with(f.v1, f.v0)));
    }
    for (const std::string& m : methods)
      cols.emplace_back(m, est.count(m) ? as_column(est[m]) : std::vector<std::optional<double>>(grid.size()));
    for (const auto& [name, c] : cols) t.add_column(name, c);
    if (p.half_lambda2_units) {
      const double half = 0.5 * p.basis.lambda() * p.basis.lambda();
      t.comments.push_back("columns *_u are in units of lambda^2/2");
      for (const auto& [name, c] : cols) t.add_column(name + "_u", scaled(c, half));
    }
    for (const std::string& m : methods) {
      std::vector<double> mask(grid.size(), 0.0);
      if (est.count(m))
        for (std::size_t i = 0; i < grid.size(); ++i) mask[i] = est[m].mask[i] ? 1.0 : 0.0;
      t.add_column("mask_" + m, mask);
    }
    diag["runs"].push_back(run);

    if (out.empty()) {
      t.write(stdout_csv);
    } else {
      const std::string path = sizes.size() == 1 ? out : with_suffix(out, "_N" + std::to_string(n), ".csv");
      emit(path, t.str());
    }
  }
  if (out.empty()) std::cout << stdout_csv.str();
  else emit(with_suffix(out, "", ".json"), diag.dump(2) + "\n");
  return any_failed_all ? kNumericFailure : kOk;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const Flags& flags) {
  acceptance::Options opt;
  opt.perturb_tridiagonality = flags.perturb;
  const std::vector<acceptance::CheckResult> results = acceptance::run(flags.suite, opt);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << acceptance::format_line(r) << '\n';
    failed += !r.pass;
  }
  std::cout << results.size() - failed << " passed, " << failed << " failed\n";
  return failed ? kVerifyFailed : kOk;
}

}  // namespace
}  // namespace potrec::cli

int main(int argc, char** argv) {
  using namespace potrec::cli;
  CLI::App app{"Potential reconstruction from tridiagonal-representation matrices"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", flags.config, "JSON run config");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output path (stdout when omitted)");
  };
  auto* gauss = app.add_subcommand("gauss", "Gauss rule nodes, weights and derivative weights as CSV");
  add_common(gauss, true);
  auto* system = app.add_subcommand("system", "assembled matrices and tridiagonality report as JSON");
  add_common(system, true);
  system->add_option("--sizes", flags.sizes, "basis size N");
  auto* recon = app.add_subcommand("reconstruct", "potential estimates on a grid as CSV");
  add_common(recon, true);
  recon->add_option("--methods", flags.methods, "subset of m1,m2,m3,m4");
  recon->add_option("--sizes", flags.sizes, "comma-separated basis sizes");
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", flags.suite, "only this suite");
  verify->add_flag("--inject-perturbation", flags.perturb, "test hook: perturb the tridiagonality check")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  try {
    if (*gauss) return cmd_gauss(flags);
    if (*system) return cmd_system(flags);
    if (*recon) return cmd_reconstruct(flags);
    return cmd_verify(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const potrec::DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kConfigError;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const potrec::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}
