#pragma once
// Acceptance criteria and module invariants as named checks, grouped in suites.
// Shared by the verify subcommand and the acceptance binary.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "potrec/potrec.hpp"
#include "potrec/report.hpp"

namespace potrec::acceptance {

struct CheckResult {
  std::string id;     // "C1".."C13" for criteria, "I-..." for module invariants
  std::string suite;  // module name
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  bool perturb_tridiagonality = false;  // test hook: adds an off-band entry to J
};

namespace detail {

using potrec::detail::require;

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Largest relative error over valid points; the valid-point count is returned through `valid`.
inline double max_rel_error(const Estimate& e, std::span<const double> grid, const std::function<double(double)>& f,
                            std::size_t* valid = nullptr) {
  double m = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!e.mask[i]) continue;
    const double ref = f(grid[i]);
    m = std::max(m, std::abs(e.values[i] - ref) / std::abs(ref));
    ++c;
  }
  if (valid) *valid = c;
  return c ? m : std::numeric_limits<double>::infinity();
}

inline double max_abs_error(const Estimate& e, std::span<const double> grid, const std::function<double(double)>& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (e.mask[i]) m = std::max(m, std::abs(e.values[i] - f(grid[i])));
  return m;
}

inline double rms_error(const Estimate& e, std::span<const double> grid, const std::function<double(double)>& f) {
  double s = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!e.mask[i]) continue;
    const double d = e.values[i] - f(grid[i]);
    s += d * d;
    ++c;
  }
  return c ? std::sqrt(s / c) : std::numeric_limits<double>::infinity();
}

// Gram matrix int v(x) v(x)^T dx by composite 30-point Gauss-Legendre.
inline Eigen::MatrixXd composite_gram(const std::function<std::vector<double>(double)>& v, int n, double a, double b,
                                      int pieces) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const auto& abs = Rule::abscissa();
  const auto& wts = Rule::weights();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  const double h = (b - a) / pieces;
  auto add = [&](double x, double w) {
    const std::vector<double> f = v(x);
    const Eigen::Map<const Eigen::VectorXd> fv(f.data(), n);
    g.noalias() += w * fv * fv.transpose();
  };
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = 0; i < abs.size(); ++i) {
      if (abs[i] == 0.0) {
        add(mid, half * wts[i]);
      } else {
        add(mid + half * abs[i], half * wts[i]);
        add(mid - half * abs[i], half * wts[i]);
      }
    }
  }
  return g;
}

inline double identity_defect(const Eigen::MatrixXd& m) {
  return (m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- criteria

inline CheckResult c1_coulomb_exact() {
  CheckResult r{"C1", "reconstruct", "Coulomb: methods 1, 2, 4 exact for every N"};
  const Coulomb c{2.0, 1.0, 3.0};
  const auto exact = [](double x) { return -2.0 / x; };
  double worst = 0.0;
  bool ok = true;
  for (int n : {4, 10, 20, 50}) {
    const AssembledSystem s = assemble(c, n);
    const std::vector<double> grid = s.basis.default_grid().points();
    for (const Estimate& e : {method1(s.basis, *s.V, grid), method2(s.basis, *s.V, grid),
                              method4(s.basis, *s.V, grid).estimate}) {
      std::size_t valid = 0;
      const double err = max_rel_error(e, grid, exact, &valid);
      worst = std::max(worst, err);
      ok = ok && valid > 0 && err <= 1e-8;
    }
  }
  r.pass = ok;
  r.detail = "max rel err " + fmt(worst) + " (tol 1e-8)";
  return r;
}

inline CheckResult c2_coulomb_method3() {
  CheckResult r{"C2", "reconstruct", "Coulomb: method-3 error decreases with N"};
  const auto grid = linspace(0.5, 6.0, 111);
  const auto exact = [](double x) { return -2.0 / x; };
  std::vector<double> errs;
  for (int n : {10, 20, 50}) {
    const AssembledSystem s = assemble(Coulomb{2.0, 1.0, 3.0}, n);
    errs.push_back(max_rel_error(method3(s.basis, *s.V, grid), grid, exact));
  }
  r.pass = errs[1] < errs[0] && errs[2] < errs[1];
  r.detail = "max rel err N=10,20,50: " + fmt(errs[0]) + ", " + fmt(errs[1]) + ", " + fmt(errs[2]);
  return r;
}

inline Morse standard_morse() { return {3.0, 5.0, 0.125, 1.0}; }

inline CheckResult c3_morse_method2() {
  CheckResult r{"C3", "reconstruct", "Morse: method 2 exact with the counterterm restored"};
  const Morse m = standard_morse();
  const auto grid = linspace(-6.0, 1.5, 76);
  const auto exact = [m](double x) { return m.v0 * (std::exp(2.0 * m.lambda * x) - 2.0 * m.beta * std::exp(m.lambda * x)); };
  double worst = 0.0;
  bool ok = true;
  for (int n : {8, 16, 100}) {
    const AssembledSystem s = assemble(m, n);
    const Estimate e = with_counterterm(method2(s.basis, s.V_tilde, grid), s.counterterm, grid);
    std::size_t valid = 0;
    const double err = max_rel_error(e, grid, exact, &valid);
    worst = std::max(worst, err);
    ok = ok && valid > 0 && err <= 1e-8;
  }
  r.pass = ok;
  r.detail = "max rel err " + fmt(worst) + " (tol 1e-8)";
  return r;
}

inline CheckResult c4_morse_divergence() {
  CheckResult r{"C4", "reconstruct", "Morse: method-3 divergence diagnostic fires"};
  const Morse m = standard_morse();
  const auto grid = linspace(-6.0, 1.5, 76);
  const std::vector<int> sizes{8, 16, 32};
  const DivergenceReport d = detect_divergence(
      [&](int n) {
        const AssembledSystem s = assemble(m, n);
        return method3(s.basis, s.V_tilde, grid, {0, Method3Variant::Literal});
      },
      sizes);
  r.pass = d.diverging;
  r.detail = "max|V| N=8,16,32: " + fmt(d.max_abs[0]) + ", " + fmt(d.max_abs[1]) + ", " + fmt(d.max_abs[2]) +
             " (needs >= 2x per doubling)";
  return r;
}

inline CheckResult c5_smooth_bump() {
  CheckResult r{"C5", "reconstruct", "5 r^2 e^-r: methods 3 and 4 within 0.1"};
  const Basis b(LaguerreRadial{1.0, 7.0});
  const int n = 20;
  const auto grid = linspace(0.2, 8.0, 400);
  const Eigen::MatrixXd v = matrix_elements_by_quadrature(b, smooth_bump, n, 4 * n);
  const Estimate e3 = method3(b, v, grid);
  const Estimate e4 = method4(b, v, grid).estimate;
  const double m3 = max_abs_error(e3, grid, smooth_bump), m4 = max_abs_error(e4, grid, smooth_bump);
  const bool coverage = e3.valid_count() == grid.size() && e4.valid_count() >= grid.size() * 95 / 100;
  r.pass = coverage && m3 <= 0.1 && m4 <= 0.1;
  r.detail = "max abs err m3 " + fmt(m3) + ", m4 " + fmt(m4) + " (tol 0.1)";
  return r;
}

inline CheckResult c6_piecewise() {
  CheckResult r{"C6", "reconstruct", "piecewise potential: method-3 RMS decreases with N"};
  const Basis b(LaguerreRadial{1.0, 7.0});
  const auto grid = linspace(0.2, 8.0, 400);
  std::vector<double> rms;
  for (int n : {10, 20, 32}) {
    const Eigen::MatrixXd v = matrix_elements_by_quadrature(b, piecewise_bump, n, 4 * n);
    rms.push_back(rms_error(method3(b, v, grid), grid, piecewise_bump));
  }
  r.pass = rms[1] < rms[0] && rms[2] < rms[1];
  r.detail = "RMS N=10,20,32: " + fmt(rms[0]) + ", " + fmt(rms[1]) + ", " + fmt(rms[2]);
  return r;
}

// Moments of the normalized weights: Hermite E[x^k], Laguerre E[x^k], Jacobi E[((1+x)/2)^k].
inline double hermite_moment(int k) {
  if (k % 2) return 0.0;
  double m = 1.0;
  for (int j = 1; j < k; j += 2) m *= 0.5 * j;
  return m;
}

inline double laguerre_moment(double nu, int k) {
  double m = 1.0;
  for (int j = 0; j < k; ++j) m *= nu + 1.0 + j;
  return m;
}

inline double jacobi_t_moment(double a, double b, int k) {
  double m = 1.0;
  for (int j = 0; j < k; ++j) m *= (b + 1.0 + j) / (a + b + 2.0 + j);
  return m;
}

inline CheckResult c7_quadrature() {
  CheckResult r{"C7", "quadrature", "Gauss rules exact to degree 2N-1; weights match the product formula"};
  double worst_exact = 0.0, worst_weight = 0.0;
  struct Fam {
    OrthoFamily f;
    std::function<double(double, int)> mono;  // integrand
    std::function<double(int)> moment;
    std::function<double(int)> scale;         // magnitude for odd Hermite moments
  };
  std::vector<Fam> fams;
  fams.push_back({OrthoFamily::hermite(), [](double x, int k) { return std::pow(x, k); }, hermite_moment,
                  [](int k) { return hermite_moment(k + k % 2) + 1.0; }});
  for (double nu : {0.0, 3.0, 7.5})
    fams.push_back({OrthoFamily::laguerre(nu), [](double x, int k) { return std::pow(x, k); },
                    [nu](int k) { return laguerre_moment(nu, k); }, [nu](int k) { return laguerre_moment(nu, k); }});
  for (auto [a, b] : {std::pair{0.0, 0.0}, {-0.5, 0.5}, {2.0, 3.5}})
    fams.push_back({OrthoFamily::jacobi(a, b), [](double x, int k) { return std::pow(0.5 * (1.0 + x), k); },
                    [a, b](int k) { return jacobi_t_moment(a, b, k); }, [a, b](int k) { return jacobi_t_moment(a, b, k); }});
  for (const Fam& fam : fams) {
    for (int n = 1; n <= 20; ++n) {
      const GaussRule rule = fam.f.rule(n);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        const double q = integrate(rule, [&](double x) { return fam.mono(x, k); });
        worst_exact = std::max(worst_exact, std::abs(q - fam.moment(k)) / fam.scale(k));
      }
      const std::vector<double> w6 = product_weights(fam.f.coeffs.jacobi_matrix(n));
      for (int k = 0; k < n; ++k)
        worst_weight = std::max(worst_weight, std::abs(rule.weights[k] - w6[k]) / w6[k]);
    }
  }
  r.pass = worst_exact <= 1e-10 && worst_weight <= 1e-8;
  r.detail = "moment rel err " + fmt(worst_exact) + " (tol 1e-10), weight rel diff " + fmt(worst_weight) +
             " (tol 1e-8)";
  return r;
}

inline CheckResult c8_tridiagonality(const Options& opt) {
  CheckResult r{"C8", "systems", "wave operator J is tridiagonal (Coulomb, hyperbolic pulse)"};
  double worst = 0.0;
  auto check = [&](const AssembledSystem& s) {
    for (double e : sample_energies(s)) {
      Eigen::MatrixXd j = wave_operator(s, s.energy.value_or(e));
      if (opt.perturb_tridiagonality) j(0, j.cols() - 1) += 1e-6;
      for (Eigen::Index i = 0; i < j.rows(); ++i)
        for (Eigen::Index k = 0; k < j.cols(); ++k)
          if (std::abs(i - k) > 1) worst = std::max(worst, std::abs(j(i, k)));
    }
  };
  for (int n : {3, 8, 16, 24, 32}) {
    check(assemble(Coulomb{2.0, 1.0, 3.0}, n));
    check(assemble(Coulomb{1.0, 0.0, 1.0}, n));
    check(assemble(HyperbolicPulse{0.5, 1.5, 1.0, -0.5}, n));
    check(assemble(HyperbolicPulse{-0.3, 2.0, 1.5, -1.2}, n));
  }
  r.pass = worst <= 1e-10;
  r.detail = "max off-band |J| " + fmt(worst) + " (tol 1e-10)";
  return r;
}

inline CheckResult c9_identity() {
  CheckResult r{"C9", "bases", "<phi_n|(lambda r)^-1|phi_m> is the identity"};
  double worst = 0.0;
  for (double ell : {0.0, 1.0, 2.0})
    for (double lam : {1.0, 3.0}) worst = std::max(worst, coulomb_identity_check(ell, lam, 13));
  r.pass = worst <= 1e-10;
  r.detail = "max defect " + fmt(worst) + " (tol 1e-10)";
  return r;
}

inline CheckResult c10_sinbox_recursion() {
  CheckResult r{"C10", "systems", "sinusoidal box: assembled recursion equals the dipole recursion"};
  double worst = 0.0;
  for (const SinBox& b : {SinBox{0.0, 1.0, 1.0, 1.0}, SinBox{0.7, -2.0, 0.3, 2.0}, SinBox{-1.0, 5.0, 3.0, 0.5}}) {
    const AssembledSystem s = assemble(b, 21);
    const double l2 = b.lambda * b.lambda;
    const DipoleSinBox d{potrec::detail::wall_nu(b.v2, b.lambda), 2.0 * b.v0 / l2, 2.0 * b.v1 / l2};
    const EnergyRecursion& rec = *s.energy_recursion;
    for (int n = 0; n <= 20; ++n) {
      const RecursionTerms t = recursion_coeffs(d, n);
      worst = std::max(worst, std::abs(rec.diag[n] - t.diag) / std::max(1.0, std::abs(t.diag)));
      if (n < 20) worst = std::max(worst, std::abs(rec.offdiag[n] - t.offdiag) / std::max(1.0, std::abs(t.offdiag)));
    }
  }
  r.pass = worst <= 1e-12;
  r.detail = "max rel diff " + fmt(worst) + " (tol 1e-12)";
  return r;
}

inline CheckResult c11_cdh_fit() {
  CheckResult r{"C11", "reconstruct", "CDH system: method 2 matches a Poschl-Teller potential"};
  const double lam = 1.0;
  const CDHSystem c{lam * lam, -10.0, 3.0, lam};
  double worst = 0.0;
  std::string fitted;
  for (int n : {6, 10, 18}) {
    const AssembledSystem s = assemble(c, n);
    const std::vector<double> grid = s.basis.default_grid().points();
    const Estimate e = method2(s.basis, s.V_tilde, grid);
    const PoschlTellerFit f = fit_poschl_teller(grid, e, lam, 0.6 / lam, 5.4 / lam);
    worst = std::max(worst, f.relative_residual);
    if (n == 18) fitted = "V1 " + format_double(f.v1) + ", V0 " + format_double(f.v0);
  }
  r.pass = worst <= 0.05;
  r.detail = "fit residual " + fmt(worst) + " (tol 0.05); N=18 fit " + fitted;
  return r;
}

inline CheckResult c12_orthonormality() {
  CheckResult r{"C12", "bases", "Omega = I for the Morse and half-line Jacobi bases; Meixner-Pollaczek orthonormal"};
  double worst_basis = 0.0, worst_mp = 0.0;
  const int n = 13;
  auto basis_gram = [&](const Basis& b, double a, double hi) {
    const Eigen::MatrixXd g =
        composite_gram([&](double x) { return b.phi_all(n, x); }, n, a, hi, 200) * b.lambda();
    worst_basis = std::max(worst_basis, identity_defect(g));
    worst_basis = std::max(worst_basis, identity_defect(b.overlap(n)));
  };
  for (double alpha : {0.0, 3.0}) {
    for (double lam : {1.0, 2.0}) basis_gram(Basis(MorseLaguerre{alpha, lam}), -60.0 / lam, 6.0 / lam);
  }
  for (auto [mu, nu] : {std::pair{3.0, 1.5}, {2.0, 0.5}, {0.5, 2.5}})
    basis_gram(Basis(JacobiHalf{mu, nu, 1.0}), 0.0, 80.0);
  for (auto [mu, theta] : {std::pair{1.0, std::numbers::pi / 2}, {1.5, 1.0}, {2.5, 2.0}}) {
    const MeixnerPollaczek mp{mu, theta};
    const Eigen::MatrixXd g = composite_gram(
        [&](double y) {
          std::vector<double> p = eval_sequence(mp, y, 9);
          const double s = std::sqrt(weight_fn(mp, y));
          for (double& e : p) e *= s;
          return p;
        },
        9, -40.0, 40.0, 160);
    worst_mp = std::max(worst_mp, identity_defect(g));
  }
  r.pass = worst_basis <= 1e-8 && worst_mp <= 1e-6;
  r.detail = "basis defect " + fmt(worst_basis) + " (tol 1e-8), Meixner-Pollaczek defect " + fmt(worst_mp) +
             " (tol 1e-6)";
  return r;
}

inline CheckResult c13_sweeps() {
  CheckResult r{"C13", "cli", "potential sweeps are deterministic and ordered"};
  const double lam = 1.0, pi = std::numbers::pi;
  const auto grid6 = linspace(-0.999 * pi / (2 * lam), 0.999 * pi / (2 * lam), 201);
  const std::vector<double> v1s{0, 1, 2, 3, 4, 5};
  const SinBox box{0.0, 0.0, lam * lam, lam};
  const std::string a = sweep_curves(box, "v1", v1s, grid6).str(), b = sweep_curves(box, "v1", v1s, grid6).str();
  const auto grid7 = linspace(-4.0, 4.0, 201);
  const std::vector<double> v0s{-1.0, -0.5, 0.0, 0.5, 1.0};
  const HyperbolicPulse pulse{0.0, 1.5 * lam * lam, lam, -0.5};
  const std::string c = sweep_curves(pulse, "v0", v0s, grid7).str(), d = sweep_curves(pulse, "v0", v0s, grid7).str();
  // Sin box at x = -pi/4 lambda: V1 = 0 on top. Pulse at x = 0: V0 = +1 on top.
  bool ordered = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double v1 : v1s) {
    const double y = exact_potential(SinBox{0.0, v1, lam * lam, lam}).exact(-pi / (4 * lam));
    ordered = ordered && y < prev;
    prev = y;
  }
  prev = -std::numeric_limits<double>::infinity();
  for (double v0 : v0s) {
    const double y = exact_potential(HyperbolicPulse{v0, 1.5 * lam * lam, lam, -0.5}).exact(0.0);
    ordered = ordered && y > prev;
    prev = y;
  }
  r.pass = a == b && c == d && ordered;
  r.detail = std::string(a == b && c == d ? "byte-identical" : "output differs between runs") +
             (ordered ? ", curve order as expected" : ", curve order wrong");
  return r;
}

// ---------------------------------------------------------------- module invariants

inline CheckResult i_specfun() {
  CheckResult r{"I-specfun", "specfun", "ln Gamma against the C library and the reflection identity"};
  double worst = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.0, 15.5, 40.0, 170.0})
    worst = std::max(worst, std::abs(ln_gamma(x) - std::lgamma(x)) / std::max(1.0, std::abs(std::lgamma(x))));
  for (double y : {0.1, 1.0, 3.0, 10.0}) {
    // |Gamma(i y)|^2 = pi / (y sinh(pi y))
    const double lhs = 2.0 * ln_abs_gamma({0.0, y});
    const double rhs = std::log(std::numbers::pi / (y * std::sinh(std::numbers::pi * y)));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  r.pass = worst <= 1e-12;
  r.detail = "max rel diff " + fmt(worst) + " (tol 1e-12)";
  return r;
}

inline CheckResult i_lintridiag() {
  CheckResult r{"I-lintridiag", "lintridiag", "eigen decomposition residual and orthogonality"};
  double worst = 0.0;
  for (int n : {1, 2, 7, 40}) {
    SymTridiag t;
    for (int i = 0; i < n; ++i) t.diag.push_back(std::sin(1.3 * i) + 0.1 * i);
    for (int i = 0; i + 1 < n; ++i) t.offdiag.push_back(std::cos(0.7 * i) + 0.5);
    const EigenDecomp e = eigen_decompose(t);
    const Eigen::MatrixXd j = t.dense();
    const Eigen::Map<const Eigen::VectorXd> vals(e.values.data(), n);
    const double scale = std::max(1.0, t.max_abs());
    worst = std::max(worst, (j * e.vectors - e.vectors * vals.asDiagonal()).cwiseAbs().maxCoeff() / scale);
    worst = std::max(worst, identity_defect(e.vectors.transpose() * e.vectors));
  }
  r.pass = worst <= 1e-12;
  r.detail = "max residual " + fmt(worst) + " (tol 1e-12)";
  return r;
}

inline CheckResult i_conjugacy() {
  CheckResult r{"I-conjugacy", "bases", "<phibar_n|phi_m> = delta_nm for every basis family"};
  double worst = 0.0;
  const int n = 13;
  const std::vector<BasisSpec> specs{LaguerreRadial{1.0, 2.0}, HermiteLine{1.5}, MorseLaguerre{2.0, 1.0},
                                     JacobiSym{0.75, 1.0, 1.0, JacobiMap::Sin},
                                     JacobiSym{0.5, 1.0, 1.0, JacobiMap::Tanh}, JacobiHalf{3.0, 1.5, 1.0}};
  for (const BasisSpec& spec : specs) {
    const Basis b(spec);
    // phibar phi = x' rho p p, so lambda int phibar phi dx = int rho p p dz.
    const GaussRule rule = b.poly().rule(n + 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double x = b.x_of_z(rule.nodes[k]);
      const std::vector<double> p = b.phi_all(n, x), pb = b.phibar_all(n, x);
      const double dz = rule.deriv_weights[k] / b.jacobian(rule.nodes[k]);
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) g(i, m) += dz * pb[i] * p[m];
    }
    worst = std::max(worst, identity_defect(g));
  }
  r.pass = worst <= 1e-8;
  r.detail = "max defect " + fmt(worst) + " (tol 1e-8)";
  return r;
}

inline CheckResult i_energypoly() {
  CheckResult r{"I-energypoly", "energypoly", "recursion eigenvectors reproduce the polynomial sequence"};
  double worst = 0.0;
  const std::vector<EnergyPolyFamily> fams{MeixnerPollaczek{1.5, 1.0}, ContinuousDualHahn{1.0, 2.0, 0.5},
                                           Wilson{1.0, 1.5, 2.0, 0.5}};
  for (const EnergyPolyFamily& fam : fams) {
    const int n = 10;
    SymTridiag t;
    for (int i = 0; i < n; ++i) {
      const RecursionTerms c = recursion_coeffs(fam, i);
      t.diag.push_back(c.diag);
      if (i + 1 < n) t.offdiag.push_back(c.offdiag);
    }
    // At an eigenvalue e of the truncated recursion, P_N(e) = 0 and (P_0..P_{N-1}) is an eigenvector.
    const EigenDecomp e = eigen_decompose(t);
    for (int k = 0; k < n; ++k) {
      const std::vector<double> p = eval_sequence(fam, e.values[k], n + 1);
      const double norm = std::sqrt(std::inner_product(p.begin(), p.end() - 1, p.begin(), 0.0));
      worst = std::max(worst, std::abs(p[n]) / norm);
    }
  }
  r.pass = worst <= 1e-8;
  r.detail = "max |P_N(eig)| / |P| " + fmt(worst) + " (tol 1e-8)";
  return r;
}

inline CheckResult i_morse_realization() {
  CheckResult r{"I-morse", "systems", "Morse Vtilde equals the matrix of (lambda^2/4)(2 mu - 1) z"};
  double worst = 0.0;
  for (const Morse& m : {Morse{3.0, 5.0, 0.125, 1.0}, Morse{1.0, 2.0, 0.3, 2.0}}) {
    const int n = 12;
    const AssembledSystem s = assemble(m, n);
    const double c = 0.25 * m.lambda * m.lambda * (2.0 * m.poly_mu() - 1.0), lam = m.lambda;
    const Eigen::MatrixXd q =
        matrix_elements_by_quadrature(s.basis, [=](double x) { return c * std::exp(lam * x); }, n, n + 2);
    worst = std::max(worst, (q - s.V_tilde).cwiseAbs().maxCoeff() / std::max(1.0, q.cwiseAbs().maxCoeff()));
  }
  r.pass = worst <= 1e-8;
  r.detail = "max rel diff " + fmt(worst) + " (tol 1e-8)";
  return r;
}

inline CheckResult i_masks() {
  CheckResult r{"I-masks", "reconstruct", "masked fraction below 5% inside the quadrature-node span"};
  double worst = 0.0;
  const std::vector<SystemSpec> systems{Coulomb{2.0, 1.0, 3.0}, standard_morse(), SinBox{0.0, 1.0, 1.0, 1.0},
                                        CDHSystem{1.0, -10.0, 3.0, 1.0}};
  for (const SystemSpec& spec : systems) {
    for (int n : {6, 12, 20}) {
      const AssembledSystem s = assemble(spec, n);
      // Interior: default-grid points between the first and last node mapped to x.
      const GaussRule rule = s.basis.poly().rule(n);
      const double a = s.basis.x_of_z(rule.nodes.front()), b = s.basis.x_of_z(rule.nodes.back());
      std::vector<double> grid;
      for (double x : s.basis.default_grid().points())
        if (x >= std::min(a, b) && x <= std::max(a, b)) grid.push_back(x);
      for (const Estimate& e : {method1(s.basis, s.V_tilde, grid), method2(s.basis, s.V_tilde, grid),
                                method3(s.basis, s.V_tilde, grid), method4(s.basis, s.V_tilde, grid).estimate})
        worst = std::max(worst, 1.0 - static_cast<double>(e.valid_count()) / grid.size());
    }
  }
  r.pass = worst < 0.05;
  r.detail = "max masked fraction " + fmt(worst) + " (tol 0.05)";
  return r;
}

inline CheckResult i_csv_roundtrip() {
  CheckResult r{"I-csv", "cli", "CSV output re-parses to the same numbers"};
  CsvTable t;
  t.comments.push_back("round trip");
  const std::vector<double> x{0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, std::numbers::pi};
  t.add_column("x", x);
  t.add_column("y", std::vector<std::optional<double>>{1.0, std::nullopt, -0.0, 1e-300, std::exp(1.0)});
  std::istringstream is(t.str());
  const CsvTable back = CsvTable::parse(is);
  r.pass = back.header == t.header && back.rows == t.rows && back.comments == t.comments;
  r.detail = r.pass ? "exact" : "mismatch";
  return r;
}

using CheckFn = std::function<CheckResult(const Options&)>;

template <typename F>
CheckFn plain(F f) {
  return [f](const Options&) { return f(); };
}

struct Entry {
  std::string id;
  std::string suite;
  CheckFn run;
};

inline const std::vector<Entry>& registry() {
  static const std::vector<Entry> all{
      {"I-specfun", "specfun", plain(i_specfun)},
      {"I-lintridiag", "lintridiag", plain(i_lintridiag)},
      {"C7", "quadrature", plain(c7_quadrature)},
      {"C9", "bases", plain(c9_identity)},
      {"C12", "bases", plain(c12_orthonormality)},
      {"I-conjugacy", "bases", plain(i_conjugacy)},
      {"I-energypoly", "energypoly", plain(i_energypoly)},
      {"C8", "systems", c8_tridiagonality},
      {"C10", "systems", plain(c10_sinbox_recursion)},
      {"I-morse", "systems", plain(i_morse_realization)},
      {"C1", "reconstruct", plain(c1_coulomb_exact)},
      {"C2", "reconstruct", plain(c2_coulomb_method3)},
      {"C3", "reconstruct", plain(c3_morse_method2)},
      {"C4", "reconstruct", plain(c4_morse_divergence)},
      {"C5", "reconstruct", plain(c5_smooth_bump)},
      {"C6", "reconstruct", plain(c6_piecewise)},
      {"C11", "reconstruct", plain(c11_cdh_fit)},
      {"I-masks", "reconstruct", plain(i_masks)},
      {"C13", "cli", plain(c13_sweeps)},
      {"I-csv", "cli", plain(i_csv_roundtrip)},
  };
  return all;
}

// Runtime budgets in seconds for the timed criteria.
inline double budget(const std::string& id) {
  if (id == "C1" || id == "C2" || id == "C3") return 5.0;
  if (id == "C5" || id == "C6") return 10.0;
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

inline std::vector<std::string> suites() {
  return {"specfun", "lintridiag", "quadrature", "bases", "energypoly", "systems", "reconstruct", "cli"};
}

inline bool is_criterion(const CheckResult& r) { return !r.id.empty() && r.id[0] == 'C'; }

/// Runs every check of `suite` (all suites when empty). Exceptions become failures.
inline std::vector<CheckResult> run(const std::string& suite = "", const Options& opt = {}) {
  const std::vector<std::string> known = suites();
  if (!suite.empty() && std::find(known.begin(), known.end(), suite) == known.end())
    throw DomainError("unknown suite '" + suite + "'");
  std::vector<CheckResult> out;
  for (const detail::Entry& e : detail::registry()) {
    if (!suite.empty() && e.suite != suite) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = e.run(opt);
    } catch (const std::exception& ex) {
      r = {e.id, e.suite, "", false, std::string("exception: ") + ex.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double limit = detail::budget(r.id);
    if (r.seconds > limit) {
      r.pass = false;
      r.detail += "; runtime " + detail::fmt(r.seconds) + " s over budget " + detail::fmt(limit) + " s";
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// "PASS C1   [reconstruct] title: detail (0.12 s)"
inline std::string format_line(const CheckResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS " : "FAIL ") << r.id;
  for (std::size_t i = r.id.size(); i < 13; ++i) os << ' ';
  os << '[' << r.suite << "] " << r.title << ": " << r.detail << " (";
  os.setf(std::ios::fixed);
  os.precision(2);
  os << r.seconds << " s)";
  return os.str();
}

}  // namespace potrec::acceptance
