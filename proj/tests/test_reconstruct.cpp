#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "potrec/matrix_elements.hpp"
#include "potrec/potentials.hpp"
#include "potrec/reconstruct.hpp"
#include "potrec/systems.hpp"

using namespace potrec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

template <typename F>
double max_error(const Estimate& e, std::span<const double> grid, F&& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (e.mask[i]) worst = std::max(worst, std::abs(e.values[i] - f(grid[i])));
  return worst;
}

}  // namespace

// ---------------------------------------------------------------- rational fit

TEST_CASE("constant data give a constant fraction", "[reconstruct]") {
  const std::vector<Sample> s{{0, 2.5}, {1, 2.5}, {2, 2.5}};
  const RationalFit f = fit_rational(s);
  for (double a : f.coefficients()) CHECK(a == 0.0);
  for (double x : {-3.0, 0.5, 7.0}) CHECK_THAT(f(x), WithinRel(2.5, 1e-15));
}

TEST_CASE("1/(1+x) is reproduced away from the pole", "[reconstruct]") {
  const std::vector<Sample> s{{0, 1.0}, {1, 0.5}, {3, 0.25}};
  const RationalFit f = fit_rational(s);
  for (double x : {-0.9, -0.5, 0.2, 2.0, 10.0, 100.0}) CHECK_THAT(f(x), WithinRel(1.0 / (1.0 + x), 1e-13));
}

TEST_CASE("interpolation property", "[reconstruct]") {
  const std::vector<Sample> sq{{0, 0}, {1, 1}, {2, 4}};
  const RationalFit f = fit_rational(sq);
  CHECK_THAT(f(0.0), WithinAbs(0.0, 1e-12));
  CHECK_THAT(f(1.0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(f(2.0), WithinAbs(4.0, 1e-12));

  std::vector<Sample> s;
  for (double x : linspace(0.1, 3.0, 12)) s.push_back({x, std::exp(-x) * std::cos(2 * x) + 0.3});
  const RationalFit g = fit_rational(s);
  double ymax = 0.0;
  for (const Sample& p : s) ymax = std::max(ymax, std::abs(p.y));
  for (const Sample& p : s) {
    const auto v = g.try_eval(p.x);
    REQUIRE(v.has_value());
    CHECK(std::abs(*v - p.y) <= 1e-9 * ymax);
  }
}

TEST_CASE("fit input errors", "[reconstruct]") {
  const std::vector<Sample> one{{0, 1}};
  CHECK_THROWS_AS(fit_rational(one), DomainError);
  const std::vector<Sample> dup{{0, 1}, {0, 2}};
  CHECK_THROWS_AS(fit_rational(dup), DomainError);
}

// ---------------------------------------------------------------- methods

TEST_CASE("constant potential in an orthonormal self-conjugate basis", "[reconstruct]") {
  const Basis b(HermiteLine{1.0});
  const int n = 10;
  const double c = -1.75;
  const Eigen::MatrixXd v = c * Eigen::MatrixXd::Identity(n, n);
  const std::vector<double> grid = b.default_grid().points();
  const Estimate e1 = method1(b, v, grid), e2 = method2(b, v, grid);
  CHECK(e1.valid_count() > 0);
  CHECK(e2.valid_count() > 0);
  CHECK(max_error(e1, grid, [&](double) { return c; }) <= 1e-13);
  CHECK(max_error(e2, grid, [&](double) { return c; }) <= 1e-13);
  const Method4Result r = method4(b, v, grid);
  for (const Sample& s : r.samples) CHECK_THAT(s.y, WithinRel(c, 1e-13));
  CHECK(r.off_diagonal_residual <= 1e-14);
  CHECK(max_error(r.estimate, grid, [&](double) { return c; }) <= 1e-12);
}

TEST_CASE("Coulomb potential is recovered exactly by methods 1, 2 and 4", "[reconstruct]") {
  for (int n : {4, 10, 20}) {
    const AssembledSystem s = assemble(Coulomb{2.0, 1.0, 3.0}, n);
    const std::vector<double> grid = s.basis.default_grid().points();
    const auto exact = [](double r) { return -2.0 / r; };
    const Estimate e1 = method1(s.basis, *s.V, grid), e2 = method2(s.basis, *s.V, grid);
    CHECK(max_error(e1, grid, exact) <= 1e-9);
    CHECK(max_error(e2, grid, exact) <= 1e-9);
    const Method4Result r = method4(s.basis, *s.V, grid);
    for (const Sample& p : r.samples) CHECK_THAT(p.y, WithinRel(exact(p.x), 1e-11));
    CHECK(max_error(r.estimate, grid, exact) <= 1e-8);
  }
}

TEST_CASE("methods 1 and 2 agree for diagonal V when phibar is proportional to phi", "[reconstruct]") {
  // phibar = phi / (lambda r) in the radial basis.
  const Basis b(LaguerreRadial{0.0, 2.0});
  const int n = 12;
  const Eigen::MatrixXd v = 0.8 * Eigen::MatrixXd::Identity(n, n);
  const std::vector<double> grid = b.default_grid().points();
  const Estimate e1 = method1(b, v, grid), e2 = method2(b, v, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (e1.mask[i] && e2.mask[i]) CHECK_THAT(e1.values[i], WithinAbs(e2.values[i], 1e-12 * std::abs(e2.values[i])));
}

TEST_CASE("Morse potential from one column", "[reconstruct]") {
  const Morse m{3.0, 5.0, 0.125, 1.0};
  const AssembledSystem s = assemble(m, 12);
  const std::vector<double> grid = linspace(-6.0, 1.5, 76);
  const Estimate e = with_counterterm(method2(s.basis, s.V_tilde, grid), s.counterterm, grid);
  CHECK(e.valid_count() == grid.size());
  CHECK(max_error(e, grid, [](double x) { return 0.125 * (std::exp(2 * x) - 10.0 * std::exp(x)); }) <= 1e-10);
}

TEST_CASE("closed loop through method 4", "[reconstruct]") {
  // gamma V / x' is a low-degree polynomial in z, so the N-point rule is exact.
  struct Case {
    BasisSpec spec;
    RealFn v;
  };
  const Case cases[] = {
      {HermiteLine{1.5}, [](double x) { return 1.0 + 0.5 * x - 0.3 * x * x; }},
      {LaguerreRadial{1.0, 2.0}, [](double r) { return 3.0 - r; }},
      {MorseLaguerre{1.0, 1.0}, [](double x) { return 2.0 - std::exp(x); }},
      {JacobiHalf{1.0, 1.5, 1.0}, [](double x) { return 1.0 / std::pow(std::cosh(x), 2); }},
  };
  for (const Case& c : cases) {
    const Basis b(c.spec);
    const int n = 8;
    const Eigen::MatrixXd v = matrix_elements_by_quadrature(b, c.v, n, n);
    const Method4Result r = method4(b, v, std::vector<double>{});
    INFO(b.name());
    CHECK(r.off_diagonal_residual <= 1e-12);
    for (const Sample& s : r.samples) CHECK_THAT(s.y, WithinAbs(c.v(s.x), 1e-8 * std::max(1.0, std::abs(c.v(s.x)))));
  }
}

TEST_CASE("method 3 sum with K = N equals the matrix form", "[reconstruct]") {
  const BasisSpec specs[] = {LaguerreRadial{1.0, 7.0}, HermiteLine{1.0}, MorseLaguerre{3.0, 1.0},
                             JacobiSym{1.0, 1.5, 1.0, JacobiMap::Sin}, JacobiSym{0.5, 1.0, 1.0, JacobiMap::Tanh},
                             JacobiHalf{3.0, 1.5, 1.0}};
  for (const BasisSpec& spec : specs) {
    const Basis b(spec);
    for (int n : {1, 5, 16}) {
      const Eigen::VectorXd a = phibar_integrals(b, n, Method3Variant::Matrix, 0);
      const Eigen::VectorXd s = phibar_integrals(b, n, Method3Variant::Sum, n);
      INFO(b.name() << " N = " << n);
      CHECK((a - s).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("method 3 improves with N for Coulomb", "[reconstruct]") {
  const std::vector<double> grid = linspace(0.5, 6.0, 111);
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {10, 20, 50}) {
    const AssembledSystem s = assemble(Coulomb{2.0, 1.0, 3.0}, n);
    const double err = max_error(method3(s.basis, *s.V, grid), grid, [](double r) { return -2.0 / r; });
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("smooth bump is tracked by methods 3 and 4", "[reconstruct]") {
  const Basis b(LaguerreRadial{1.0, 7.0});
  const int n = 20;
  const Eigen::MatrixXd v = matrix_elements_by_quadrature(b, smooth_bump, n, 4 * n);
  const std::vector<double> grid = linspace(0.2, 8.0, 400);
  CHECK(max_error(method3(b, v, grid), grid, smooth_bump) <= 0.1);
  CHECK(max_error(method4(b, v, grid).estimate, grid, smooth_bump) <= 0.1);
}

TEST_CASE("invalid matrices and empty reconstructions", "[reconstruct]") {
  const Basis b(LaguerreRadial{0.0, 1.0});
  const std::vector<double> grid{0.5, 1.0};
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(method1(b, asym, grid), DomainError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(method2(b, bad, grid), DomainError);
  CHECK_THROWS_AS(method2(b, Eigen::MatrixXd::Identity(3, 3), grid, 3), DomainError);
  const std::vector<double> outside{-2.0, -1.0};
  CHECK_THROWS_AS(method1(b, Eigen::MatrixXd::Identity(3, 3), outside), ReconstructionFailed);
  CHECK_THROWS_AS(method3(b, Eigen::MatrixXd::Identity(3, 3), outside), ReconstructionFailed);
}

TEST_CASE("estimates are defined only where the mask is set", "[reconstruct]") {
  const AssembledSystem s = assemble(Morse{1.0, 2.0, 0.3, 1.0}, 10);
  const std::vector<double> grid = linspace(-30.0, 10.0, 200);
  for (const Estimate& e : {method1(s.basis, s.V_tilde, grid), method2(s.basis, s.V_tilde, grid),
                            method3(s.basis, s.V_tilde, grid)}) {
    REQUIRE(e.values.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(e.mask[i] == std::isfinite(e.values[i]));
  }
}

TEST_CASE("method 4 flags matrices that are not quadrature-consistent", "[reconstruct]") {
  const Basis b(HermiteLine{1.0});
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(6, 6);
  v(0, 5) = v(5, 0) = 1.0;
  v(2, 2) = 0.1;
  const Method4Result r = method4(b, v, std::vector<double>{0.0});
  CHECK(r.off_diagonal_residual > kOffDiagonalWarning);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("divergence detection", "[reconstruct]") {
  const std::vector<int> sizes{8, 16, 32};
  const auto growing = [](int n) { return Estimate{{1.0, -0.5 * n * n}, {true, true}}; };
  CHECK(detect_divergence(growing, sizes).diverging);
  const auto steady = [](int n) { return Estimate{{1.0, 3.0 + 1.0 / n}, {true, true}}; };
  const DivergenceReport r = detect_divergence(steady, sizes);
  CHECK_FALSE(r.diverging);
  CHECK(r.max_abs.size() == 3);
  const std::vector<int> one{8};
  CHECK_THROWS_AS(detect_divergence(steady, one), DomainError);
}

TEST_CASE("Poschl-Teller fit recovers its parameters", "[reconstruct]") {
  const std::vector<double> grid = linspace(0.3, 4.0, 60);
  Estimate e{std::vector<double>(grid.size()), std::vector<bool>(grid.size(), true)};
  for (std::size_t i = 0; i < grid.size(); ++i) e.values[i] = -3.5 / std::pow(std::cosh(1.5 * grid[i]), 2) + 0.25;
  const PoschlTellerFit f = fit_poschl_teller(grid, e, 1.5, 0.0, 5.0);
  CHECK_THAT(f.v1, WithinRel(-3.5, 1e-12));
  CHECK_THAT(f.v0, WithinRel(0.25, 1e-12));
  CHECK(f.relative_residual <= 1e-12);
  CHECK(f.points == grid.size());
}

TEST_CASE("counterterm is added only at valid points", "[reconstruct]") {
  const Counterterm c{Counterterm::Kind::HarmonicOscillator, 2.0, 1.0, "2 x^2"};
  const std::vector<double> grid{1.0, 2.0};
  const Estimate e = with_counterterm(Estimate{{1.0, std::numeric_limits<double>::quiet_NaN()}, {true, false}}, c, grid);
  CHECK(e.values[0] == 3.0);
  CHECK_FALSE(e.mask[1]);
  const Counterterm overlap{Counterterm::Kind::EnergyOverlap, 2.0, 1.0, "overlap"};
  CHECK(with_counterterm(Estimate{{1.0}, {true}}, overlap, std::vector<double>{1.0}).values[0] == 1.0);
}
