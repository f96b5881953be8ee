#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <numbers>

#include "potrec/bases.hpp"

using namespace potrec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using VecFn = std::function<std::vector<double>(double)>;

// int f(x) f(x)^T dx by composite 30-point Gauss-Legendre.
Eigen::MatrixXd gram(const VecFn& f, int n, double a, double b, int pieces, const VecFn& g = nullptr) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double h = (b - a) / pieces;
  auto add = [&](double x, double w) {
    const std::vector<double> u = f(x);
    const std::vector<double> v = g ? g(x) : u;
    m.noalias() += w * Eigen::Map<const Eigen::VectorXd>(u.data(), n) *
                   Eigen::Map<const Eigen::VectorXd>(v.data(), n).transpose();
  };
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
      const double t = Rule::abscissa()[i], w = half * Rule::weights()[i];
      add(mid + half * t, w);
      if (t != 0.0) add(mid - half * t, w);
    }
  }
  return m;
}

// phi'_n(x) by a five-point stencil that stays inside (lo, hi).
std::vector<double> dphi(const Basis& b, int n, double x, double lo, double hi) {
  const double h = std::min(1e-3, 0.2 * std::min(x - lo, hi - x));
  const auto p2 = b.phi_all(n, x + 2 * h), p1 = b.phi_all(n, x + h);
  const auto m1 = b.phi_all(n, x - h), m2 = b.phi_all(n, x - 2 * h);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = (-p2[i] + 8 * p1[i] - 8 * m1[i] + m2[i]) / (12 * h);
  return d;
}

struct KineticCase {
  BasisSpec spec;
  double lo, hi;       // integration range
  double centrifugal;  // l(l+1) for the radial basis
};

// lambda int (phi'_n phi'_m / 2 + l(l+1) phi_n phi_m / 2x^2) dx
Eigen::MatrixXd brute_force_kinetic(const KineticCase& c, int n) {
  const Basis b(c.spec);
  const double dlo = std::max(c.lo, b.lower()), dhi = std::min(c.hi, b.upper());
  Eigen::MatrixXd t = 0.5 * gram([&](double x) { return dphi(b, n, x, b.lower(), b.upper()); }, n, dlo, dhi, 400);
  if (c.centrifugal != 0.0)
    t += 0.5 * c.centrifugal *
         gram([&](double x) { auto v = b.phi_all(n, x); for (double& e : v) e /= x; return v; }, n, dlo, dhi, 400);
  return b.lambda() * t;
}

}  // namespace

TEST_CASE("basis functions match mpmath values", "[bases]") {
  CHECK_THAT(Basis(LaguerreRadial{1.0, 7.0}).phi(2, 0.3), WithinRel(0.33968638608152167, 1e-12));
  CHECK_THAT(Basis(LaguerreRadial{0.0, 2.0}).phi(5, 1.7), WithinRel(0.49753891726152739, 1e-12));
  CHECK_THAT(Basis(HermiteLine{1.5}).phi(3, 0.7), WithinRel(-0.20859481019265957, 1e-12));
  CHECK_THAT(Basis(MorseLaguerre{3.0, 1.0}).phi(4, 1.2), WithinRel(0.41710837494574014, 1e-12));
  CHECK_THAT(Basis(JacobiSym{0.75, 1.0, 1.0, JacobiMap::Sin}).phi(2, 0.4), WithinRel(-0.17312662339183747, 1e-12));
}

TEST_CASE("Hermite ground state at the origin", "[bases]") {
  CHECK_THAT(Basis(HermiteLine{1.0}).phi(0, 0.0), WithinRel(std::pow(std::numbers::pi, -0.25), 1e-15));
}

TEST_CASE("Laguerre radial overlap", "[bases]") {
  const Eigen::MatrixXd o = Basis(LaguerreRadial{1.0, 3.0}).overlap(4);
  CHECK_THAT(o(0, 0), WithinRel(4.0, 1e-15));
  CHECK_THAT(o(0, 1), WithinRel(-2.0, 1e-15));
  CHECK(o(0, 2) == 0.0);
}

TEST_CASE("orthonormal bases have identity overlap", "[bases]") {
  for (const BasisSpec& s : {BasisSpec{MorseLaguerre{1.0, 2.0}}, BasisSpec{JacobiHalf{1.0, 2.5, 1.0}},
                             BasisSpec{HermiteLine{0.7}}})
    CHECK(Basis(s).overlap(6).isIdentity(0.0));
}

TEST_CASE("closed-form overlaps agree with quadrature", "[bases]") {
  struct Case {
    BasisSpec spec;
    double lo, hi;
  };
  const Case cases[] = {
      {LaguerreRadial{1.0, 2.0}, 0.0, 40.0},
      {HermiteLine{1.5}, -12.0, 12.0},
      {MorseLaguerre{1.5, 1.0}, -40.0, 5.0},
      {JacobiSym{1.0, 1.5, 1.0, JacobiMap::Sin}, -std::numbers::pi / 2, std::numbers::pi / 2},
      {JacobiSym{0.75, 1.0, 1.0, JacobiMap::Sin}, -std::numbers::pi / 2, std::numbers::pi / 2},
      {JacobiSym{0.75, 1.0, 1.0, JacobiMap::Tanh}, -30.0, 30.0},
      {JacobiHalf{1.0, 1.5, 1.0}, 0.0, 30.0},
  };
  for (const Case& c : cases) {
    const Basis b(c.spec);
    const int n = 7;
    const Eigen::MatrixXd g = b.lambda() * gram([&](double x) { return b.phi_all(n, x); }, n, c.lo, c.hi, 400);
    INFO(b.name());
    CHECK((g - b.overlap(n)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("phibar is phi scaled by x'/gamma and is biorthogonal to phi", "[bases]") {
  const Basis b(LaguerreRadial{1.0, 2.0});
  for (double x : {0.1, 0.8, 3.3}) {
    const double z = b.z_of_x(x);
    for (int n = 0; n < 5; ++n)
      CHECK_THAT(b.phibar(n, x), WithinRel(b.phi(n, x) * b.jacobian(z) / b.gamma(z), 1e-13));
  }
  const int n = 6;
  const Eigen::MatrixXd m =
      b.lambda() * gram([&](double x) { return b.phi_all(n, x); }, n, 0.0, 40.0, 400,
                        [&](double x) { return b.phibar_all(n, x); });
  CHECK((m - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("x(z) inverts z(x)", "[bases]") {
  for (const BasisSpec& s :
       {BasisSpec{LaguerreRadial{0.0, 2.0}}, BasisSpec{HermiteLine{1.5}}, BasisSpec{MorseLaguerre{1.0, 0.5}},
        BasisSpec{JacobiSym{0.75, 1.0, 2.0, JacobiMap::Sin}}, BasisSpec{JacobiSym{0.5, 1.0, 1.0, JacobiMap::Tanh}},
        BasisSpec{JacobiHalf{1.0, 1.0, 1.5}}}) {
    const Basis b(s);
    for (double x : b.default_grid().points()) {
      if (!(std::abs(x) < 4.0)) continue;
      CHECK_THAT(b.x_of_z(b.z_of_x(x)), WithinAbs(x, 1e-9 * std::max(1.0, std::abs(x))));
    }
  }
}

TEST_CASE("out-of-domain evaluation is an error", "[bases]") {
  CHECK_THROWS_AS(Basis(LaguerreRadial{0.0, 1.0}).phi(0, -1.0), DomainError);
  CHECK_THROWS_AS(Basis(JacobiSym{0.75, 1.0, 1.0, JacobiMap::Sin}).phi(0, 2.0), DomainError);
  CHECK_THROWS_AS(Basis(JacobiHalf{0.0, 1.0, 1.0}).phi(0, -0.1), DomainError);
  CHECK_THROWS_AS(Basis(LaguerreRadial{-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(Basis(MorseLaguerre{-1.5, 1.0}), DomainError);
}

TEST_CASE("kinetic matrices agree with direct differentiation", "[bases]") {
  const KineticCase cases[] = {
      {LaguerreRadial{1.0, 2.0}, 0.0, 40.0, 2.0},
      {LaguerreRadial{0.0, 1.0}, 0.0, 80.0, 0.0},
      {HermiteLine{1.5}, -12.0, 12.0, 0.0},
      {MorseLaguerre{1.5, 1.0}, -40.0, 5.0, 0.0},
      {JacobiSym{1.0, 1.5, 1.0, JacobiMap::Sin}, -2.0, 2.0, 0.0},
      {JacobiSym{0.5, 1.0, 1.0, JacobiMap::Tanh}, -30.0, 30.0, 0.0},
      {JacobiHalf{1.0, 1.5, 1.0}, 0.0, 30.0, 0.0},
      {JacobiHalf{2.0, 0.5, 2.0}, 0.0, 15.0, 0.0},
  };
  for (const KineticCase& c : cases) {
    const int n = 6;
    const Basis b(c.spec);
    const KineticMatrices k = b.kinetic(n);
    REQUIRE(k.full.has_value());
    const Eigen::MatrixXd t = brute_force_kinetic(c, n);
    INFO(b.name());
    CHECK((t - *k.full).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, t.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("reduced kinetic matrix minus counterterm gives the full one", "[bases]") {
  const int n = 8;
  const KineticCase cases[] = {
      {HermiteLine{1.3}, -14.0, 14.0, 0.0},
      {MorseLaguerre{0.5, 1.0}, -80.0, 5.0, 0.0},
      {JacobiHalf{1.0, 1.5, 1.0}, 0.0, 30.0, 0.0},
      {JacobiSym{1.0, 1.5, 1.0}, -2.0, 2.0, 0.0},
  };
  for (const KineticCase& kc : cases) {
    const Basis b(kc.spec);
    const KineticMatrices k = b.kinetic(n);
    REQUIRE(k.full.has_value());
    REQUIRE(k.counterterm.is_potential());
    const double lo = std::max(kc.lo, b.lower()), hi = std::min(kc.hi, b.upper());
    const Eigen::MatrixXd c =
        b.lambda() * gram([&](double x) { return b.phi_all(n, x); }, n, lo, hi, 400, [&](double x) {
          auto v = b.phi_all(n, x);
          for (double& e : v) e *= k.counterterm(x);
          return v;
        });
    INFO(b.name());
    CHECK((k.reduced - c - *k.full).cwiseAbs().maxCoeff() <= 1e-8 * k.full->cwiseAbs().maxCoeff());
  }
  // tanh map: the difference is a multiple of the overlap.
  const Basis t(JacobiSym{0.5, 1.0, 1.0, JacobiMap::Tanh});
  const KineticMatrices k = t.kinetic(n);
  CHECK(k.counterterm.kind == Counterterm::Kind::EnergyOverlap);
  CHECK((*k.full - k.reduced - k.counterterm.coefficient * t.overlap(n)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("reduced kinetic matrices are tridiagonal", "[bases]") {
  for (const BasisSpec& s : {BasisSpec{LaguerreRadial{2.0, 1.0}}, BasisSpec{HermiteLine{1.0}},
                             BasisSpec{MorseLaguerre{2.0, 1.5}}, BasisSpec{JacobiSym{1.0, 1.5, 1.0}},
                             BasisSpec{JacobiHalf{0.5, 0.0, 1.0}}}) {
    const Eigen::MatrixXd t = Basis(s).kinetic(10).reduced;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        if (std::abs(i - j) > 1) CHECK(t(i, j) == 0.0);
  }
}

TEST_CASE("unsupported kinetic parameterizations throw", "[bases]") {
  CHECK_THROWS_AS(Basis(JacobiSym{0.8, 1.0, 1.0, JacobiMap::Sin}).kinetic(4), DomainError);
  CHECK_THROWS_AS(Basis(JacobiSym{0.8, 1.0, 1.0, JacobiMap::Tanh}).kinetic(4), DomainError);
  CHECK_THROWS_AS(Basis(HermiteLine{1.0}).overlap(0), DomainError);
}

TEST_CASE("default grids lie inside the domain", "[bases]") {
  for (const BasisSpec& s :
       {BasisSpec{LaguerreRadial{0.0, 2.0}}, BasisSpec{HermiteLine{1.5}}, BasisSpec{MorseLaguerre{1.0, 0.5}},
        BasisSpec{JacobiSym{0.75, 1.0, 2.0, JacobiMap::Sin}}, BasisSpec{JacobiHalf{1.0, 1.0, 1.5}}}) {
    const Basis b(s);
    const std::vector<double> x = b.default_grid().points();
    CHECK(x.size() == 400);
    for (double v : x) CHECK(b.in_domain(v));
    for (double v : x) CHECK(std::isfinite(b.phi(3, v)));
  }
}
