#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "potrec/energy_poly.hpp"
#include "potrec/systems.hpp"

using namespace potrec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double max_off_band(const Eigen::MatrixXd& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(i - j) > 1) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

}  // namespace

TEST_CASE("Coulomb potential matrix is constant", "[systems]") {
  for (int n : {2, 4, 16, 64}) {
    const AssembledSystem s = assemble(Coulomb{2.0, 1.0, 3.0}, n);
    REQUIRE(s.V.has_value());
    CHECK(((*s.V) + 6.0 * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THAT(assemble(Coulomb{2.0, 1.0, 3.0}, 4).H(0, 0), WithinAbs(-1.5, 1e-14));
}

TEST_CASE("Coulomb matrix identity", "[systems]") {
  for (double ell : {0.0, 1.0, 2.5})
    for (double lam : {0.5, 3.0}) CHECK(coulomb_identity_check(ell, lam, 13) <= 1e-10);
}

TEST_CASE("Morse reduced potential", "[systems]") {
  // mu = 1/2 - 4 * 5 * 0.125 = -2
  const Morse m{3.0, 5.0, 0.125, 1.0};
  REQUIRE(m.poly_mu() == -2.0);
  const AssembledSystem s = assemble(m, 6);
  CHECK_THAT(s.V_tilde(0, 0), WithinRel(-10.0, 1e-13));
  CHECK(max_off_band(s.V_tilde) == 0.0);
  REQUIRE(s.T.has_value());
  CHECK(max_off_band(*s.T) > 0.0);
  CHECK(s.counterterm.kind == Counterterm::Kind::Exponential);
}

TEST_CASE("sin box recursion is the dipole recursion", "[systems]") {
  const double lam = 1.3, v0 = 0.4, v1 = -0.9, v2 = 0.7;
  const AssembledSystem s = assemble(SinBox{v0, v1, v2, lam}, 9);
  REQUIRE(s.energy_recursion.has_value());
  const double nu = detail::wall_nu(v2, lam);
  const DipoleSinBox d{nu, 2 * v0 / (lam * lam), 2 * v1 / (lam * lam)};
  for (int i = 0; i < 9; ++i) CHECK_THAT(s.energy_recursion->diag[i], WithinRel(recursion_coeffs(d, i).diag, 1e-13));
  for (int i = 0; i < 8; ++i)
    CHECK_THAT(s.energy_recursion->offdiag[i], WithinRel(recursion_coeffs(d, i).offdiag, 1e-13));
}

TEST_CASE("wall strength and nu round trip", "[systems]") {
  for (double v2 : {-0.1, 0.0, 0.375, 2.0}) {
    const double lam = 1.7;
    const double nu = detail::wall_nu(v2, lam);
    CHECK_THAT(0.5 * lam * lam * (nu * nu - 0.25), WithinAbs(v2, 1e-13));
    const AssembledSystem s = assemble(SinBox{0.0, 1.0, v2, lam}, 4);
    const double back = s.counterterm.kind == Counterterm::Kind::None ? 0.0 : s.counterterm.coefficient;
    CHECK_THAT(back, WithinAbs(v2, 1e-13));
  }
  CHECK_THROWS_AS(detail::wall_nu(-1.0, 1.0), DomainError);
}

TEST_CASE("pulse recursion at n = 0", "[systems]") {
  const HyperbolicPulse p{0.5, 1.5, 1.0, -0.5};
  const double nu = std::sqrt(-2.0 * p.energy) / p.lambda, c = 0.5 * p.lambda * p.lambda, u0 = p.v0 / c;
  const AssembledSystem s = assemble(p, 5);
  REQUIRE(s.V.has_value());
  const Eigen::MatrixXd j = *s.V + s.T_tilde;
  CHECK_THAT(j(0, 0) / c, WithinRel((nu + 0.5) * (nu + 0.5) - 0.25 + u0, 1e-13));
  CHECK_THAT(s.energy_recursion->diag[0], WithinRel(recursion_coeffs(DipolePulse{nu, p.v1 / c}, 0).diag, 1e-13));
  CHECK(s.energy.value() == p.energy);
}

TEST_CASE("pulse requires a bound-state energy", "[systems]") {
  CHECK_THROWS_AS(assemble(HyperbolicPulse{0.5, 1.5, 1.0, 0.2}, 4), DomainError);
  CHECK_THROWS_AS(assemble(HyperbolicPulse{2.0, 1.5, 1.0, -0.5}, 4), DomainError);
}

TEST_CASE("half-line energy recursions", "[systems]") {
  const AssembledSystem c = assemble(CDHSystem{1.0, -10.0, 3.0, 1.0}, 6);
  CHECK_THAT(c.energy_recursion->diag[0], WithinRel(-64.0, 1e-14));
  CHECK_FALSE(c.warnings.empty());  // gamma < 0
  const AssembledSystem w = assemble(WilsonSystem{1.0, 2.0, 2.0, 2.0, 1.0}, 6);
  CHECK_THAT(w.energy_recursion->diag[0], WithinRel(4.0, 1e-14));
  CHECK(w.warnings.empty());
  CHECK(c.reference.kind == ReferencePotential::Kind::PoschlTellerFamily);
}

TEST_CASE("wave operators are tridiagonal at every energy", "[systems]") {
  const SystemSpec specs[] = {Coulomb{2.0, 1.0, 3.0}, Morse{1.0, 2.0, 0.3, 1.5}, SinBox{0.2, 1.0, 0.6, 1.0},
                              HyperbolicPulse{-0.3, 2.0, 1.5, -1.2}, CDHSystem{1.0, -10.0, 3.0, 1.0},
                              WilsonSystem{0.5, 2.0, 2.0, 2.0, 1.0}};
  for (const SystemSpec& spec : specs) {
    const AssembledSystem s = assemble(spec, 12);
    for (double e : sample_energies(s)) {
      const TridiagonalityReport r = tridiagonality_report(s, e);
      INFO(s.basis.name() << " E = " << e);
      CHECK(r.max_off_band <= 1e-10 * std::max(1.0, r.band_profile[0]));
    }
  }
}

TEST_CASE("full and reduced forms share the potential", "[systems]") {
  const AssembledSystem s = assemble(Morse{1.0, 2.0, 0.3, 1.5}, 8);
  REQUIRE(s.V.has_value());
  const Eigen::MatrixXd a = wave_operator(s, 0.7, KineticForm::Full);
  const Eigen::MatrixXd b = wave_operator(s, 0.7, KineticForm::Reduced);
  CHECK(((a - b) - (*s.T - s.T_tilde)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((s.H - *s.V - *s.T).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sample energies", "[systems]") {
  CHECK(sample_energies(assemble(Coulomb{1.0, 0.0, 2.0}, 3)) == std::vector<double>{-4.0, 2.0, 8.0});
  CHECK(sample_energies(assemble(HyperbolicPulse{0.5, 1.5, 1.0, -0.5}, 3)) == std::vector<double>{-0.5});
}

TEST_CASE("invalid system parameters", "[systems]") {
  CHECK_THROWS_AS(assemble(Coulomb{1.0, 0.0, 1.0}, 1), DomainError);
  CHECK_THROWS_AS(assemble(Coulomb{1.0, 0.0, -1.0}, 4), DomainError);
  CHECK_THROWS_AS(assemble(SinBox{0.0, 1.0, -1.0, 1.0}, 4), DomainError);
  CHECK_THROWS_AS(assemble(CDHSystem{1.0, -10.0, -2.0, 1.0}, 4), DomainError);
}

TEST_CASE("closed-form reference potentials", "[systems]") {
  const ReferencePotential c = exact_potential(Coulomb{2.0, 0.0, 1.0});
  CHECK_THAT(c.exact(0.5), WithinRel(-4.0, 1e-15));
  const ReferencePotential b = exact_potential(SinBox{0.5, 1.0, 0.25, 1.0});
  CHECK_THAT(b.exact(0.0), WithinRel(0.75, 1e-15));
  const ReferencePotential p = exact_potential(HyperbolicPulse{0.5, 1.5, 1.0, -0.5});
  CHECK_THAT(p.exact(0.0), WithinRel(0.5, 1e-15));
  const PoschlTeller pt = exact_potential(CDHSystem{1.0, -10.0, 3.0, 2.0}).with(-3.0, 0.5);
  const double x = 0.4, s = std::sinh(0.8), ch = std::cosh(0.8);
  CHECK_THAT(pt(x), WithinRel(1.0 / (s * s) - 3.0 / (ch * ch) + 0.5, 1e-14));
}
