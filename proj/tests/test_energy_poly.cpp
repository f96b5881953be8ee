#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "potrec/energy_poly.hpp"
#include "potrec/tridiag.hpp"

using namespace potrec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SymTridiag truncated(const EnergyPolyFamily& f, int n) {
  SymTridiag t;
  for (int i = 0; i < n; ++i) t.diag.push_back(recursion_coeffs(f, i).diag);
  for (int i = 0; i + 1 < n; ++i) t.offdiag.push_back(recursion_coeffs(f, i).offdiag);
  return t;
}

}  // namespace

TEST_CASE("Meixner-Pollaczek recursion at theta = pi/2", "[energypoly]") {
  const MeixnerPollaczek f{1.0, std::numbers::pi / 2};
  const RecursionTerms t = recursion_coeffs(f, 0);
  CHECK_THAT(t.diag, WithinAbs(0.0, 1e-15));
  CHECK_THAT(t.offdiag, WithinRel(std::sqrt(2.0) / 2, 1e-15));
  for (double y : {-1.3, 0.2, 2.5}) CHECK_THAT(eval_sequence(f, y, 2)[1], WithinRel(std::sqrt(2.0) * y, 1e-14));
}

TEST_CASE("Wilson and continuous dual Hahn low-order terms", "[energypoly]") {
  // (mu + a)(mu + b) - mu^2 at n = 0
  CHECK_THAT(recursion_coeffs(ContinuousDualHahn{1.0, 2.0, 0.5}, 0).diag, WithinRel(3.0 * 1.5 - 1.0, 1e-15));
  CHECK_THAT(recursion_coeffs(ContinuousDualHahn{1.0, 2.0, 0.5}, 0).offdiag,
             WithinRel(-std::sqrt(2.5 * 3.0 * 1.5), 1e-15));
  CHECK_THROWS_AS(recursion_coeffs(MeixnerPollaczek{-1.0, 1.0}, 0), DomainError);
  CHECK_THROWS_AS(recursion_coeffs(MeixnerPollaczek{1.0, 0.0}, 0), DomainError);
  CHECK_THROWS_AS(recursion_coeffs(DipoleSinBox{0.5, 0.0, 0.0}, 0), DomainError);
  CHECK_THROWS_AS(recursion_coeffs(MeixnerPollaczek{}, -1), DomainError);
}

TEST_CASE("weight functions match mpmath", "[energypoly]") {
  CHECK_THAT(weight_fn(MeixnerPollaczek{1.0, std::numbers::pi / 2}, 0.0), WithinRel(2.0 / std::numbers::pi, 1e-14));
  CHECK_THAT(weight_fn(MeixnerPollaczek{1.5, 1.0}, 0.7), WithinRel(0.086893177491158936, 1e-12));
  CHECK_THAT(weight_fn(ContinuousDualHahn{1.0, 2.0, 0.5}, 1.3), WithinRel(0.53090273689470906, 1e-12));
  CHECK_THAT(weight_fn(Wilson{1.0, 1.5, 2.0, 0.5}, 0.9), WithinRel(0.89128640641682429, 1e-12));
  CHECK_THROWS_AS(weight_fn(Dipole{}, 0.3), DomainError);
  CHECK_THROWS_AS(weight_fn(ContinuousDualHahn{1.0, -2.0, 0.5}, 1.0), DomainError);
}

TEST_CASE("Meixner-Pollaczek polynomials are orthonormal under their weight", "[energypoly]") {
  const MeixnerPollaczek f{1.5, 1.0};
  const int n = 6;
  boost::math::quadrature::sinh_sinh<double> q;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = q.integrate([&](double y) {
        const double w = weight_fn(f, y);
        if (w == 0.0) return 0.0;
        const auto p = eval_sequence(f, y, n);
        return w * p[i] * p[j];
      });
      CHECK_THAT(v, WithinAbs(i == j ? 1.0 : 0.0, 1e-9));
    }
}

TEST_CASE("half-line families are orthonormal in y^2", "[energypoly]") {
  const EnergyPolyFamily fams[] = {ContinuousDualHahn{1.0, 2.0, 0.5}, Wilson{1.0, 1.5, 2.0, 0.5}};
  boost::math::quadrature::exp_sinh<double> q;
  for (const EnergyPolyFamily& f : fams) {
    const int n = 5;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = q.integrate([&](double y) {
          if (y <= 0.0 || !std::isfinite(y)) return 0.0;
          const double w = weight_fn(f, y);
          if (w == 0.0) return 0.0;
          const auto p = eval_sequence(f, y * y, n);
          return w * p[i] * p[j];
        });
        CHECK_THAT(v, WithinAbs(i == j ? 1.0 : 0.0, 1e-8));
      }
  }
}

TEST_CASE("eigenvalues of the truncated recursion are zeros of P_N", "[energypoly]") {
  const EnergyPolyFamily fams[] = {MeixnerPollaczek{1.0, std::numbers::pi / 2}, MeixnerPollaczek{1.5, 1.0},
                                   ContinuousDualHahn{1.0, 2.0, 0.5}, Wilson{1.0, 1.5, 2.0, 0.5}};
  for (const EnergyPolyFamily& f : fams) {
    const int n = 8;
    INFO("family " << f.index());
    const EigenDecomp e = eigen_decompose(truncated(f, n));
    for (double eps : e.values) {
      const std::vector<double> p = eval_sequence(f, eps, n + 1);
      double scale = 0.0;
      for (double v : p) scale = std::max(scale, std::abs(v));
      CHECK(std::abs(p[n]) <= 1e-10 * scale);
      // J P = eps P on the first N components.
      const SymTridiag t = truncated(f, n);
      for (int i = 0; i < n; ++i) {
        double row = t.diag[i] * p[i];
        if (i > 0) row += t.offdiag[i - 1] * p[i - 1];
        if (i + 1 < n) row += t.offdiag[i] * p[i + 1];
        CHECK(std::abs(row - eps * p[i]) <= 1e-10 * std::max(1.0, std::abs(eps)) * scale);
      }
    }
  }
}

TEST_CASE("large-degree behaviour follows the asymptotic form", "[energypoly]") {
  const EnergyPolyFamily fams[] = {MeixnerPollaczek{1.0, std::numbers::pi / 2}, ContinuousDualHahn{1.0, 2.0, 0.5},
                                   Wilson{1.0, 1.5, 2.0, 0.5}};
  for (const EnergyPolyFamily& f : fams) {
    const double y = 0.7;
    const double x = std::holds_alternative<MeixnerPollaczek>(f) ? y : y * y;
    std::vector<double> rel;
    for (int n : {100, 25600}) {
      const std::vector<double> p = eval_sequence(f, x, n + 41);
      double err = 0.0, amp = 0.0;
      for (int k = n; k <= n + 40; ++k) {
        const double r = asymptotic_reference(f, y, k);
        err = std::max(err, std::abs(p[k] - r));
        amp = std::max(amp, std::abs(r));
      }
      rel.push_back(err / amp);
    }
    INFO("family " << f.index() << ": " << rel[0] << " -> " << rel[1]);
    CHECK(rel[1] < 0.1 * rel[0]);
    CHECK(rel[1] < 1e-3);
  }
  CHECK_THROWS_AS(asymptotic_reference(Dipole{}, 0.5, 10), DomainError);
}

TEST_CASE("phase shifts", "[energypoly]") {
  CHECK_THAT(coulomb_phase_shift(2.0, 1.0, 2.0).value, WithinRel(0.48375784292991511, 1e-13));
  const PhaseShift m = morse_phase_shift(3.0, 5.0, 0.125, 1.0, 1.5);
  CHECK_THAT(m.value, WithinRel(1.6862152627950708, 1e-12));
  CHECK_FALSE(m.near_threshold);
  CHECK(morse_phase_shift(3.0, 5.0, 0.125, 1.0, 1e-14).near_threshold);
  CHECK_THROWS_AS(coulomb_phase_shift(1.0, 0.0, -1.0), DomainError);
}

TEST_CASE("positivity warnings", "[energypoly]") {
  CHECK(positivity_warnings(ContinuousDualHahn{1.0, 2.0, 0.5}).empty());
  CHECK(positivity_warnings(ContinuousDualHahn{-10.0, 3.0, 3.0}).size() == 1);
  CHECK(positivity_warnings(Wilson{1.0, -1.0, -2.0, 0.5}).size() == 2);
}
