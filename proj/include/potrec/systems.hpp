#pragma once
// Physical systems defined by an energy polynomial and a basis. Each system
// maps its physical parameters onto basis and polynomial parameters and
// assembles H, T, Ttilde, Omega, V = H - T and Vtilde = H - Ttilde.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "potrec/bases.hpp"
#include "potrec/energy_poly.hpp"
#include "potrec/errors.hpp"
#include "potrec/matrix_elements.hpp"

namespace potrec {

/// 3D Coulomb problem, Laguerre radial basis.
struct Coulomb {
  double charge = 1.0;  // Z
  double ell = 0.0;
  double lambda = 1.0;
};

/// 1D Morse problem, mu = 1/2 - 4 beta V0 / lambda^2.
struct Morse {
  double alpha = 0.0;
  double beta = 1.0;
  double v0 = 0.125;
  double lambda = 1.0;

  double poly_mu() const { return 0.5 - 4.0 * beta * v0 / (lambda * lambda); }
};

/// V0 + V1 sin(lambda x) + V2 / cos^2(lambda x) on |x| < pi / 2 lambda.
struct SinBox {
  double v0 = 0.0;
  double v1 = 1.0;
  double v2 = 0.0;
  double lambda = 1.0;
};

/// (V0 + V1 tanh(lambda x)) / cosh^2(lambda x) at a fixed negative energy.
struct HyperbolicPulse {
  double v0 = 0.0;
  double v1 = 1.0;
  double lambda = 1.0;
  double energy = -0.5;
};

/// Continuous dual Hahn system on x > 0. poly_gamma is the polynomial
/// parameter, basis_mu the Jacobi parameter of the half-line basis.
struct CDHSystem {
  double v2 = 1.0;
  double poly_gamma = -10.0;
  double basis_mu = 3.0;
  double lambda = 1.0;
};

/// Wilson system on x > 0 with a = b and kappa = poly_gamma.
struct WilsonSystem {
  double v2 = 1.0;
  double poly_gamma = -7.0;
  double basis_mu = 2.0;
  double a = 2.0;
  double lambda = 1.0;
};

using SystemSpec = std::variant<Coulomb, Morse, SinBox, HyperbolicPulse, CDHSystem, WilsonSystem>;

/// V2 / sinh^2(lambda x) + V1 / cosh^2(lambda x) + V0.
struct PoschlTeller {
  double v2 = 0.0;
  double v1 = 0.0;
  double v0 = 0.0;
  double lambda = 1.0;

  double operator()(double x) const {
    const double s = std::sinh(lambda * x), c = std::cosh(lambda * x);
    return v2 / (s * s) + v1 / (c * c) + v0;
  }
};

/// Closed-form potential of a system, or the reference family it is compared with.
struct ReferencePotential {
  enum class Kind { None, Exact, PoschlTellerFamily };
  Kind kind = Kind::None;
  std::function<double(double)> exact;  // Kind::Exact
  double v2 = 0.0;                      // Kind::PoschlTellerFamily: V1, V0 free
  double lambda = 1.0;
  std::string description = "none";

  PoschlTeller with(double v1, double v0) const { return {v2, v1, v0, lambda}; }
};

/// Symmetric tridiagonal recursion written as dense diagonal/off-diagonal data.
struct EnergyRecursion {
  std::string variable;         // e.g. "epsilon = 2E/lambda^2"
  std::vector<double> diag;     // length N
  std::vector<double> offdiag;  // length N-1, may contain zeros
};

struct AssembledSystem {
  SystemSpec spec;
  Basis basis;
  int size = 0;
  Eigen::MatrixXd H, T_tilde, Omega, V_tilde;
  std::optional<Eigen::MatrixXd> T, V;  // absent when the full kinetic matrix diverges
  Counterterm counterterm;
  ReferencePotential reference;
  std::optional<EnergyRecursion> energy_recursion;
  std::optional<double> energy;  // set when the matrices are valid only at one energy
  std::vector<std::string> warnings;
};

namespace detail {

inline EnergyRecursion recursion_from(const Eigen::MatrixXd& m, double scale, std::string variable) {
  EnergyRecursion r;
  r.variable = std::move(variable);
  const auto n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) r.diag.push_back(m(i, i) / scale);
  for (Eigen::Index i = 0; i + 1 < n; ++i) r.offdiag.push_back(m(i, i + 1) / scale);
  return r;
}

inline Eigen::MatrixXd recursion_dense(const EnergyRecursion& r) {
  const int n = static_cast<int>(r.diag.size());
  return tridiag_dense(n, [&](int i) { return r.diag[i]; }, [&](int i) { return r.offdiag[i]; });
}

// Basis parameter nu from the 1/cos^2 or 1/sinh^2 wall strength.
inline double wall_nu(double v2, double lambda) {
  const double nu2 = 0.25 + 2.0 * v2 / (lambda * lambda);
  require(nu2 >= 0.0, "wall strength V2 below -lambda^2/8 makes nu complex");
  return std::sqrt(nu2);
}

inline void fill_potentials(AssembledSystem& s) {
  s.V_tilde = s.H - s.T_tilde;
  if (s.T) s.V = s.H - *s.T;
}

inline AssembledSystem assemble_one(const Coulomb& c, int n) {
  require(c.lambda > 0.0, "Coulomb: need lambda > 0");
  require(c.ell >= 0.0, "Coulomb: need l >= 0");
  AssembledSystem s{c, Basis(LaguerreRadial{c.ell, c.lambda})};
  const double lam = c.lambda, ell = c.ell;
  s.H = tridiag_dense(
      n, [&](int i) { return 0.25 * lam * lam * (i + ell + 1.0) - lam * c.charge; },
      [&](int i) { return 0.125 * lam * lam * std::sqrt((i + 1.0) * (i + 2.0 * ell + 2.0)); });
  s.Omega = s.basis.overlap(n);
  KineticMatrices k = s.basis.kinetic(n);
  s.T = k.full;
  s.T_tilde = k.reduced;
  s.counterterm = k.counterterm;
  const double z = c.charge;
  s.reference = {ReferencePotential::Kind::Exact, [z](double r) { return -z / r; }, 0.0, lam, "-Z/r"};
  fill_potentials(s);
  return s;
}

inline AssembledSystem assemble_one(const Morse& m, int n) {
  require(m.lambda > 0.0, "Morse: need lambda > 0");
  require(m.alpha > -1.0, "Morse: need alpha > -1");
  AssembledSystem s{m, Basis(MorseLaguerre{m.alpha, m.lambda})};
  const double lam = m.lambda, al = m.alpha, mu = m.poly_mu();
  const Eigen::MatrixXd sigma = tridiag_dense(
      n,
      [&](int i) {
        return (i + mu + al + 1.0) * (i + mu + al + 1.0) + (i + al + 0.5) * (i + al + 0.5) - mu * mu -
               (al + 0.5) * (al + 0.5);
      },
      [&](int i) { return -(i + mu + al + 1.0) * std::sqrt((i + 1.0) * (i + 2.0 * al + 2.0)); });
  s.H = 0.5 * lam * lam * sigma;
  s.Omega = s.basis.overlap(n);
  KineticMatrices k = s.basis.kinetic(n);
  s.T = k.full;
  s.T_tilde = k.reduced;
  s.counterterm = k.counterterm;
  s.energy_recursion = recursion_from(sigma, 1.0, "epsilon = 2E/lambda^2");
  // The realized potential: counterterm plus Vtilde = (lambda^2/4)(2 mu - 1) e^{lambda x}.
  const double c2 = lam * lam / 8.0, c1 = -2.0 * m.beta * m.v0;
  s.reference = {ReferencePotential::Kind::Exact,
                 [=](double x) { return c2 * std::exp(2.0 * lam * x) + c1 * std::exp(lam * x); }, 0.0, lam,
                 "(lambda^2/8) e^{2 lambda x} - 2 beta V0 e^{lambda x}"};
  fill_potentials(s);
  return s;
}

inline AssembledSystem assemble_one(const SinBox& b, int n) {
  require(b.lambda > 0.0, "SinBox: need lambda > 0");
  const double lam = b.lambda;
  require(b.v2 >= -lam * lam / 8.0, "SinBox: need V2 >= -lambda^2/8");
  const double nu = wall_nu(b.v2, lam);
  AssembledSystem s{b, Basis(JacobiSym{0.5 * (nu + 0.5), nu, lam, JacobiMap::Sin})};
  s.Omega = s.basis.overlap(n);
  KineticMatrices k = s.basis.kinetic(n);
  s.T = k.full;
  s.T_tilde = k.reduced;
  s.counterterm = k.counterterm;
  const Eigen::MatrixXd vt = tridiag_dense(
      n, [&](int) { return b.v0; },
      [&](int i) {
        return 0.5 * b.v1 * std::sqrt((i + 1.0) * (i + 2.0 * nu + 1.0) / ((i + nu + 1.0) * (i + nu + 1.0) - 0.25));
      });
  s.H = s.T_tilde + vt;
  s.energy_recursion = recursion_from(s.H, 0.5 * lam * lam, "epsilon = 2E/lambda^2");
  s.reference = {ReferencePotential::Kind::Exact,
                 [b](double x) {
                   const double c = std::cos(b.lambda * x);
                   return b.v0 + b.v1 * std::sin(b.lambda * x) + b.v2 / (c * c);
                 },
                 0.0, lam, "V0 + V1 sin(lambda x) + V2 / cos^2(lambda x)"};
  fill_potentials(s);
  if (!s.T) s.warnings.push_back("nu = 0: the full kinetic matrix diverges, only Vtilde is available");
  return s;
}

inline AssembledSystem assemble_one(const HyperbolicPulse& p, int n) {
  require(p.lambda > 0.0, "HyperbolicPulse: need lambda > 0");
  require(p.energy < 0.0, "HyperbolicPulse: the solution exists only for E < 0");
  require(std::abs(p.v0) < std::abs(p.v1), "HyperbolicPulse: need |V0/V1| < 1");
  const double lam = p.lambda;
  const double nu = std::sqrt(-2.0 * p.energy) / lam;
  AssembledSystem s{p, Basis(JacobiSym{0.5 * nu, nu, lam, JacobiMap::Tanh})};
  s.energy = p.energy;
  s.Omega = s.basis.overlap(n);
  KineticMatrices k = s.basis.kinetic(n);
  s.T = k.full;
  s.T_tilde = k.reduced;
  s.counterterm = k.counterterm;
  // <phi_n|V|phi_m> = <n|V0 + V1 z|m> in the Jacobi(nu, nu) polynomials.
  const RecurrenceCoeffs jz = OrthoFamily::jacobi(nu, nu).coeffs;
  const Eigen::MatrixXd v =
      tridiag_dense(n, [&](int i) { return p.v0 + p.v1 * jz.diag(i); }, [&](int i) { return p.v1 * jz.offdiag(i); });
  s.H = v + *s.T;
  s.V = v;
  s.V_tilde = s.H - s.T_tilde;
  // J = V + T - E Omega reduces to V + Ttilde; its recursion variable is -u0.
  EnergyRecursion r = recursion_from(v + s.T_tilde, 0.5 * lam * lam, "-u0 = -2 V0/lambda^2");
  const double u0 = 2.0 * p.v0 / (lam * lam);
  for (double& d : r.diag) d -= u0;
  s.energy_recursion = r;
  s.reference = {ReferencePotential::Kind::Exact,
                 [p](double x) {
                   const double c = std::cosh(p.lambda * x);
                   return (p.v0 + p.v1 * std::tanh(p.lambda * x)) / (c * c);
                 },
                 0.0, lam, "(V0 + V1 tanh(lambda x)) / cosh^2(lambda x)"};
  return s;
}

inline void half_line_common(AssembledSystem& s, const Eigen::MatrixXd& sigma, double lam, double v2,
                             double poly_gamma) {
  s.H = 0.5 * lam * lam * sigma;
  s.Omega = s.basis.overlap(static_cast<int>(sigma.rows()));
  KineticMatrices k = s.basis.kinetic(static_cast<int>(sigma.rows()));
  s.T = k.full;
  s.T_tilde = k.reduced;
  s.counterterm = k.counterterm;
  s.energy_recursion = recursion_from(sigma, 1.0, "epsilon = 2E/lambda^2");
  s.reference = {ReferencePotential::Kind::PoschlTellerFamily, {}, v2, lam,
                 "V2/sinh^2(lambda x) + V1/cosh^2(lambda x) + V0, V1 and V0 fitted"};
  if (!(poly_gamma > 0.0))
    s.warnings.push_back("polynomial parameter gamma = " + std::to_string(poly_gamma) +
                         " is not positive; the weight function is not positive definite");
  fill_potentials(s);
}

inline void check_half_line(double v2, double lambda, double basis_mu, const char* who) {
  require(lambda > 0.0, std::string(who) + ": need lambda > 0");
  require(v2 >= -lambda * lambda / 8.0, std::string(who) + ": need V2 >= -lambda^2/8");
  require(basis_mu > -1.0, std::string(who) + ": need basis mu > -1");
}

inline AssembledSystem assemble_one(const CDHSystem& c, int n) {
  check_half_line(c.v2, c.lambda, c.basis_mu, "CDHSystem");
  const double nu = wall_nu(c.v2, c.lambda), mu = c.basis_mu, g = c.poly_gamma;
  AssembledSystem s{c, Basis(JacobiHalf{mu, nu, c.lambda})};
  const Eigen::MatrixXd sigma = tridiag_dense(
      n,
      [&](int i) {
        return (i + g + mu + 1.0) * (i + g + mu + 1.0) + (i + mu + 0.5) * (i + mu + 0.5) - g * g -
               (mu + 0.5) * (mu + 0.5);
      },
      [&](int i) { return -(i + g + mu + 1.0) * std::sqrt((i + 1.0) * (i + 2.0 * mu + 2.0)); });
  half_line_common(s, sigma, c.lambda, c.v2, g);
  return s;
}

inline AssembledSystem assemble_one(const WilsonSystem& w, int n) {
  check_half_line(w.v2, w.lambda, w.basis_mu, "WilsonSystem");
  const double nu = wall_nu(w.v2, w.lambda), g = w.poly_gamma, a = w.a;
  AssembledSystem s{w, Basis(JacobiHalf{w.basis_mu, nu, w.lambda})};
  const Eigen::MatrixXd sigma = tridiag_dense(
      n,
      [&](int i) {
        const double t = i + g + a - 0.5;
        return 0.5 * (t * t - (g - 0.5) * (g - 0.5) - (a - 0.5) * (a - 0.5) + 0.25);
      },
      [&](int i) {
        const double t = i + g + a;
        if (t == 0.0) return 0.0;
        const double rad = (i + 1.0) * (i + 2.0 * g) * (i + 2.0 * a) * (i + 2.0 * g + 2.0 * a - 1.0) / (t * t - 0.25);
        if (!(rad >= 0.0))
          throw DomainError("WilsonSystem: recursion coefficient at n = " + std::to_string(i) +
                            " is not real for these parameters; reduce N");
        return -0.25 * t * std::sqrt(rad);
      });
  half_line_common(s, sigma, w.lambda, w.v2, g);
  return s;
}

}  // namespace detail

inline AssembledSystem assemble(const SystemSpec& spec, int n) {
  detail::require(n >= 2, "assemble: need N >= 2");
  AssembledSystem s = std::visit([n](const auto& sys) { return detail::assemble_one(sys, n); }, spec);
  s.size = n;
  return s;
}

inline ReferencePotential exact_potential(const SystemSpec& spec) { return assemble(spec, 2).reference; }

/// max |<phi_n|(lambda r)^{-1}|phi_m> - delta_nm| in the Laguerre radial basis.
inline double coulomb_identity_check(double ell, double lambda, int n) {
  detail::require(n >= 1, "identity check: need N >= 1");
  const Basis basis(LaguerreRadial{ell, lambda});
  const Eigen::MatrixXd m =
      matrix_elements_by_quadrature(basis, [lambda](double r) { return 1.0 / (lambda * r); }, n, n + 2);
  return (m - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

enum class KineticForm {
  Reduced,  // Vtilde + Ttilde: counterterm applied
  Full,     // Vtilde + T: counterterm removed from the potential
};

struct TridiagonalityReport {
  double energy = 0.0;
  double max_off_band = 0.0;
  std::vector<double> band_profile;  // max |J_{i,i+d}| for d = 0 .. N-1
};

inline Eigen::MatrixXd wave_operator(const AssembledSystem& s, double energy, KineticForm form = KineticForm::Reduced) {
  if (form == KineticForm::Full) {
    if (!s.T) throw DomainError("wave operator: the full kinetic matrix is not available");
    return s.V_tilde + *s.T - energy * s.Omega;
  }
  return s.V_tilde + s.T_tilde - energy * s.Omega;
}

inline TridiagonalityReport tridiagonality_report(const AssembledSystem& s, double energy,
                                                  KineticForm form = KineticForm::Reduced) {
  const Eigen::MatrixXd j = wave_operator(s, s.energy.value_or(energy), form);
  TridiagonalityReport r;
  r.energy = s.energy.value_or(energy);
  const auto n = j.rows();
  r.band_profile.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto d = static_cast<std::size_t>(std::abs(i - k));
      r.band_profile[d] = std::max(r.band_profile[d], std::abs(j(i, k)));
      if (d > 1) r.max_off_band = std::max(r.max_off_band, std::abs(j(i, k)));
    }
  return r;
}

/// Default sample energies {-1, 0.5, 2} lambda^2, or the fixed energy of the system.
inline std::vector<double> sample_energies(const AssembledSystem& s) {
  if (s.energy) return {*s.energy};
  const double l2 = s.basis.lambda() * s.basis.lambda();
  return {-l2, 0.5 * l2, 2.0 * l2};
}

}  // namespace potrec
