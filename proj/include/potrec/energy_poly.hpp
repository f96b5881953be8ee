#pragma once
// Orthonormal energy polynomials given by symmetric three-term recursions
//   x P_n = a_n P_n + b_{n-1} P_{n-1} + b_n P_{n+1},  P_0 = 1.
// The recursion variable x is y for Meixner-Pollaczek, y^2 for continuous
// dual Hahn and Wilson, alpha for the dipole polynomial, epsilon for the
// sinusoidal-box form and -u0 for the hyperbolic-pulse form. Weights and
// asymptotics take y > 0 (or real y for Meixner-Pollaczek).

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "potrec/errors.hpp"
#include "potrec/quadrature.hpp"
#include "potrec/specfun.hpp"

namespace potrec {

struct MeixnerPollaczek {
  double mu = 1.0;
  double theta = std::numbers::pi / 2;
};

struct ContinuousDualHahn {
  double mu = 1.0;
  double a = 1.0;
  double b = 1.0;
};

struct Wilson {
  double mu = 1.0;
  double nu = 1.0;
  double a = 1.0;
  double b = 1.0;
};

/// General four-parameter dipole recursion, solved for alpha.
struct Dipole {
  double mu = 0.0;
  double nu = 0.0;
  double y = 1.0;
  double theta = std::numbers::pi / 2;
};

/// Sinusoidal-box form, variable epsilon = 2E/lambda^2, u_i = 2V_i/lambda^2.
struct DipoleSinBox {
  double nu = 0.5;
  double u0 = 0.0;
  double u1 = 1.0;
};

/// Hyperbolic-pulse form, variable -u0; the energy sits in nu.
struct DipolePulse {
  double nu = 0.5;
  double u1 = 1.0;
};

using EnergyPolyFamily =
    std::variant<MeixnerPollaczek, ContinuousDualHahn, Wilson, Dipole, DipoleSinBox, DipolePulse>;

struct RecursionTerms {
  double diag = 0.0;
  double offdiag = 0.0;
};

namespace detail {

inline double checked_sqrt(double v, const char* who) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(who) + ": negative or non-finite radicand");
  return std::sqrt(v);
}

// Jacobi(mu, nu) recursion pieces C_n, D_n in the form used by the dipole family.
inline double jacobi_c(double mu, double nu, int n) { return OrthoFamily::jacobi(mu, nu).coeffs.diag(n); }
inline double jacobi_d(double mu, double nu, int n) { return OrthoFamily::jacobi(mu, nu).coeffs.offdiag(n); }

inline double gegenbauer_ratio(double nu, int n) {
  const double den = (n + nu + 1.0) * (n + nu + 1.0) - 0.25;
  return checked_sqrt((n + 1.0) * (n + 2.0 * nu + 1.0) / den, "dipole recursion");
}

inline RecursionTerms terms(const MeixnerPollaczek& f, int n) {
  const double s = std::sin(f.theta);
  return {-(n + f.mu) * std::cos(f.theta) / s, 0.5 * std::sqrt((n + 1.0) * (n + 2.0 * f.mu)) / s};
}

inline RecursionTerms terms(const ContinuousDualHahn& f, int n) {
  const double mu = f.mu, a = f.a, b = f.b;
  return {(n + mu + a) * (n + mu + b) + n * (n + a + b - 1.0) - mu * mu,
          -checked_sqrt((n + 1.0) * (n + a + b) * (n + mu + a) * (n + mu + b), "continuous dual Hahn recursion")};
}

inline RecursionTerms terms(const Wilson& f, int n) {
  const double mu = f.mu, nu = f.nu, a = f.a, b = f.b;
  const double s = mu + nu + a + b;
  const double d1 = (2.0 * n + s) * (2.0 * n + s - 1.0);
  if (d1 == 0.0) throw DomainError("Wilson recursion: vanishing denominator");
  double diag = (n + mu + nu) * (n + mu + a) * (n + mu + b) * (n + s - 1.0) / d1 - mu * mu;
  if (n > 0) {
    const double d2 = (2.0 * n + s - 1.0) * (2.0 * n + s - 2.0);
    if (d2 == 0.0) throw DomainError("Wilson recursion: vanishing denominator");
    diag += n * (n + nu + a - 1.0) * (n + nu + b - 1.0) * (n + a + b - 1.0) / d2;
  }
  const double rad = (n + 1.0) * (n + mu + nu) * (n + a + b) * (n + mu + a) * (n + mu + b) * (n + nu + a) *
                     (n + nu + b) * (n + s - 1.0) / ((2.0 * n + s - 1.0) * (2.0 * n + s + 1.0));
  return {diag, -checked_sqrt(rad, "Wilson recursion") / (2.0 * n + s)};
}

inline RecursionTerms terms(const Dipole& f, int n) {
  const double ys = f.y * std::sin(f.theta);
  const double s = 0.5 * (f.mu + f.nu + 1.0);
  return {(std::cos(f.theta) - jacobi_c(f.mu, f.nu, n)) / ys - (n + s) * (n + s), -jacobi_d(f.mu, f.nu, n) / ys};
}

inline RecursionTerms terms(const DipoleSinBox& f, int n) {
  return {(n + f.nu + 0.5) * (n + f.nu + 0.5) + f.u0, 0.5 * f.u1 * gegenbauer_ratio(f.nu, n)};
}

inline RecursionTerms terms(const DipolePulse& f, int n) {
  return {(n + f.nu + 0.5) * (n + f.nu + 0.5) - 0.25, 0.5 * f.u1 * gegenbauer_ratio(f.nu, n)};
}

inline void check(const MeixnerPollaczek& f) {
  require(f.mu > 0.0, "Meixner-Pollaczek: need mu > 0");
  require(f.theta > 0.0 && f.theta < std::numbers::pi, "Meixner-Pollaczek: need 0 < theta < pi");
}
inline void check(const ContinuousDualHahn& f) {
  require(std::isfinite(f.mu) && std::isfinite(f.a) && std::isfinite(f.b), "continuous dual Hahn: non-finite parameter");
}
inline void check(const Wilson& f) {
  require(std::isfinite(f.mu) && std::isfinite(f.nu) && std::isfinite(f.a) && std::isfinite(f.b),
          "Wilson: non-finite parameter");
}
inline void check(const Dipole& f) {
  require(f.theta >= 0.0 && f.theta <= std::numbers::pi, "dipole: need 0 <= theta <= pi");
  require(f.mu > -1.0 && f.nu > -1.0, "dipole: need mu, nu > -1");
  require(f.y * std::sin(f.theta) != 0.0, "dipole: recursion in alpha needs y sin(theta) != 0");
}
inline void check(const DipoleSinBox& f) {
  require(f.nu > -0.5, "dipole (sin box): need nu > -1/2");
  require(f.u1 != 0.0, "dipole (sin box): need u1 != 0");
}
inline void check(const DipolePulse& f) {
  require(f.nu > -0.5, "dipole (pulse): need nu > -1/2");
  require(f.u1 != 0.0, "dipole (pulse): need u1 != 0");
}

}  // namespace detail

/// Diagonal and off-diagonal recursion terms at degree n.
inline RecursionTerms recursion_coeffs(const EnergyPolyFamily& fam, int n) {
  detail::require(n >= 0, "recursion_coeffs: negative degree");
  return std::visit(
      [n](const auto& f) {
        detail::check(f);
        return detail::terms(f, n);
      },
      fam);
}

inline RecurrenceCoeffs as_recurrence(const EnergyPolyFamily& fam) {
  RecurrenceCoeffs rc;
  rc.diag = [fam](int n) { return recursion_coeffs(fam, n).diag; };
  rc.offdiag = [fam](int n) { return recursion_coeffs(fam, n).offdiag; };
  return rc;
}

/// Positivity conditions of the weight that the parameters violate (empty if none).
inline std::vector<std::string> positivity_warnings(const EnergyPolyFamily& fam) {
  std::vector<std::string> out;
  const auto need = [&out](double v, const char* name) {
    if (!(v > 0.0)) out.push_back(std::string("parameter ") + name + " = " + std::to_string(v) + " is not positive");
  };
  if (const auto* c = std::get_if<ContinuousDualHahn>(&fam)) {
    need(c->mu, "mu");
    need(c->a, "a");
    need(c->b, "b");
  } else if (const auto* w = std::get_if<Wilson>(&fam)) {
    need(w->mu, "mu");
    need(w->nu, "nu");
    need(w->a, "a");
    need(w->b, "b");
  }
  return out;
}

/// P_0(x) .. P_{count-1}(x) by forward recursion, no rescaling.
inline std::vector<double> eval_sequence(const EnergyPolyFamily& fam, double x, int count) {
  detail::require(count >= 1, "eval_sequence: need N >= 1");
  std::vector<double> p(static_cast<std::size_t>(count));
  p[0] = 1.0;
  double prev_b = 0.0;
  for (int n = 0; n + 1 < count; ++n) {
    const RecursionTerms t = recursion_coeffs(fam, n);
    if (t.offdiag == 0.0) throw DomainError("eval_sequence: zero off-diagonal coefficient at n = " + std::to_string(n));
    const double lower = n > 0 ? prev_b * p[n - 1] : 0.0;
    p[n + 1] = ((x - t.diag) * p[n] - lower) / t.offdiag;
    prev_b = t.offdiag;
  }
  return p;
}

namespace detail {

inline double abs_gamma_ratio_log(std::initializer_list<Complex> num, std::initializer_list<Complex> den) {
  double s = 0.0;
  for (Complex z : num) s += ln_abs_gamma(z);
  for (Complex z : den) s -= ln_abs_gamma(z);
  return s;
}

inline double arg_sum(std::initializer_list<Complex> plus, std::initializer_list<Complex> minus) {
  double s = 0.0;
  for (Complex z : plus) s += arg_gamma(z);
  for (Complex z : minus) s -= arg_gamma(z);
  return s;
}

}  // namespace detail

/// Normalized weight rho(y).
inline double weight_fn(const EnergyPolyFamily& fam, double y) {
  using detail::require;
  const double two_pi = 2.0 * std::numbers::pi;
  if (const auto* f = std::get_if<MeixnerPollaczek>(&fam)) {
    detail::check(*f);
    const double lg = 2.0 * f->mu * std::log(2.0 * std::sin(f->theta)) + (2.0 * f->theta - std::numbers::pi) * y +
                      2.0 * ln_abs_gamma({f->mu, y}) - ln_gamma(2.0 * f->mu) - std::log(two_pi);
    return std::exp(lg);
  }
  if (const auto* f = std::get_if<ContinuousDualHahn>(&fam)) {
    require(y > 0.0, "continuous dual Hahn weight: need y > 0");
    require(f->mu > 0.0 && f->a > 0.0 && f->b > 0.0, "continuous dual Hahn weight: need positive parameters");
    const double lg = 2.0 * detail::abs_gamma_ratio_log({{f->mu, y}, {f->a, y}, {f->b, y}}, {{0.0, 2.0 * y}}) -
                      ln_gamma(f->mu + f->a) - ln_gamma(f->mu + f->b) - ln_gamma(f->a + f->b) - std::log(two_pi);
    return std::exp(lg);
  }
  if (const auto* f = std::get_if<Wilson>(&fam)) {
    require(y > 0.0, "Wilson weight: need y > 0");
    require(f->mu > 0.0 && f->nu > 0.0 && f->a > 0.0 && f->b > 0.0, "Wilson weight: need positive parameters");
    const double mu = f->mu, nu = f->nu, a = f->a, b = f->b;
    const double lg =
        2.0 * detail::abs_gamma_ratio_log({{mu, y}, {nu, y}, {a, y}, {b, y}}, {{0.0, 2.0 * y}}) +
        ln_gamma(mu + nu + a + b) - ln_gamma(mu + nu) - ln_gamma(a + b) - ln_gamma(mu + a) - ln_gamma(mu + b) -
        ln_gamma(nu + a) - ln_gamma(nu + b) - std::log(two_pi);
    return std::exp(lg);
  }
  throw DomainError("weight_fn: the dipole weight is not known in closed form");
}

/// Large-n closed form (amplitude times cosine) to compare with eval_sequence.
inline double asymptotic_reference(const EnergyPolyFamily& fam, double y, int n) {
  using detail::require;
  require(n >= 1, "asymptotic_reference: need n >= 1");
  const double sn = std::sqrt(static_cast<double>(n));
  if (const auto* f = std::get_if<MeixnerPollaczek>(&fam)) {
    detail::check(*f);
    const double mu = f->mu, th = f->theta, s = std::sin(th);
    const Complex g{mu, y};
    const double amp =
        2.0 / sn * std::exp(0.5 * ln_gamma(2.0 * mu) + (std::numbers::pi / 2 - th) * y - mu * std::log(2.0 * s) - ln_abs_gamma(g));
    return amp * std::cos(n * th + mu * th + arg_gamma(g) - mu * std::numbers::pi / 2 - y * std::log(2.0 * n * s));
  }
  if (const auto* f = std::get_if<ContinuousDualHahn>(&fam)) {
    require(y > 0.0, "continuous dual Hahn asymptotics: need y > 0");
    require(f->mu > 0.0 && f->a > 0.0 && f->b > 0.0, "continuous dual Hahn asymptotics: need positive parameters");
    const Complex gm{f->mu, y}, ga{f->a, y}, gb{f->b, y}, g2{0.0, 2.0 * y};
    const double lamp = 0.5 * (ln_gamma(f->mu + f->a) + ln_gamma(f->mu + f->b) + ln_gamma(f->a + f->b)) +
                        detail::abs_gamma_ratio_log({g2}, {gm, ga, gb});
    // Phase enters with the same sign as in the Morse phase shift.
    return 2.0 / sn * std::exp(lamp) * std::cos(y * std::log(n) - detail::arg_sum({gm, ga, gb}, {g2}));
  }
  if (const auto* f = std::get_if<Wilson>(&fam)) {
    require(y > 0.0, "Wilson asymptotics: need y > 0");
    const double mu = f->mu, nu = f->nu, a = f->a, b = f->b;
    require(mu > 0.0 && nu > 0.0 && a > 0.0 && b > 0.0, "Wilson asymptotics: need positive parameters");
    const Complex g2{0.0, 2.0 * y}, gm{mu, y}, gn{nu, y}, ga{a, y}, gb{b, y};
    const double lb = 0.5 * (ln_gamma(mu + nu) + ln_gamma(a + b) + ln_gamma(mu + a) + ln_gamma(mu + b) +
                             ln_gamma(nu + a) + ln_gamma(nu + b) - ln_gamma(mu + nu + a + b));
    const double labs = detail::abs_gamma_ratio_log({g2}, {gm, gn, ga, gb});
    const double arg = detail::arg_sum({g2}, {gm, gn, ga, gb});
    return 2.0 * std::sqrt(2.0 / n) * std::exp(lb + labs) * std::cos(2.0 * y * std::log(n) + arg);
  }
  throw DomainError("asymptotic_reference: no closed-form asymptotics for the dipole polynomial");
}

struct PhaseShift {
  double value = 0.0;
  bool near_threshold = false;  // a Gamma argument is within 1e-6 of its pole at k = 0
  std::string note;
};

/// delta = arg Gamma(l + 1 + i Z/k), k = sqrt(2E).
inline PhaseShift coulomb_phase_shift(double charge, double ell, double energy) {
  detail::require(energy > 0.0, "phase shift: need E > 0");
  detail::require(ell >= 0.0, "phase shift: need l >= 0");
  const double k = std::sqrt(2.0 * energy);
  return {arg_gamma({ell + 1.0, charge / k}), false, ""};
}

/// delta = arg G(2ik/l) - 2 arg G(alpha + 1 + ik/l) - arg G(mu + ik/l), mu = 1/2 - 4 beta V0 / l^2.
inline PhaseShift morse_phase_shift(double alpha, double beta, double v0, double lambda, double energy) {
  detail::require(energy > 0.0, "phase shift: need E > 0");
  detail::require(lambda > 0.0, "phase shift: need lambda > 0");
  const double q = std::sqrt(2.0 * energy) / lambda;
  const double mu = 0.5 - 4.0 * beta * v0 / (lambda * lambda);
  PhaseShift out;
  out.value = arg_gamma({0.0, 2.0 * q}) - 2.0 * arg_gamma({alpha + 1.0, q}) - arg_gamma({mu, q});
  if (2.0 * q < 1e-6) {
    out.near_threshold = true;
    out.note = "k -> 0: Gamma(2ik/lambda) approaches its pole at the origin";
  }
  return out;
}

}  // namespace potrec
