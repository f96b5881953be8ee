#pragma once
// Special functions: log-gamma (real and complex), Pochhammer symbols and
// the classical Laguerre/Hermite/Jacobi polynomials by forward recurrence.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "potrec/errors.hpp"

namespace potrec {

using Complex = std::complex<double>;

namespace detail {

// B_{2k} / (2k (2k-1)) for k = 1..8.
inline constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,      1.0 / 1260.0,   -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0,    -3617.0 / 122400.0};

// Stirling series is used once Re(z) >= this; smaller arguments are shifted up.
inline constexpr double kStirlingShift = 15.0;

template <typename T>
T stirling_tail(T z) {
  const T inv = T(1) / z;
  const T inv2 = inv * inv;
  T sum = 0;
  T pw = inv;
  for (double c : kStirling) {
    sum += c * pw;
    pw *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + sum;
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

}  // namespace detail

/// ln Gamma(x) for x > 0.
inline double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("ln_gamma: argument must be positive and finite");
  // Shift into the Stirling region; the product stays far from overflow for x < 15.
  double prod = 1.0;
  while (x < detail::kStirlingShift) {
    prod *= x;
    x += 1.0;
  }
  return detail::stirling_tail(x) - std::log(prod);
}

/// Principal-branch ln Gamma(z). The imaginary part is arg Gamma(z), continuous
/// off the negative real axis (same convention as scipy.special.loggamma).
inline Complex complex_ln_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("complex_ln_gamma: non-finite argument");
  if (z.imag() == 0.0 && detail::is_nonpositive_integer(z.real()))
    throw DomainError("complex_ln_gamma: pole at non-positive integer");
  if (z.imag() == 0.0 && z.real() > 0.0) return {ln_gamma(z.real()), 0.0};
  Complex shift = 0.0;
  while (z.real() < detail::kStirlingShift) {
    shift += std::log(z);
    z += 1.0;
  }
  return detail::stirling_tail(z) - shift;
}

/// arg Gamma(z), on the continuous branch of complex_ln_gamma.
inline double arg_gamma(Complex z) { return complex_ln_gamma(z).imag(); }

/// ln |Gamma(z)|.
inline double ln_abs_gamma(Complex z) { return complex_ln_gamma(z).real(); }

/// ln |(z)_n| together with the sign of the rising factorial.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;

  double value() const { return sign * std::exp(log_abs); }
};

inline SignedLog pochhammer_ln(double z, int n) {
  if (n < 0) throw DomainError("pochhammer_ln: negative count");
  SignedLog out;
  for (int k = 0; k < n; ++k) {
    const double f = z + k;
    if (f == 0.0) throw DomainError("pochhammer_ln: zero factor in (z)_n");
    out.log_abs += std::log(std::abs(f));
    if (f < 0.0) out.sign = -out.sign;
  }
  return out;
}

/// Classical polynomial family with its textbook (non-normalized) convention.
struct PolyFamily {
  enum class Kind { Laguerre, Hermite, Jacobi };

  Kind kind = Kind::Hermite;
  double alpha = 0.0;  // Laguerre nu, or Jacobi first parameter
  double beta = 0.0;   // Jacobi second parameter

  static PolyFamily laguerre(double nu) { return {Kind::Laguerre, nu, 0.0}; }
  static PolyFamily hermite() { return {Kind::Hermite, 0.0, 0.0}; }
  static PolyFamily jacobi(double a, double b) { return {Kind::Jacobi, a, b}; }

  void validate() const {
    switch (kind) {
      case Kind::Laguerre:
        detail::require(alpha > -1.0, "Laguerre parameter must exceed -1");
        break;
      case Kind::Jacobi:
        detail::require(alpha > -1.0 && beta > -1.0, "Jacobi parameters must exceed -1");
        break;
      case Kind::Hermite:
        break;
    }
  }
};

/// Values of degrees 0..count-1 at x by forward three-term recurrence.
inline std::vector<double> eval_poly_sequence(const PolyFamily& fam, int count, double x) {
  fam.validate();
  if (count < 0) throw DomainError("eval_poly_sequence: negative count");
  std::vector<double> p(static_cast<std::size_t>(count));
  if (count == 0) return p;
  p[0] = 1.0;
  if (count == 1) return p;
  switch (fam.kind) {
    case PolyFamily::Kind::Laguerre: {
      const double nu = fam.alpha;
      p[1] = nu + 1.0 - x;
      for (int n = 1; n + 1 < count; ++n)
        p[n + 1] = ((2.0 * n + 1.0 + nu - x) * p[n] - (n + nu) * p[n - 1]) / (n + 1.0);
      break;
    }
    case PolyFamily::Kind::Hermite: {
      p[1] = 2.0 * x;
      for (int n = 1; n + 1 < count; ++n) p[n + 1] = 2.0 * x * p[n] - 2.0 * n * p[n - 1];
      break;
    }
    case PolyFamily::Kind::Jacobi: {
      const double a = fam.alpha, b = fam.beta;
      p[1] = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
      for (int n = 1; n + 1 < count; ++n) {
        const double s = 2.0 * n + a + b;
        const double c1 = 2.0 * (n + 1.0) * (n + a + b + 1.0) * s;
        const double c2 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
        const double c3 = 2.0 * (n + a) * (n + b) * (s + 2.0);
        p[n + 1] = (c2 * p[n] - c3 * p[n - 1]) / c1;
      }
      break;
    }
  }
  return p;
}

inline double eval_poly(const PolyFamily& fam, int n, double x) {
  if (n < 0) throw DomainError("eval_poly: negative degree");
  return eval_poly_sequence(fam, n + 1, x).back();
}

}  // namespace potrec
