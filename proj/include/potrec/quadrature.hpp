#pragma once
// Gauss quadrature built from symmetric three-term recurrence coefficients.
//
// The orthonormal polynomials satisfy
//   x p_n(x) = a_n p_n(x) + b_{n-1} p_{n-1}(x) + b_n p_{n+1}(x),  p_0 = 1,
// so the N x N Jacobi matrix has a_n on the diagonal and b_n beside it. Its
// eigenvalues are the nodes; the first row of the eigenvector matrix squares
// to the weights of the normalized weight function rho.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "potrec/errors.hpp"
#include "potrec/specfun.hpp"
#include "potrec/tridiag.hpp"

namespace potrec {

/// Recurrence coefficients indexed by degree.
struct RecurrenceCoeffs {
  std::function<double(int)> diag;     // a_n
  std::function<double(int)> offdiag;  // b_n, must be nonzero

  SymTridiag jacobi_matrix(int n) const {
    detail::require(n >= 1, "jacobi_matrix: need N >= 1");
    SymTridiag j;
    j.diag.resize(static_cast<std::size_t>(n));
    j.offdiag.resize(static_cast<std::size_t>(n - 1));
    for (int k = 0; k < n; ++k) j.diag[k] = diag(k);
    for (int k = 0; k + 1 < n; ++k) {
      const double b = offdiag(k);
      if (b == 0.0 || !std::isfinite(b)) throw DomainError("recurrence: off-diagonal coefficient b_n is zero or non-finite");
      j.offdiag[k] = b;
    }
    return j;
  }

  /// p_0(x) .. p_{count-1}(x) by the symmetric recurrence.
  std::vector<double> values(int count, double x) const {
    std::vector<double> p(static_cast<std::size_t>(std::max(count, 0)));
    if (count <= 0) return p;
    p[0] = 1.0;
    double prev_b = 0.0;
    for (int n = 0; n + 1 < count; ++n) {
      const double b = offdiag(n);
      if (b == 0.0) throw DomainError("recurrence: off-diagonal coefficient b_n is zero");
      const double lower = n > 0 ? prev_b * p[n - 1] : 0.0;
      p[n + 1] = ((x - diag(n)) * p[n] - lower) / b;
      prev_b = b;
    }
    return p;
  }
};

/// ln rho(x) of a normalized weight.
using LogWeightFn = std::function<double(double)>;

struct GaussRule {
  std::vector<double> nodes;          // ascending
  std::vector<double> weights;        // Lambda_{0k}^2
  std::vector<double> deriv_weights;  // weights / rho(node)
  Eigen::MatrixXd eigvecs;            // Lambda, columns are normalized eigenvectors
  LogWeightFn log_weight;

  std::size_t size() const { return nodes.size(); }
  double weight_fn(double x) const { return std::exp(log_weight(x)); }
};

inline GaussRule build_rule(const RecurrenceCoeffs& coeffs, int n, LogWeightFn log_weight) {
  detail::require(n >= 1, "build_rule: need N >= 1");
  const SymTridiag j = coeffs.jacobi_matrix(n);
  EigenDecomp eig = eigen_decompose(j);
  GaussRule rule;
  rule.nodes = std::move(eig.values);
  rule.eigvecs = std::move(eig.vectors);
  rule.log_weight = std::move(log_weight);
  rule.weights.resize(rule.nodes.size());
  rule.deriv_weights.resize(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double v0 = rule.eigvecs(0, static_cast<Eigen::Index>(k));
    rule.weights[k] = v0 * v0;
    // Log space: rho underflows at extreme nodes long before the ratio does.
    rule.deriv_weights[k] = std::exp(2.0 * std::log(std::abs(v0)) - rule.log_weight(rule.nodes[k]));
  }
  return rule;
}

/// Weights from the eigenvalues of J and of J with its first row/column removed:
///   w_n = prod_m (t_n - s_m) / prod_{k != n} (t_n - t_k).
/// The extreme factors are differences of nearly equal eigenvalues, so tiny
/// weights are only as accurate as the arithmetic the nodes were computed in.
template <typename Real>
std::vector<Real> weights_via_product(std::span<const Real> nodes, std::span<const Real> subnodes) {
  const std::size_t n = nodes.size();
  detail::require(n >= 1, "weights_via_product: no nodes");
  detail::require(subnodes.size() + 1 == n, "weights_via_product: need N-1 subnodes");
  std::vector<Real> w(n, Real(1));
  for (std::size_t i = 0; i < n; ++i) {
    // Pair numerator and denominator factors to keep the running product near 1.
    Real prod = 1;
    std::size_t m = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const Real den = nodes[i] - nodes[k];
      if (den == 0) throw DomainError("weights_via_product: coincident nodes");
      prod *= (nodes[i] - subnodes[m++]) / den;
    }
    w[i] = prod;
  }
  return w;
}

inline std::vector<double> weights_via_product(std::span<const double> nodes, std::span<const double> subnodes) {
  return weights_via_product<double>(nodes, subnodes);
}

/// Product-formula weights of a Jacobi matrix. Both spectra are computed in
/// 100-digit arithmetic before the differences are taken.
inline std::vector<double> product_weights(const SymTridiag& j) {
  using Wide = boost::multiprecision::cpp_bin_float_100;
  if (j.size() == 1) return {1.0};
  const std::vector<Wide> t = eigenvalues<Wide>(j);
  const std::vector<Wide> s = eigenvalues<Wide>(submatrix_drop_first(j));
  const std::vector<Wide> w = weights_via_product<Wide>(t, s);
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = static_cast<double>(w[k]);
  return out;
}

/// Sum_k w_k f(t_k).
template <typename F>
double integrate(const GaussRule& rule, F&& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) s += rule.weights[k] * f(rule.nodes[k]);
  return s;
}

/// A classical orthonormal family: recurrence, normalized weight and support.
struct OrthoFamily {
  RecurrenceCoeffs coeffs;
  LogWeightFn log_weight;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  GaussRule rule(int n) const { return build_rule(coeffs, n, log_weight); }
  std::vector<double> orthonormal(int count, double x) const { return coeffs.values(count, x); }
  double weight(double x) const { return std::exp(log_weight(x)); }

  /// rho(x) = exp(-x^2) / sqrt(pi) on the real line.
  static OrthoFamily hermite() {
    OrthoFamily f;
    f.coeffs.diag = [](int) { return 0.0; };
    f.coeffs.offdiag = [](int n) { return std::sqrt(0.5 * (n + 1.0)); };
    f.log_weight = [](double x) { return -x * x - 0.5 * std::log(std::numbers::pi); };
    return f;
  }

  /// rho(x) = x^nu e^{-x} / Gamma(nu + 1) on (0, inf); p_n carries the sign of L_n^nu.
  static OrthoFamily laguerre(double nu) {
    detail::require(nu > -1.0, "Laguerre weight needs nu > -1");
    OrthoFamily f;
    f.coeffs.diag = [nu](int n) { return 2.0 * n + nu + 1.0; };
    f.coeffs.offdiag = [nu](int n) { return -std::sqrt((n + 1.0) * (n + nu + 1.0)); };
    const double lg = ln_gamma(nu + 1.0);
    f.log_weight = [nu, lg](double x) {
      if (x <= 0.0) return -std::numeric_limits<double>::infinity();
      return nu * std::log(x) - x - lg;
    };
    f.lower = 0.0;
    return f;
  }

  /// rho(x) = (1-x)^a (1+x)^b / (2^{a+b+1} B(a+1, b+1)) on (-1, 1).
  static OrthoFamily jacobi(double a, double b) {
    detail::require(a > -1.0 && b > -1.0, "Jacobi weight needs a, b > -1");
    OrthoFamily f;
    f.coeffs.diag = [a, b](int n) {
      if (n == 0) return (b - a) / (a + b + 2.0);
      const double s = 2.0 * n + a + b;
      return (b * b - a * a) / (s * (s + 2.0));
    };
    f.coeffs.offdiag = [a, b](int n) {
      if (n == 0) return 2.0 / (a + b + 2.0) * std::sqrt((a + 1.0) * (b + 1.0) / (a + b + 3.0));
      const double s = 2.0 * n + a + b;
      return 2.0 / (s + 2.0) *
             std::sqrt((n + 1.0) * (n + a + 1.0) * (n + b + 1.0) * (n + a + b + 1.0) / ((s + 1.0) * (s + 3.0)));
    };
    const double log_norm = jacobi_log_norm(a, b);
    f.log_weight = [a, b, log_norm](double x) {
      if (x <= -1.0 || x >= 1.0) return -std::numeric_limits<double>::infinity();
      return a * std::log1p(-x) + b * std::log1p(x) - log_norm;
    };
    f.lower = -1.0;
    f.upper = 1.0;
    return f;
  }

  /// ln of the integral of (1-x)^a (1+x)^b over (-1, 1).
  static double jacobi_log_norm(double a, double b) {
    return (a + b + 1.0) * std::log(2.0) + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0);
  }
};

}  // namespace potrec
