#pragma once
// Four ways back from a potential matrix V_nm = <phi_n|V|phi_m> to V(x).
//
// All bases here have phi_n = A p_n and phibar_n = B p_n with A = sqrt(gamma rho)
// and B = x' sqrt(rho/gamma). The methods are evaluated with the weight
// factored out, so ratios such as sum phibar phibar / sum phi phibar become
// (x'/gamma) p^T V p / p^T p and never underflow.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "potrec/bases.hpp"
#include "potrec/errors.hpp"
#include "potrec/rational_fit.hpp"

namespace potrec {

/// Relative threshold below which a method's divisor masks a grid point.
inline constexpr double kDenominatorMask = 1e-6;
/// Method-4 warning level for ||W - diag W||_max / ||W||_max.
inline constexpr double kOffDiagonalWarning = 0.1;

/// Values on a grid; masked points hold NaN.
struct Estimate {
  std::vector<double> values;
  std::vector<bool> mask;  // true where the value is valid

  std::size_t valid_count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)); }
};

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline void check_potential_matrix(const Eigen::MatrixXd& v) {
  require(v.rows() >= 1 && v.rows() == v.cols(), "potential matrix must be square and non-empty");
  require(v.allFinite(), "potential matrix has non-finite entries");
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  require((v - v.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "potential matrix is not symmetric");
}

// Polynomials and log-amplitudes at one grid point.
struct PointData {
  double z = 0.0;
  std::vector<double> p;
  double log_a = 0.0;  // ln sqrt(gamma rho)
  double log_b = 0.0;  // ln x' sqrt(rho/gamma)
  double ratio = 0.0;  // x'/gamma = B/A
};

inline std::optional<PointData> point_data(const Basis& basis, double x, int n) {
  if (!basis.in_domain(x)) return std::nullopt;
  PointData d;
  d.z = basis.z_of_x(x);
  if (!std::isfinite(d.z)) return std::nullopt;
  const double lg = basis.log_gamma(d.z), lr = basis.poly().log_weight(d.z), jac = basis.jacobian(d.z);
  if (!std::isfinite(lg) || !(jac > 0.0)) return std::nullopt;
  d.log_a = 0.5 * (lg + lr);
  d.log_b = std::log(jac) + 0.5 * (lr - lg);
  d.ratio = jac * std::exp(-lg);
  d.p = basis.poly().orthonormal(n, d.z);
  return d;
}

inline Estimate empty_estimate(std::size_t n) { return {std::vector<double>(n, kNaN), std::vector<bool>(n, false)}; }

inline void require_some(const Estimate& e, const char* who) {
  if (e.valid_count() == 0) throw ReconstructionFailed(std::string(who) + ": every grid point was masked");
}

}  // namespace detail

/// Ratio of the double sum to the completeness sum.
inline Estimate method1(const Basis& basis, const Eigen::MatrixXd& v, std::span<const double> grid) {
  detail::check_potential_matrix(v);
  const int n = static_cast<int>(v.rows());
  Estimate e = detail::empty_estimate(grid.size());
  // The divisor pp stays >= 1; the mask follows the unscaled denominator x' rho p^T p.
  std::vector<double> den(grid.size(), 0.0);
  std::vector<std::optional<double>> val(grid.size());
  double den_max = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto d = detail::point_data(basis, grid[i], n);
    if (!d) continue;
    const Eigen::Map<const Eigen::VectorXd> p(d->p.data(), n);
    const double pp = p.squaredNorm();
    den[i] = std::exp(d->log_a + d->log_b) * pp;
    den_max = std::max(den_max, den[i]);
    val[i] = d->ratio * p.dot(v * p) / pp;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (val[i] && den[i] >= kDenominatorMask * den_max && std::isfinite(*val[i])) {
      e.values[i] = *val[i];
      e.mask[i] = true;
    }
  }
  detail::require_some(e, "method 1");
  return e;
}

/// One column of V: V(x) = sum_m phibar_m(x) V_{m,c} / phi_c(x).
inline Estimate method2(const Basis& basis, const Eigen::MatrixXd& v, std::span<const double> grid, int column = 0) {
  detail::check_potential_matrix(v);
  const int n = static_cast<int>(v.rows());
  detail::require(column >= 0 && column < n, "method 2: column out of range");
  Estimate e = detail::empty_estimate(grid.size());
  std::vector<double> pc(grid.size(), 0.0);
  std::vector<std::optional<double>> val(grid.size());
  double pc_max = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto d = detail::point_data(basis, grid[i], n);
    if (!d) continue;
    const Eigen::Map<const Eigen::VectorXd> p(d->p.data(), n);
    pc[i] = std::abs(d->p[column]);
    pc_max = std::max(pc_max, pc[i]);
    val[i] = d->ratio * p.dot(v.col(column)) / d->p[column];
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (val[i] && pc[i] >= kDenominatorMask * pc_max && std::isfinite(*val[i])) {
      e.values[i] = *val[i];
      e.mask[i] = true;
    }
  }
  detail::require_some(e, "method 2");
  return e;
}

enum class Method3Variant {
  Sum,      // I_m = sum_k w_k p_m(tau_k) / sqrt(gamma rho)(tau_k), K nodes
  Matrix,   // I_m = (Lambda W Lambda^T)_{m0}, N nodes
  Literal,  // I_m = sum_k w^d_k phibar_m(tau_k), integration in z without 1/x'
};

/// Integrals lambda int phibar_m dx, m < N.
inline Eigen::VectorXd phibar_integrals(const Basis& basis, int n, Method3Variant variant, int k) {
  detail::require(n >= 1, "method 3: need N >= 1");
  if (variant == Method3Variant::Matrix) k = n;
  detail::require(k >= n, "method 3: need K >= N");
  const GaussRule rule = basis.poly().rule(k);
  if (variant == Method3Variant::Matrix) {
    Eigen::VectorXd w(n);
    for (int j = 0; j < n; ++j) {
      const double z = rule.nodes[j];
      w(j) = std::exp(-0.5 * (basis.log_gamma(z) + rule.log_weight(z)));
    }
    return (rule.eigvecs * w.asDiagonal() * rule.eigvecs.transpose()).col(0);
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < k; ++j) {
    const double z = rule.nodes[j];
    double f = rule.weights[j] * std::exp(-0.5 * (basis.log_gamma(z) + rule.log_weight(z)));
    if (variant == Method3Variant::Literal) f *= basis.jacobian(z);
    const std::vector<double> p = basis.poly().orthonormal(n, z);
    for (int m = 0; m < n; ++m) out(m) += f * p[m];
  }
  return out;
}

struct Method3Options {
  int quad_size = 0;  // K for Sum and Literal; 0 means 2N
  Method3Variant variant = Method3Variant::Matrix;
};

/// V(x) = sum_n U_n phibar_n(x), U = V I.
inline Estimate method3(const Basis& basis, const Eigen::MatrixXd& v, std::span<const double> grid,
                        Method3Options opt = {}) {
  detail::check_potential_matrix(v);
  const int n = static_cast<int>(v.rows());
  const int k = opt.quad_size > 0 ? opt.quad_size : 2 * n;
  const Eigen::VectorXd u = v * phibar_integrals(basis, n, opt.variant, k);
  Estimate e = detail::empty_estimate(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto d = detail::point_data(basis, grid[i], n);
    if (!d) continue;
    const Eigen::Map<const Eigen::VectorXd> p(d->p.data(), n);
    const double val = std::exp(d->log_b) * u.dot(p);
    if (!std::isfinite(val)) continue;
    e.values[i] = val;
    e.mask[i] = true;
  }
  detail::require_some(e, "method 3");
  return e;
}

struct Method4Result {
  std::vector<Sample> samples;  // (x(tau_k), W_kk x'(tau_k) / gamma(tau_k))
  double off_diagonal_residual = 0.0;
  std::optional<RationalFit> fit;
  Estimate estimate;
  std::vector<std::string> warnings;
};

/// W = Lambda^T V Lambda with the N-point rule; samples on the nodes, then a rational fit.
inline Method4Result method4(const Basis& basis, const Eigen::MatrixXd& v, std::span<const double> grid) {
  detail::check_potential_matrix(v);
  const int n = static_cast<int>(v.rows());
  const GaussRule rule = basis.poly().rule(n);
  const Eigen::MatrixXd w = rule.eigvecs.transpose() * v * rule.eigvecs;
  Method4Result r;
  const double wmax = w.cwiseAbs().maxCoeff();
  const Eigen::MatrixXd off = w - Eigen::MatrixXd(w.diagonal().asDiagonal());
  r.off_diagonal_residual = wmax > 0.0 ? off.cwiseAbs().maxCoeff() / wmax : 0.0;
  if (r.off_diagonal_residual > kOffDiagonalWarning)
    r.warnings.push_back("matrix not quadrature-consistent: off-diagonal residual of W is " +
                         std::to_string(r.off_diagonal_residual));
  for (int k = 0; k < n; ++k) {
    const double z = rule.nodes[k];
    const double g = basis.gamma(z);
    if (g == 0.0) throw DomainError("method 4: gamma vanishes at a quadrature node");
    r.samples.push_back({basis.x_of_z(z), w(k, k) * basis.jacobian(z) / g});
  }
  r.estimate = detail::empty_estimate(grid.size());
  if (n >= 2) {
    try {
      r.fit.emplace(r.samples);
    } catch (const DegenerateData& ex) {
      r.warnings.push_back(ex.what());
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::optional<double> val;
    if (r.fit) val = r.fit->try_eval(grid[i]);
    else if (n == 1) val = r.samples[0].y;
    if (val && std::isfinite(*val)) {
      r.estimate.values[i] = *val;
      r.estimate.mask[i] = true;
    }
  }
  return r;
}

/// Adds an analytic counterterm to every valid point.
inline Estimate with_counterterm(Estimate e, const Counterterm& c, std::span<const double> grid) {
  if (!c.is_potential()) return e;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!e.mask[i]) continue;
    e.values[i] += c(grid[i]);
    if (!std::isfinite(e.values[i])) {
      e.values[i] = detail::kNaN;
      e.mask[i] = false;
    }
  }
  return e;
}

struct DivergenceReport {
  std::vector<int> sizes;
  std::vector<double> max_abs;
  bool diverging = false;
};

/// Flags divergence when max|V| at fixed points grows by >= 2x at every size step.
template <typename Run>
DivergenceReport detect_divergence(Run&& run, std::span<const int> sizes) {
  detail::require(sizes.size() >= 2, "divergence check: need at least two sizes");
  DivergenceReport r;
  for (int n : sizes) {
    const Estimate e = run(n);
    double m = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i)
      if (e.mask[i]) m = std::max(m, std::abs(e.values[i]));
    r.sizes.push_back(n);
    r.max_abs.push_back(m);
  }
  r.diverging = true;
  for (std::size_t i = 1; i < r.max_abs.size(); ++i)
    if (!(r.max_abs[i] >= 2.0 * r.max_abs[i - 1])) r.diverging = false;
  return r;
}

struct PoschlTellerFit {
  double v1 = 0.0;
  double v0 = 0.0;
  double relative_residual = 0.0;  // ||Vtilde - fit||_2 / ||Vtilde||_2
  std::size_t points = 0;
};

/// Least squares Vtilde(x) ~ V1 / cosh^2(lambda x) + V0 over valid points in [lo, hi].
inline PoschlTellerFit fit_poschl_teller(std::span<const double> grid, const Estimate& vtilde, double lambda,
                                         double lo, double hi) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (vtilde.mask[i] && grid[i] >= lo && grid[i] <= hi) idx.push_back(i);
  detail::require(idx.size() >= 2, "Poschl-Teller fit: need at least two valid points");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(idx.size()), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double c = std::cosh(lambda * grid[idx[r]]);
    a(r, 0) = 1.0 / (c * c);
    a(r, 1) = 1.0;
    b(r) = vtilde.values[idx[r]];
  }
  const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(b);
  PoschlTellerFit f{sol(0), sol(1), 0.0, idx.size()};
  const double nb = b.norm();
  f.relative_residual = nb > 0.0 ? (a * sol - b).norm() / nb : (a * sol - b).norm();
  return f;
}

}  // namespace potrec
