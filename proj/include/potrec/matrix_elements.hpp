#pragma once
// <phi_n|f|phi_m> by the Gauss rule of the basis polynomials:
//   sum_k w_k [gamma f(x(tau_k)) / x'(tau_k)] p_n(tau_k) p_m(tau_k).

#include <Eigen/Dense>

#include <cmath>
#include <functional>

#include "potrec/bases.hpp"
#include "potrec/errors.hpp"

namespace potrec {

using RealFn = std::function<double(double)>;

/// K-point quadrature of an N x N matrix of f(x); exact when gamma f / x' is a
/// polynomial in z of degree <= 2K - 2N + 1.
inline Eigen::MatrixXd matrix_elements_by_quadrature(const Basis& basis, const RealFn& f, int n, int k) {
  detail::require(n >= 1, "matrix elements: need N >= 1");
  detail::require(k >= n, "matrix elements: need K >= N");
  const GaussRule rule = basis.poly().rule(k);
  Eigen::MatrixXd p(n, k);
  Eigen::VectorXd w(k);
  for (int j = 0; j < k; ++j) {
    const double z = rule.nodes[j];
    const double jac = basis.jacobian(z);
    if (jac == 0.0) throw DomainError("matrix elements: x'(z) vanishes at a quadrature node");
    w(j) = rule.weights[j] * basis.gamma(z) * f(basis.x_of_z(z)) / jac;
    const std::vector<double> pj = basis.poly().orthonormal(n, z);
    for (int i = 0; i < n; ++i) p(i, j) = pj[i];
  }
  const Eigen::MatrixXd m = p * w.asDiagonal() * p.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace potrec
