#pragma once
// Symmetric tridiagonal matrices and their full eigendecomposition by the
// implicit-shift QL algorithm (tql2 lineage), with rotation accumulation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <type_traits>
#include <vector>

#include "potrec/errors.hpp"

namespace potrec {

struct SymTridiag {
  std::vector<double> diag;     // length N
  std::vector<double> offdiag;  // length N-1

  std::size_t size() const { return diag.size(); }

  void validate() const {
    detail::require(!diag.empty(), "SymTridiag: empty matrix");
    detail::require(offdiag.size() + 1 == diag.size(), "SymTridiag: off-diagonal length must be N-1");
    for (double d : diag) detail::require(std::isfinite(d), "SymTridiag: non-finite diagonal");
    for (double e : offdiag) detail::require(std::isfinite(e), "SymTridiag: non-finite off-diagonal");
  }

  Eigen::MatrixXd dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[i];
    for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = offdiag[i];
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double d : diag) m = std::max(m, std::abs(d));
    for (double e : offdiag) m = std::max(m, std::abs(e));
    return m;
  }
};

/// Ascending eigenvalues; columns of `vectors` are the matching unit eigenvectors.
struct EigenDecomp {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
};

namespace detail {

inline constexpr int kQlSweepCap = 50;

// Implicit QL on (d, e) with e[i] coupling i and i+1 and e[n-1] = 0.
// When z is non-null the rotations are accumulated into its columns.
// Real may be an extended-precision type when z is null.
template <typename Real, typename Mat = Eigen::MatrixXd>
void tql2(std::vector<Real>& d, std::vector<Real>& e, Mat* z) {
  using std::abs;
  using std::sqrt;
  const auto hyp = [](const Real& a, const Real& b) {
    const Real aa = abs(a), bb = abs(b);
    const Real big = aa > bb ? aa : bb;
    if (big == 0) return Real(0);
    const Real ra = aa / big, rb = bb / big;
    return Real(big * sqrt(ra * ra + rb * rb));
  };
  const int n = static_cast<int>(d.size());
  const Real eps = std::numeric_limits<Real>::epsilon();
  Real f = 0;
  Real tst1 = 0;
  for (int l = 0; l < n; ++l) {
    const Real t = abs(d[l]) + abs(e[l]);
    if (t > tst1) tst1 = t;
    int m = l;
    while (m < n - 1 && abs(e[m]) > eps * tst1) ++m;
    if (m > l) {
      int sweeps = 0;
      do {
        if (++sweeps > kQlSweepCap) throw NumericError("eigen_decompose: QL iteration did not converge");
        Real g = d[l];
        Real p = (d[l + 1] - g) / (2 * e[l]);
        Real r = hyp(p, Real(1));
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const Real dl1 = d[l + 1];
        Real h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        Real c = 1, c2 = 1, c3 = 1;
        const Real el1 = e[l + 1];
        Real s = 0, s2 = 0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = hyp(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (z != nullptr) {
            if constexpr (std::is_same_v<Real, typename Mat::Scalar>) {
              for (int k = 0; k < n; ++k) {
                const Real zh = (*z)(k, i + 1);
                (*z)(k, i + 1) = s * (*z)(k, i) + c * zh;
                (*z)(k, i) = c * (*z)(k, i) - s * zh;
              }
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0;
  }
}

}  // namespace detail

inline EigenDecomp eigen_decompose(const SymTridiag& m) {
  m.validate();
  const auto n = static_cast<Eigen::Index>(m.size());
  std::vector<double> d = m.diag;
  std::vector<double> e(m.size(), 0.0);
  std::copy(m.offdiag.begin(), m.offdiag.end(), e.begin());
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  detail::tql2<double>(d, e, &z);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return d[a] < d[b]; });

  EigenDecomp out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    Eigen::VectorXd v = z.col(order[k]);
    // Sign convention: first entry that is not numerically zero is non-negative.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.vectors.col(k) = v;
  }
  return out;
}

/// Eigenvalues only, ascending, computed in the arithmetic of Real.
template <typename Real = double>
std::vector<Real> eigenvalues(const SymTridiag& m) {
  m.validate();
  std::vector<Real> d(m.diag.begin(), m.diag.end());
  std::vector<Real> e(m.size(), Real(0));
  std::copy(m.offdiag.begin(), m.offdiag.end(), e.begin());
  detail::tql2<Real>(d, e, static_cast<Eigen::MatrixXd*>(nullptr));
  std::sort(d.begin(), d.end());
  return d;
}

/// The matrix with its first row and column removed.
inline SymTridiag submatrix_drop_first(const SymTridiag& m) {
  m.validate();
  detail::require(m.size() >= 2, "submatrix_drop_first: need N >= 2");
  SymTridiag out;
  out.diag.assign(m.diag.begin() + 1, m.diag.end());
  out.offdiag.assign(m.offdiag.begin() + 1, m.offdiag.end());
  return out;
}

}  // namespace potrec
