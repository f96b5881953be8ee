#pragma once
// Square-integrable bases of the form phi_n(x) = sqrt(gamma(z) rho(z)) p_n(z),
// z = z(x), with p_n orthonormal under the normalized weight rho. Inner
// products use the dimensionless measure lambda dx = dz / x'(z), where
// x'(z) = lambda^{-1} dz/dx. The conjugate set is phibar_n = (x'/gamma) phi_n.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "potrec/errors.hpp"
#include "potrec/quadrature.hpp"
#include "potrec/specfun.hpp"

namespace potrec {

/// (lambda r)^{l+1} e^{-lambda r/2} L_n^{2l+1}(lambda r), r > 0.
struct LaguerreRadial {
  double ell = 0.0;
  double lambda = 1.0;
};

/// e^{-(lambda x)^2/2} H_n(lambda x) on the real line.
struct HermiteLine {
  double lambda = 1.0;
};

/// z^{alpha+1} e^{-z/2} L_n^{2 alpha+1}(z), z = e^{lambda x}.
struct MorseLaguerre {
  double alpha = 0.0;
  double lambda = 1.0;
};

enum class JacobiMap { Sin, Tanh };

/// (1-z^2)^alpha P_n^{(nu,nu)}(z), z = sin(lambda x) or tanh(lambda x).
struct JacobiSym {
  double alpha = 0.75;
  double nu = 1.0;
  double lambda = 1.0;
  JacobiMap map = JacobiMap::Sin;
};

/// (1-z)^{(mu+1)/2} (1+z)^{(nu+1/2)/2} P_n^{(mu,nu)}(z), z = 2 tanh^2(lambda x) - 1, x > 0.
struct JacobiHalf {
  double mu = 0.0;
  double nu = 1.0;
  double lambda = 1.0;
};

using BasisSpec = std::variant<LaguerreRadial, HermiteLine, MorseLaguerre, JacobiSym, JacobiHalf>;

/// Potential piece forced by kinetic-matrix terms that are not tridiagonal.
struct Counterterm {
  enum class Kind {
    None,
    HarmonicOscillator,  // c x^2
    Exponential,         // c e^{2 lambda x}
    InverseCosSquared,   // c / cos^2(lambda x)
    EnergyOverlap,       // T - Ttilde = c Omega, cancels E Omega at E = c
    InverseSinhSquared,  // c / sinh^2(lambda x)
  };

  Kind kind = Kind::None;
  double coefficient = 0.0;
  double lambda = 1.0;
  std::string description = "none";

  bool is_potential() const { return kind != Kind::None && kind != Kind::EnergyOverlap; }

  double operator()(double x) const {
    switch (kind) {
      case Kind::HarmonicOscillator:
        return coefficient * x * x;
      case Kind::Exponential:
        return coefficient * std::exp(2.0 * lambda * x);
      case Kind::InverseCosSquared: {
        const double c = std::cos(lambda * x);
        return coefficient / (c * c);
      }
      case Kind::InverseSinhSquared: {
        const double s = std::sinh(lambda * x);
        return coefficient / (s * s);
      }
      case Kind::None:
      case Kind::EnergyOverlap:
        break;
    }
    return 0.0;
  }
};

struct KineticMatrices {
  std::optional<Eigen::MatrixXd> full;  // absent when the closed form does not exist
  Eigen::MatrixXd reduced;              // tridiagonal remainder Ttilde
  Counterterm counterterm;
};

enum class Endpoints { Closed, OpenLower, OpenUpper, Open };

struct Grid {
  double min = 0.0;
  double max = 1.0;
  int count = 400;
  Endpoints ends = Endpoints::Closed;

  std::vector<double> points() const {
    detail::require(count >= 1, "grid: count must be >= 1");
    detail::require(max > min || (count == 1 && max == min), "grid: need max > min");
    const bool lo = ends == Endpoints::Closed || ends == Endpoints::OpenUpper;
    const bool hi = ends == Endpoints::Closed || ends == Endpoints::OpenLower;
    const int gaps = count - 1 + (lo ? 0 : 1) + (hi ? 0 : 1);
    std::vector<double> x(static_cast<std::size_t>(count));
    if (gaps == 0) {
      x[0] = min;
      return x;
    }
    const double h = (max - min) / gaps;
    for (int i = 0; i < count; ++i) x[i] = min + (i + (lo ? 0 : 1)) * h;
    if (hi) x.back() = max;
    return x;
  }
};

namespace detail {

inline Eigen::MatrixXd tridiag_dense(int n, const std::function<double(int)>& diag,
                                     const std::function<double(int)>& upper) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = diag(k);
  for (int k = 0; k + 1 < n; ++k) m(k, k + 1) = m(k + 1, k) = upper(k);
  return m;
}

inline Eigen::MatrixXd recurrence_dense(const RecurrenceCoeffs& c, int n) {
  return tridiag_dense(n, c.diag, c.offdiag);
}

}  // namespace detail

/// M_nm = int rho_{a,b} (1-z)^da (1+z)^db p_n p_m dz for the orthonormal
/// Jacobi(a, b) polynomials, by the Gauss rule of the shifted weight (exact).
inline Eigen::MatrixXd jacobi_weighted_moments(double a, double b, double da, double db, int n) {
  detail::require(n >= 1, "jacobi_weighted_moments: need N >= 1");
  detail::require(a + da > -1.0 && b + db > -1.0, "jacobi_weighted_moments: shifted weight is not integrable");
  const OrthoFamily base = OrthoFamily::jacobi(a, b);
  const GaussRule rule = OrthoFamily::jacobi(a + da, b + db).rule(n);
  const double scale =
      std::exp(OrthoFamily::jacobi_log_norm(a + da, b + db) - OrthoFamily::jacobi_log_norm(a, b));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const std::vector<double> p = base.orthonormal(n, rule.nodes[k]);
    const Eigen::Map<const Eigen::VectorXd> pv(p.data(), n);
    m.noalias() += rule.weights[k] * pv * pv.transpose();
  }
  m *= scale;
  return 0.5 * (m + m.transpose());
}

class Basis {
 public:
  explicit Basis(BasisSpec spec) : spec_(spec) {
    std::visit([this](const auto& s) { init(s); }, spec_);
  }

  const BasisSpec& spec() const { return spec_; }
  double lambda() const { return lambda_; }
  const std::string& name() const { return name_; }
  const OrthoFamily& poly() const { return poly_; }

  /// Domain of x; endpoints may be infinite.
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool in_domain(double x) const { return std::isfinite(x) && x >= lower_ && x <= upper_; }

  double z_of_x(double x) const { return z_of_x_(x); }
  double x_of_z(double z) const { return x_of_z_(z); }
  double log_gamma(double z) const { return log_gamma_(z); }
  double gamma(double z) const { return std::exp(log_gamma_(z)); }
  /// x'(z) = lambda^{-1} dz/dx.
  double jacobian(double z) const { return jacobian_(z); }

  double phi(int n, double x) const { return phi_all(n + 1, x).back(); }

  /// phi_0(x) .. phi_{count-1}(x).
  std::vector<double> phi_all(int count, double x) const {
    const double z = checked_z(x);
    const double amp = std::isfinite(z) ? std::exp(0.5 * (log_gamma_(z) + poly_.log_weight(z))) : 0.0;
    if (amp == 0.0) return std::vector<double>(static_cast<std::size_t>(count), 0.0);
    std::vector<double> v = poly_.orthonormal(count, z);
    for (double& e : v) e *= amp;
    return v;
  }

  double phibar(int n, double x) const { return phibar_all(n + 1, x).back(); }

  std::vector<double> phibar_all(int count, double x) const {
    const double z = checked_z(x);
    const double lg = log_gamma_(z);
    if (std::isfinite(z) && !std::isfinite(lg)) throw DomainError("phibar: gamma vanishes at x");
    const double amp = std::isfinite(z) ? jacobian_(z) * std::exp(0.5 * (poly_.log_weight(z) - lg)) : 0.0;
    if (amp == 0.0) return std::vector<double>(static_cast<std::size_t>(count), 0.0);
    std::vector<double> v = poly_.orthonormal(count, z);
    for (double& e : v) e *= amp;
    return v;
  }

  /// Omega_nm = <phi_n|phi_m>.
  Eigen::MatrixXd overlap(int n) const {
    detail::require(n >= 1, "overlap: need N >= 1");
    return overlap_(n);
  }

  KineticMatrices kinetic(int n) const {
    detail::require(n >= 1, "kinetic: need N >= 1");
    return kinetic_(n);
  }

  /// Default reconstruction grid (400 points).
  Grid default_grid() const { return grid_; }

 private:
  double checked_z(double x) const {
    if (!in_domain(x)) throw DomainError(name_ + ": x = " + std::to_string(x) + " outside the basis domain");
    return z_of_x_(x);
  }

  void init(const LaguerreRadial& s) {
    detail::require(s.ell >= 0.0, "LaguerreRadial: need l >= 0");
    detail::require(s.lambda > 0.0, "LaguerreRadial: need lambda > 0");
    const double lam = s.lambda, ell = s.ell, nu = 2.0 * ell + 1.0;
    lambda_ = lam;
    name_ = "laguerre_radial";
    poly_ = OrthoFamily::laguerre(nu);
    lower_ = 0.0;
    z_of_x_ = [lam](double x) { return lam * x; };
    x_of_z_ = [lam](double z) { return z / lam; };
    log_gamma_ = [](double z) { return z > 0.0 ? std::log(z) : -std::numeric_limits<double>::infinity(); };
    jacobian_ = [](double) { return 1.0; };
    overlap_ = [nu](int n) { return detail::recurrence_dense(OrthoFamily::laguerre(nu).coeffs, n); };
    kinetic_ = [lam, ell](int n) {
      const double c = lam * lam / 4.0;
      KineticMatrices k;
      k.full = detail::tridiag_dense(
          n, [&](int i) { return c * (i + ell + 1.0); },
          [&](int i) { return c * 0.5 * std::sqrt((i + 1.0) * (i + 2.0 * ell + 2.0)); });
      k.reduced = *k.full;
      k.counterterm.lambda = lam;
      return k;
    };
    grid_ = {0.0, 10.0 / lam, 400, Endpoints::OpenLower};
  }

  void init(const HermiteLine& s) {
    detail::require(s.lambda > 0.0, "HermiteLine: need lambda > 0");
    const double lam = s.lambda;
    lambda_ = lam;
    name_ = "hermite_line";
    poly_ = OrthoFamily::hermite();
    z_of_x_ = [lam](double x) { return lam * x; };
    x_of_z_ = [lam](double z) { return z / lam; };
    log_gamma_ = [](double) { return 0.0; };
    jacobian_ = [](double) { return 1.0; };
    overlap_ = [](int n) { return Eigen::MatrixXd::Identity(n, n).eval(); };
    kinetic_ = [lam](int n) {
      const double c = lam * lam / 4.0;
      KineticMatrices k;
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) t(i, i) = c * (2.0 * i + 1.0);
      for (int i = 0; i + 2 < n; ++i) t(i, i + 2) = t(i + 2, i) = -c * std::sqrt((i + 1.0) * (i + 2.0));
      k.full = t;
      k.reduced = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) k.reduced(i, i) = lam * lam * (i + 0.5);
      k.counterterm = {Counterterm::Kind::HarmonicOscillator, 0.5 * std::pow(lam, 4), lam,
                       "harmonic term (lambda^4/2) x^2"};
      return k;
    };
    grid_ = {-6.0 / lam, 6.0 / lam, 400, Endpoints::Closed};
  }

  void init(const MorseLaguerre& s) {
    detail::require(s.alpha > -1.0, "MorseLaguerre: need alpha > -1");
    detail::require(s.lambda > 0.0, "MorseLaguerre: need lambda > 0");
    const double lam = s.lambda, al = s.alpha, nu = 2.0 * al + 1.0;
    lambda_ = lam;
    name_ = "morse_laguerre";
    poly_ = OrthoFamily::laguerre(nu);
    z_of_x_ = [lam](double x) { return std::exp(lam * x); };
    x_of_z_ = [lam](double z) { return std::log(z) / lam; };
    log_gamma_ = [](double z) { return z > 0.0 ? std::log(z) : -std::numeric_limits<double>::infinity(); };
    jacobian_ = [](double z) { return z; };
    overlap_ = [](int n) { return Eigen::MatrixXd::Identity(n, n).eval(); };
    kinetic_ = [lam, al, nu](int n) {
      const double c = -0.5 * lam * lam;
      KineticMatrices k;
      k.reduced = detail::tridiag_dense(
          n, [&](int i) { return c * (al * (al + 1.0) - 2.0 * (i + al + 1.0) * (i + al + 1.0)); },
          [&](int i) { return c * 0.5 * (2.0 * i + 2.0 * al + 3.0) * std::sqrt((i + 1.0) * (i + 2.0 * al + 2.0)); });
      // <z^2> is the leading block of the square of the (N+1)-term Jacobi matrix.
      const Eigen::MatrixXd j = detail::recurrence_dense(OrthoFamily::laguerre(nu).coeffs, n + 1);
      const Eigen::MatrixXd z2 = (j * j).topLeftCorner(n, n);
      k.full = k.reduced - (lam * lam / 8.0) * z2;
      k.counterterm = {Counterterm::Kind::Exponential, lam * lam / 8.0, lam,
                       "exponential term (lambda^2/8) exp(2 lambda x)"};
      return k;
    };
    grid_ = {-6.0 / lam, 6.0 / lam, 400, Endpoints::Closed};
  }

  void init(const JacobiSym& s) {
    detail::require(s.nu > -1.0, "JacobiSym: need nu > -1");
    detail::require(s.alpha > 0.0, "JacobiSym: need alpha > 0");
    detail::require(s.lambda > 0.0, "JacobiSym: need lambda > 0");
    const double lam = s.lambda, al = s.alpha, nu = s.nu;
    lambda_ = lam;
    poly_ = OrthoFamily::jacobi(nu, nu);
    const double expo = 2.0 * al - nu;  // gamma = (1-z^2)^expo
    log_gamma_ = [expo](double z) {
      if (expo == 0.0) return 0.0;
      if (std::abs(z) >= 1.0) return expo > 0.0 ? -std::numeric_limits<double>::infinity()
                                                : std::numeric_limits<double>::infinity();
      return expo * std::log1p(-z * z);
    };
    constexpr double kTol = 1e-12;
    if (s.map == JacobiMap::Sin) {
      name_ = "jacobi_sin";
      lower_ = -std::numbers::pi / (2.0 * lam);
      upper_ = -lower_;
      z_of_x_ = [lam](double x) { return std::sin(lam * x); };
      x_of_z_ = [lam](double z) { return std::asin(z) / lam; };
      jacobian_ = [](double z) { return std::sqrt(std::max(0.0, 1.0 - z * z)); };
      const bool orthogonal = std::abs(2.0 * al - nu - 0.5) <= kTol;
      overlap_ = [orthogonal, al, nu](int n) {
        if (orthogonal) return Eigen::MatrixXd::Identity(n, n).eval();
        const double d = 2.0 * al - nu - 0.5;
        return jacobi_weighted_moments(nu, nu, d, d, n);
      };
      kinetic_ = [orthogonal, lam, nu](int n) {
        if (!orthogonal) throw DomainError("JacobiSym(sin): closed-form kinetic matrix needs 2 alpha = nu + 1/2");
        const double c = 0.5 * lam * lam;
        KineticMatrices k;
        k.reduced = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) k.reduced(i, i) = c * (i + nu + 0.5) * (i + nu + 0.5);
        const double w = nu * nu - 0.25;
        if (w == 0.0) {
          k.full = k.reduced;
        } else if (nu > 0.0) {
          k.full = k.reduced - c * w * jacobi_weighted_moments(nu, nu, -1.0, -1.0, n);
        }
        k.counterterm = {Counterterm::Kind::InverseCosSquared, c * w, lam,
                         "wall term (lambda^2/2)(nu^2 - 1/4) / cos^2(lambda x)"};
        if (w == 0.0) k.counterterm = {Counterterm::Kind::None, 0.0, lam, "none"};
        return k;
      };
      grid_ = {lower_, upper_, 400, Endpoints::Open};
    } else {
      name_ = "jacobi_tanh";
      z_of_x_ = [lam](double x) { return std::tanh(lam * x); };
      x_of_z_ = [lam](double z) { return std::atanh(z) / lam; };
      jacobian_ = [](double z) { return 1.0 - z * z; };
      const bool balanced = std::abs(2.0 * al - nu) <= kTol;
      overlap_ = [al, nu](int n) {
        const double d = 2.0 * al - nu - 1.0;
        detail::require(nu + d > -1.0, "JacobiSym(tanh): overlap integral diverges (need 2 alpha > 0)");
        return jacobi_weighted_moments(nu, nu, d, d, n);
      };
      kinetic_ = [balanced, lam, nu](int n) {
        if (!balanced) throw DomainError("JacobiSym(tanh): closed-form kinetic matrix needs 2 alpha = nu");
        const double c = 0.5 * lam * lam;
        KineticMatrices k;
        k.reduced = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) k.reduced(i, i) = c * ((i + nu + 0.5) * (i + nu + 0.5) - 0.25);
        if (nu > 0.0) k.full = k.reduced - c * nu * nu * jacobi_weighted_moments(nu, nu, -1.0, -1.0, n);
        k.counterterm = {Counterterm::Kind::EnergyOverlap, -c * nu * nu, lam,
                         "energy counter component -(lambda^2 nu^2/2) Omega, cancels E Omega at nu^2 = -2E/lambda^2"};
        return k;
      };
      grid_ = {-6.0 / lam, 6.0 / lam, 400, Endpoints::Closed};
    }
  }

  void init(const JacobiHalf& s) {
    detail::require(s.mu > -1.0 && s.nu > -1.0, "JacobiHalf: need mu, nu > -1");
    detail::require(s.lambda > 0.0, "JacobiHalf: need lambda > 0");
    const double lam = s.lambda, mu = s.mu, nu = s.nu;
    lambda_ = lam;
    name_ = "jacobi_half";
    poly_ = OrthoFamily::jacobi(mu, nu);
    lower_ = 0.0;
    z_of_x_ = [lam](double x) {
      const double t = std::tanh(lam * x);
      return 2.0 * t * t - 1.0;
    };
    x_of_z_ = [lam](double z) { return std::atanh(std::sqrt(0.5 * (1.0 + z))) / lam; };
    // gamma = x' = sqrt(2) (1-z) sqrt(1+z)
    log_gamma_ = [](double z) {
      if (z <= -1.0 || z >= 1.0) return -std::numeric_limits<double>::infinity();
      return 0.5 * std::log(2.0) + std::log1p(-z) + 0.5 * std::log1p(z);
    };
    jacobian_ = [](double z) {
      if (z <= -1.0 || z >= 1.0) return 0.0;
      return std::sqrt(2.0) * (1.0 - z) * std::sqrt(1.0 + z);
    };
    overlap_ = [](int n) { return Eigen::MatrixXd::Identity(n, n).eval(); };
    kinetic_ = [lam, mu, nu](int n) {
      const RecurrenceCoeffs rc = OrthoFamily::jacobi(mu, nu).coeffs;
      const double s2 = 0.5 * (mu + nu);
      const auto q = [](double v) { return v * v - 1.0 / 16.0; };
      // Overall scale lambda^2, fixed against -1/2 d^2/dx^2 by direct quadrature.
      const double c = lam * lam;
      KineticMatrices k;
      k.reduced = detail::tridiag_dense(
          n,
          [&](int i) {
            const double first = i == 0 ? 0.0 : 2.0 * i * (i + nu) / (2.0 * i + mu + nu);
            return -c * (first + 0.5 * (mu + 1.0) * (mu + 1.0) + q(i + s2 + 1.0) * (rc.diag(i) - 1.0));
          },
          [&](int i) { return -c * q(i + s2 + 1.0) * rc.offdiag(i); });
      const double w = nu * nu - 0.25;
      if (w == 0.0) {
        k.full = k.reduced;
      } else if (nu > 0.0) {
        k.full = k.reduced - 0.5 * c * w * jacobi_weighted_moments(mu, nu, 1.0, -1.0, n);
      }
      k.counterterm = {Counterterm::Kind::InverseSinhSquared, 0.5 * c * w, lam,
                       "barrier term V2 / sinh^2(lambda x), V2 = (lambda^2/2)(nu^2 - 1/4)"};
      if (w == 0.0) k.counterterm = {Counterterm::Kind::None, 0.0, lam, "none"};
      return k;
    };
    grid_ = {0.0, 6.0 / lam, 400, Endpoints::OpenLower};
  }

  BasisSpec spec_;
  double lambda_ = 1.0;
  std::string name_;
  OrthoFamily poly_;
  double lower_ = -std::numeric_limits<double>::infinity();
  double upper_ = std::numeric_limits<double>::infinity();
  std::function<double(double)> z_of_x_, x_of_z_, log_gamma_, jacobian_;
  std::function<Eigen::MatrixXd(int)> overlap_;
  std::function<KineticMatrices(int)> kinetic_;
  Grid grid_;
};

}  // namespace potrec
