#pragma once
// Point-method continued-fraction interpolation
//   C(x) = y_1 / (1 + a_1 (x - x_1) / (1 + a_2 (x - x_2) / (1 + ...)))
// interpolating every sample.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "potrec/errors.hpp"

namespace potrec {

struct Sample {
  double x = 0.0;
  double y = 0.0;
};

class RationalFit {
 public:
  /// Running denominators below this magnitude reject an evaluation.
  static constexpr double kPoleGuard = 1e-12;

  explicit RationalFit(std::span<const Sample> points) {
    detail::require(points.size() >= 2, "fit_rational: need at least 2 points");
    double ymax = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      detail::require(std::isfinite(points[i].x) && std::isfinite(points[i].y), "fit_rational: non-finite sample");
      for (std::size_t j = 0; j < i; ++j)
        if (points[j].x == points[i].x) throw DomainError("fit_rational: coincident abscissae");
      ymax = std::max(ymax, std::abs(points[i].y));
    }
    // A zero ordinate cannot seed the ratios y_1 / y_j; fit y + shift instead.
    double ymin = std::numeric_limits<double>::infinity();
    for (const Sample& s : points) ymin = std::min(ymin, std::abs(s.y));
    if (ymin <= 1e-8 * ymax) shift_ = ymax > 0.0 ? 2.0 * ymax : 1.0;
    xs_.reserve(points.size());
    ys_.reserve(points.size());
    for (const Sample& s : points) {
      xs_.push_back(s.x);
      ys_.push_back(s.y + shift_);
    }
    build(ymax);
  }

  /// Value at x, or nothing when the continued fraction hits a pole.
  std::optional<double> try_eval(double x) const {
    double t = 1.0;
    for (std::size_t i = a_.size(); i-- > 0;) {
      if (std::abs(t) < kPoleGuard) return std::nullopt;
      t = 1.0 + a_[i] * (x - xs_[i]) / t;
    }
    if (std::abs(t) < kPoleGuard) return std::nullopt;
    return ys_[0] / t - shift_;
  }

  double operator()(double x) const {
    const auto v = try_eval(x);
    if (!v) throw NumericError("rational fit: evaluation at a pole");
    return *v;
  }

  std::span<const double> coefficients() const { return a_; }
  std::size_t terms() const { return a_.size(); }
  double shift() const { return shift_; }

 private:
  void build(double ymax) {
    const std::size_t n = xs_.size();
    for (std::size_t j = 1; j < n; ++j) {
      // Stop early when the current fraction already interpolates the rest.
      if (interpolates_from(j, ymax)) return;
      double g = ys_[0] / ys_[j] - 1.0;
      for (std::size_t i = 0; i + 1 < j; ++i) {
        if (g == 0.0 || !std::isfinite(g))
          throw DegenerateData("fit_rational: zero pivot while building the continued fraction");
        g = a_[i] * (xs_[j] - xs_[i]) / g - 1.0;
      }
      const double a = g / (xs_[j] - xs_[j - 1]);
      if (!std::isfinite(a)) throw DegenerateData("fit_rational: non-finite continued-fraction coefficient");
      a_.push_back(a);
    }
  }

  bool interpolates_from(std::size_t j, double ymax) const {
    const double tol = 1e-12 * std::max(ymax, std::abs(shift_));
    for (std::size_t k = j; k < xs_.size(); ++k) {
      const auto v = try_eval(xs_[k]);
      if (!v || std::abs(*v + shift_ - ys_[k]) > tol) return false;
    }
    return true;
  }

  std::vector<double> xs_, ys_, a_;
  double shift_ = 0.0;
};

inline RationalFit fit_rational(std::span<const Sample> points) { return RationalFit(points); }

}  // namespace potrec
