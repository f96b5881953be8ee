#pragma once
// Radial test potentials.

#include <cmath>

namespace potrec {

/// 5 r^2 e^{-r}.
inline double smooth_bump(double r) { return 5.0 * r * r * std::exp(-r); }

/// Piecewise-linear trace of smooth_bump, zero beyond r = 7.
inline double piecewise_bump(double r) {
  if (r < 0.0) return 0.0;
  if (r < 1.2) return 2.0 * r;
  if (r < 3.0) return 2.4;
  if (r < 7.0) return 4.2 - 0.6 * r;
  return 0.0;
}

}  // namespace potrec
