#pragma once

#include <cmath>

namespace qgeom {

// Below this argument the trigonometric quotients switch to Taylor series.
inline constexpr double kSeriesThreshold = 1e-4;

/// sin(x) / x, with sinc(0) = 1.
inline double sinc(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

/// (cos(x) - 1) / x^2, with value -1/2 at 0.
inline double cos_minus_one_over_sq(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return -0.5 + x2 / 24.0 - x2 * x2 / 720.0;
  }
  // -2 sin^2(x/2) avoids the cancellation in cos(x) - 1
  const double s = std::sin(0.5 * x);
  return -2.0 * s * s / (x * x);
}

}  // namespace qgeom
