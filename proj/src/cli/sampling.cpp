#include "qgeom/cli/sampling.hpp"

#include <cmath>
#include <numbers>

#include "qgeom/coset.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/metric.hpp"

namespace qgeom::cli {

using std::numbers::pi;

std::vector<std::pair<double, double>> sampling_ranges(int n) {
  const double two_pi = 2.0 * pi;
  if (n == 2) {
    return {{0.0, coset::theta_max()}, {0.0, pi / 2.0}, {0.0, two_pi}};
  }
  if (n == 3) {
    const double beta_max = pi / std::sqrt(2.0);
    return {{0.0, coset::theta1_max()},
            {coset::theta2_min(), coset::theta2_max()},
            {0.0, pi / 2.0},
            {0.0, two_pi},
            {0.0, beta_max},
            {0.0, beta_max},
            {0.0, two_pi},
            {0.0, two_pi}};
  }
  throw Error(ErrorKind::DimensionMismatch, "n must be 2 or 3");
}

std::vector<double> sample_interior(int n, SplitMix64& rng) {
  const auto ranges = sampling_ranges(n);
  const auto& chart = metric::chart_descriptor(n);
  std::vector<double> x(ranges.size());
  for (;;) {
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      const auto [lo, hi] = ranges[i];
      const double trim = kSampleShrink * (hi - lo);
      x[i] = rng.uniform(lo + trim, hi - trim);
    }
    if (chart.build(x).min_eigen_gap() >= kSampleMinGap) return x;
  }
}

}  // namespace qgeom::cli
