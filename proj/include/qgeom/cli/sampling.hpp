#pragma once

#include <utility>
#include <vector>

#include "qgeom/cli/prng.hpp"

namespace qgeom::cli {

/// Fraction of each coordinate range trimmed from both ends when sampling.
inline constexpr double kSampleShrink = 0.05;
/// Samples whose eigenvalue gap falls below this are redrawn.
inline constexpr double kSampleMinGap = 1e-4;

/// Sampling ranges per coordinate, in chart order. Range-restricted
/// coordinates use their chart range; periodic ones one period
/// (alpha in [0, pi/2], phases in [0, 2 pi]); beta1, beta2 in
/// [0, pi/sqrt 2] so that beta < pi.
std::vector<std::pair<double, double>> sampling_ranges(int n);

/// Uniform draw from the shrunk ranges, rejecting near-degenerate spectra.
std::vector<double> sample_interior(int n, SplitMix64& rng);

}  // namespace qgeom::cli
