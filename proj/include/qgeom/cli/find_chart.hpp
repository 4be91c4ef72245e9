#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qgeom/density_matrix.hpp"

namespace qgeom::cli {

struct ChartFit {
  int n = 0;
  std::vector<double> coords;       // chart order
  std::vector<double> eigenvalues;  // in the diagonal order of the chart
  double residual = 0.0;            // ||rho(chart) - rho||_F
  int restarts = 0;                 // random restarts used by the fit
};

struct FitOptions {
  double min_gap = 1e-6;
  double target = 1e-8;    // stop searching below this residual
  double accept = 1e-6;    // FitFailure above this
  int max_restarts = 32;
  std::uint64_t seed = 0x5eed;
};

/// Inverts rho = Omega D Omega^dagger for the two- or three-level chart.
///
/// The spectrum fixes the theta coordinates (eigenvalues ordered into the
/// chart's diagonal domain); the coset coordinates are read off the
/// eigenvectors modulo torus phases and then polished by Levenberg-Marquardt
/// on ||Omega D Omega^dagger - rho||_F, with seeded random restarts if
/// needed. Throws DegenerateSpectrum, OutOfChartRange when no ordering of
/// the spectrum lies in the chart, or FitFailure.
ChartFit find_chart(const DensityMatrix& rho, const FitOptions& options = {});

}  // namespace qgeom::cli
