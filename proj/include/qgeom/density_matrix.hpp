#pragma once

#include "qgeom/matcore.hpp"

namespace qgeom {

// Hermitian, unit-trace, positive semidefinite matrix. Validated on
// construction; the spectral decomposition is computed once and kept.
class DensityMatrix {
 public:
  static constexpr double kTol = 1e-10;

  explicit DensityMatrix(ComplexMatrix mat);

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const SpectralDecomposition& spectral() const noexcept { return spectral_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

  double min_eigenvalue() const { return spectral_.eigenvalues.minCoeff(); }
  double max_eigenvalue() const { return spectral_.eigenvalues.maxCoeff(); }

  // Smallest |lambda_i - lambda_j| over i != j (infinity for dim 1).
  double min_eigen_gap() const;

 private:
  ComplexMatrix mat_;
  SpectralDecomposition spectral_;
};

}  // namespace qgeom
