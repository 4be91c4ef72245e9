#include "qgeom/density_matrix.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qgeom/errors.hpp"

namespace qgeom {

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
  matcore::require_square(mat_, "density matrix");
  const double herm = matcore::hermitian_deviation(mat_);
  if (!(herm <= kTol)) {
    throw Error(ErrorKind::InvalidState,
                "not Hermitian (max |rho - rho^dagger| = " +
                    std::to_string(herm) + ")");
  }
  mat_ = matcore::hermitize(mat_);
  const double tr = mat_.trace().real();
  if (!(std::abs(tr - 1.0) <= kTol)) {
    throw Error(ErrorKind::InvalidState,
                "trace is " + std::to_string(tr) + ", expected 1");
  }
  spectral_ = matcore::eig_hermitian(mat_);
  const double lowest = spectral_.eigenvalues.minCoeff();
  if (lowest < -kTol) {
    throw Error(ErrorKind::InvalidState,
                "negative eigenvalue " + std::to_string(lowest));
  }
}

double DensityMatrix::min_eigen_gap() const {
  const auto& ev = spectral_.eigenvalues;
  double gap = std::numeric_limits<double>::infinity();
  // ascending, so adjacent differences suffice
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    gap = std::min(gap, ev(i) - ev(i - 1));
  }
  return gap;
}

}  // namespace qgeom
