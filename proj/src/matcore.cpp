#include "qgeom/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qgeom/errors.hpp"

namespace qgeom::matcore {

namespace {

std::string shape(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + ": " + shape(a) + " vs " + shape(b));
  }
}

}  // namespace

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1 || a.rows() > kMaxDim) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be square with dim in [1, 8], got " +
                    shape(a));
  }
}

ComplexMatrix hermitize(const ComplexMatrix& a) {
  require_square(a);
  return (a + a.adjoint()) * 0.5;
}

double hermitian_deviation(const ComplexMatrix& a) {
  require_square(a);
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

SpectralDecomposition eig_hermitian(const ComplexMatrix& a) {
  require_square(a);
  const double dev = hermitian_deviation(a);
  if (!(dev <= kHermitianTol)) {
    throw Error(ErrorKind::NotHermitian,
                "max |A - A^dagger| = " + std::to_string(dev));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      hermitize(a), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure,
                "Hermitian eigensolver did not converge");
  }
  // Eigen returns eigenvalues in ascending order already.
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix reconstruct(const SpectralDecomposition& spectral) {
  const auto& v = spectral.eigenvectors;
  return v * spectral.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
}

ComplexMatrix mat_func_hermitian(const ComplexMatrix& a,
                                 const std::function<double(double)>& f) {
  const SpectralDecomposition spectral = eig_hermitian(a);
  RealVector mapped = spectral.eigenvalues.unaryExpr(f);
  return reconstruct({std::move(mapped), spectral.eigenvectors});
}

ComplexMatrix mat_sqrt_psd(const ComplexMatrix& a) {
  const SpectralDecomposition spectral = eig_hermitian(a);
  const double lowest = spectral.eigenvalues.minCoeff();
  if (lowest < -kPsdClamp) {
    throw Error(ErrorKind::NotPSD,
                "eigenvalue " + std::to_string(lowest) + " below -1e-12");
  }
  RealVector roots = spectral.eigenvalues.unaryExpr(
      [](double x) { return std::sqrt(std::max(x, 0.0)); });
  return reconstruct({std::move(roots), spectral.eigenvectors});
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "mul: " + shape(a) + " * " + shape(b));
  }
  return a * b;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "add");
  return a + b;
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "sub");
  return a - b;
}

ComplexMatrix scale(const ComplexMatrix& a, Complex s) { return a * s; }

Complex trace(const ComplexMatrix& a) {
  require_square(a);
  return a.trace();
}

Complex det(const ComplexMatrix& a) {
  require_square(a);
  switch (a.rows()) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      return a.partialPivLu().determinant();
  }
}

double frobenius(const ComplexMatrix& a) { return a.norm(); }

}  // namespace qgeom::matcore
