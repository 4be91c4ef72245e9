#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace qgeom {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues in ascending order, eigenvectors as orthonormal columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

namespace matcore {

/// Largest supported dimension.
inline constexpr Eigen::Index kMaxDim = 8;

/// Hermiticity tolerance on max |A - A^dagger| entry.
inline constexpr double kHermitianTol = 1e-10;

/// Eigenvalues in [-kPsdClamp, 0) are treated as zero by PSD functions.
inline constexpr double kPsdClamp = 1e-12;

// Throws DimensionMismatch unless A is square with 1 <= dim <= kMaxDim.
void require_square(const ComplexMatrix& a, const char* what = "matrix");

ComplexMatrix hermitize(const ComplexMatrix& a);

/// Largest |A_ij - conj(A_ji)|.
double hermitian_deviation(const ComplexMatrix& a);

SpectralDecomposition eig_hermitian(const ComplexMatrix& a);

ComplexMatrix mat_sqrt_psd(const ComplexMatrix& a);

/// V f(lambda) V^dagger. f is applied to every eigenvalue as is.
ComplexMatrix mat_func_hermitian(const ComplexMatrix& a,
                                 const std::function<double(double)>& f);

ComplexMatrix reconstruct(const SpectralDecomposition& spectral);

// Plumbing with explicit dimension checks (Eigen only asserts in debug).
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex s);
Complex trace(const ComplexMatrix& a);
Complex det(const ComplexMatrix& a);

double frobenius(const ComplexMatrix& a);

}  // namespace matcore
}  // namespace qgeom
