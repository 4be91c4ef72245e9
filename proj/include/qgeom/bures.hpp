#pragma once

#include <span>

#include "qgeom/density_matrix.hpp"
#include "qgeom/matcore.hpp"

namespace qgeom {

/// Hermitian, traceless displacement d rho tangent to the state space.
class TangentDelta {
 public:
  static constexpr double kTol = 1e-10;

  explicit TangentDelta(ComplexMatrix drho);

  const ComplexMatrix& matrix() const noexcept { return drho_; }
  Eigen::Index dim() const noexcept { return drho_.rows(); }

 private:
  ComplexMatrix drho_;
};

namespace bures {

/// lambda_i + lambda_j at or below this is treated as outside the support.
inline constexpr double kSpectralEps = 1e-12;
/// Matrix elements above this on a zero-support pair make the form diverge.
inline constexpr double kSupportLeakTol = 1e-8;

/// Uhlmann fidelity [Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2, in [0, 1].
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// sqrt(2 - 2 sqrt(F)), in [0, sqrt 2].
double bures_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Polarized spectral form of the squared Bures line element:
///   g(d1, d2) = 1/2 sum_ij Re(<i|d1|j><j|d2|i>) / (lambda_i + lambda_j).
/// Pairs with lambda_i + lambda_j <= kSpectralEps are dropped when both
/// matrix elements vanish there and raise DegenerateSupport otherwise.
double hubner_form(const DensityMatrix& rho, const TangentDelta& d1,
                   const TangentDelta& d2);

/// All pairwise hubner_form values of a set of tangents, sharing one
/// change of basis. The result is exactly symmetric.
RealMatrix hubner_gram(const DensityMatrix& rho,
                       std::span<const TangentDelta> tangents);

/// Diagonalization-free squared line element for nonsingular 2x2 states:
///   1/4 Tr[d d + (1/|rho|) (d - rho d)(d - rho d)].
double dittmann2_form(const DensityMatrix& rho, const TangentDelta& d);

/// Diagonalization-free squared line element for nonsingular, non-pure 3x3
/// states:
///   1/4 Tr[d d + 3/(1 - Tr rho^3) ((d - rho d)^2 + |rho| (d - rho^-1 d)^2)].
double dittmann3_form(const DensityMatrix& rho, const TangentDelta& d);

/// Dispatches on dimension to dittmann2_form or dittmann3_form.
double dittmann_form(const DensityMatrix& rho, const TangentDelta& d);

}  // namespace bures
}  // namespace qgeom
