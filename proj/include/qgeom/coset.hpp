#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qgeom/density_matrix.hpp"
#include "qgeom/matcore.hpp"

namespace qgeom {

/// Two-level chart. theta in [0, pi/4]; alpha and phi are periodic.
struct CosetChart2 {
  double theta = 0.0;
  double alpha = 0.0;
  double phi = 0.0;

  static constexpr std::size_t kArity = 3;
  static const std::array<std::string, kArity>& names();

  std::array<double, kArity> coords() const { return {theta, alpha, phi}; }
  static CosetChart2 from_coords(std::span<const double> x);
};

/// Three-level chart.
///
/// theta1 in [0, arccos(1/sqrt 3)], theta2 in [pi/6, pi/4] fix the spectrum.
/// (alpha, phi) parameterize the U(2) coset block and (beta1, beta2, psi1,
/// psi2) the U(3)/U(2)xU(1) block. The chart is restricted to
/// beta = sqrt(beta1^2 + beta2^2) < pi, where the block map is nonsingular.
struct CosetChart3 {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double alpha = 0.0;
  double phi = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double psi1 = 0.0;
  double psi2 = 0.0;

  static constexpr std::size_t kArity = 8;
  static const std::array<std::string, kArity>& names();

  double beta() const { return std::hypot(beta1, beta2); }
  std::array<double, kArity> coords() const {
    return {theta1, theta2, alpha, phi, beta1, beta2, psi1, psi2};
  }
  static CosetChart3 from_coords(std::span<const double> x);
};

/// Leading k x k block of an n x n coset representative, fixed by the
/// complex (k-1)-vector b.
struct CosetBlockSpec {
  Eigen::Index n = 2;
  Eigen::Index k = 2;
  ComplexVector b;
};

namespace coset {

// Closed coordinate ranges are checked with this absolute slack so that
// decimal renderings of the endpoints (e.g. 0.7853981634 for pi/4) pass.
inline constexpr double kRangeSlack = 1e-9;

double theta1_max();  // arccos(1/sqrt 3)
double theta2_min();  // pi/6
double theta2_max();  // pi/4
double theta_max();   // pi/4, two-level chart

// Throw OutOfChartRange naming the offending coordinate.
void validate(const CosetChart2& chart);
void validate(const CosetChart3& chart);

ComplexMatrix omega2(double alpha, double phi);
inline ComplexMatrix omega2(const CosetChart2& chart) {
  return omega2(chart.alpha, chart.phi);
}
DensityMatrix diag2(double theta);
DensityMatrix rho2(const CosetChart2& chart);

ComplexMatrix omega_block(const CosetBlockSpec& spec);

/// 3x3 embedding of omega2 acting on levels 1, 2.
ComplexMatrix omega3_inner(double alpha, double phi);
/// U(3)/U(2)xU(1) representative with b = (beta1 e^{i psi1}, beta2 e^{i psi2}).
ComplexMatrix omega3_outer(double beta1, double beta2, double psi1,
                           double psi2);
ComplexMatrix omega3(const CosetChart3& chart);

/// diag(cos^2 t1, sin^2 t1 cos^2 t2, sin^2 t1 sin^2 t2).
std::array<double, 3> spectrum3(double theta1, double theta2);
DensityMatrix diag3(double theta1, double theta2);
DensityMatrix rho3(const CosetChart3& chart);

struct PermutationIdentity {
  std::string label;      // "(Id)", "i(12)", ...
  CosetChart3 chart;      // only the coset coordinates are meaningful
  ComplexMatrix permutation;
  Complex stated_phase;
  ComplexMatrix omega;
  // max |omega - stated_phase * permutation|
  double stated_phase_residual = 0.0;
  // omega = permutation * diag(torus_phases) up to torus_residual
  ComplexVector torus_phases;
  double torus_residual = 0.0;
};

/// The six coset settings that realize the permutation group P3.
///
/// Each omega is a permutation matrix up to a diagonal phase matrix (an
/// element of the stabilizer torus). Throws VerificationFailure if that
/// fails beyond 1e-12. The stated global phase is recorded alongside with
/// its own residual and is not enforced here.
std::vector<PermutationIdentity> permutation_table();

}  // namespace coset
}  // namespace qgeom
