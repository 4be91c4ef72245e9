#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qgeom/bures.hpp"
#include "qgeom/coset.hpp"
#include "qgeom/density_matrix.hpp"

namespace qgeom {

/// Symmetric metric tensor with an explicit coordinate ordering.
struct MetricTensor {
  std::vector<std::string> ordering;
  RealMatrix g;

  std::size_t index_of(std::string_view coord) const;
  double at(std::string_view a, std::string_view b) const;
  double min_eigenvalue() const;
  double asymmetry() const;  // max |g_ij - g_ji|

  /// "g_<a>_<b>", e.g. g_theta1_theta1.
  static std::string entry_name(std::string_view a, std::string_view b);
};

struct SCoeff2 {
  double s12 = 0.0;
};

/// Pair coefficients multiplying (Omega^dagger dOmega)_ij
/// (Omega^dagger dOmega)_ji in the three-level line element.
struct PairCoefficients {
  double t12 = 0.0;
  double t13 = 0.0;
  double t23 = 0.0;
};

/// Coset-dependent auxiliaries of the three-level closed form.
struct AuxCoeffs {
  double gamma = 0.0;  // phi - psi1 + psi2
  double u1 = 1.0, u2 = 1.0;
  double v1 = 1.0, v2 = 1.0;
  double w1 = 2.0, w2 = 2.0;
  double x = 0.0, y = 0.0;
};

struct Coeffs3 {
  PairCoefficients t;
  AuxCoeffs aux;
};

namespace metric {

/// A coordinate chart: names, state builder and distance to the closest
/// range boundary (in coordinate units, infinity for periodic charts).
struct ChartDescriptor {
  std::vector<std::string> names;
  std::function<DensityMatrix(std::span<const double>)> build;
  std::function<double(std::span<const double>)> boundary_distance;
};

const ChartDescriptor& chart2_descriptor();
const ChartDescriptor& chart3_descriptor();
const ChartDescriptor& chart_descriptor(int n);

struct PullbackOptions {
  double step = 1e-5;
  // Combine steps h and h/2 to cancel the O(h^2) term.
  bool richardson = false;
  double min_gap = 1e-6;
};

/// Central-difference coordinate tangents d_i rho at a chart point, with
/// the same guards as pullback_metric.
std::vector<TangentDelta> coordinate_tangents(std::span<const double> point,
                                              const ChartDescriptor& chart,
                                              const PullbackOptions& options);

/// g_ij = hubner_form(rho, d_i rho, d_j rho) with central differences.
/// Throws DegenerateSpectrum when the eigenvalue gap is at most
/// options.min_gap and BoundaryTooClose within 2h of a range boundary.
MetricTensor pullback_metric(std::span<const double> point,
                             const ChartDescriptor& chart,
                             const PullbackOptions& options = {});
MetricTensor pullback_metric(const CosetChart2& chart,
                             const PullbackOptions& options = {});
MetricTensor pullback_metric(const CosetChart3& chart,
                             const PullbackOptions& options = {});

/// diag(1, cos^2 2theta, sin^2 2alpha cos^2 2theta / 4) in (theta, alpha, phi).
MetricTensor closed_metric2(const CosetChart2& chart);

/// (1/|D|)(D11 - D22)^2 (D11 + D22 - D11 D22 - |D| - 1) for diagonal 2x2 D.
SCoeff2 s_coeff(const DensityMatrix& d);

/// T12, T13, T23 as closed functions of (theta1, theta2).
PairCoefficients t_coeffs(double theta1, double theta2);

/// -(lambda_i - lambda_j)^2 / (lambda_i + lambda_j): the pair coefficients
/// the spectral line element implies for the same expansion. Used to
/// separate eigenvalue factors from coset factors when auditing
/// closed_metric3 against the pullback.
PairCoefficients spectral_pair_coefficients(double theta1, double theta2);

AuxCoeffs aux_coeffs(double beta1, double beta2, double phi, double psi1,
                     double psi2);

Coeffs3 coeffs3(const CosetChart3& chart);

/// Eigenvalue-guard for the three-level closed form.
inline constexpr double kClosedFormGuard = 1e-6;

/// Full 8x8 closed-form tensor in (theta1, theta2, alpha, phi, beta1,
/// beta2, psi1, psi2), pair coefficients from t_coeffs.
MetricTensor closed_metric3(const CosetChart3& chart);

/// Same coset factors with caller-supplied pair coefficients.
MetricTensor closed_metric3(const CosetChart3& chart,
                            const PairCoefficients& pair);

/// sqrt(max(det g, 0)).
double volume_element(const MetricTensor& g);

struct EntryDeviation {
  std::string name;
  double pullback = 0.0;
  double closed = 0.0;
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  // Three-level only: closed form rebuilt with spectral pair coefficients.
  std::optional<double> spectral_closed;
  std::optional<double> spectral_abs_dev;
};

struct ValidationReport {
  int n = 0;
  std::vector<double> point;
  MetricTensor pullback;
  MetricTensor closed;
  std::vector<EntryDeviation> entries;  // upper triangle, row major
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
  std::optional<double> spectral_max_abs_dev;

  // Relative |dittmann - hubner| over every coordinate tangent and their sum.
  double dittmann_max_rel_dev = 0.0;

  // Three-level: max entry change under gamma-preserving phase shifts.
  std::optional<double> closed_gamma_residual;
  std::optional<double> pullback_gamma_residual;

  double volume_pullback = 0.0;
  double volume_closed = 0.0;
  double volume_rel_dev = 0.0;

  std::vector<std::string> errors;
};

struct ValidateOptions {
  PullbackOptions pullback;
  double gamma_shift = 0.37;
};

/// Compares the closed-form tensor at a chart point with the pullback of
/// the spectral form. Sub-step failures are collected in report.errors.
ValidationReport validate(std::span<const double> point, int n,
                          const ValidateOptions& options = {});

}  // namespace metric
}  // namespace qgeom
