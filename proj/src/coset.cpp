#include "qgeom/coset.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "qgeom/errors.hpp"
#include "qgeom/series.hpp"

namespace qgeom {

using std::numbers::pi;

const std::array<std::string, CosetChart2::kArity>& CosetChart2::names() {
  static const std::array<std::string, kArity> kNames{"theta", "alpha", "phi"};
  return kNames;
}

CosetChart2 CosetChart2::from_coords(std::span<const double> x) {
  if (x.size() != kArity) {
    throw Error(ErrorKind::DimensionMismatch,
                "two-level chart needs 3 coordinates");
  }
  return {x[0], x[1], x[2]};
}

const std::array<std::string, CosetChart3::kArity>& CosetChart3::names() {
  static const std::array<std::string, kArity> kNames{
      "theta1", "theta2", "alpha", "phi", "beta1", "beta2", "psi1", "psi2"};
  return kNames;
}

CosetChart3 CosetChart3::from_coords(std::span<const double> x) {
  if (x.size() != kArity) {
    throw Error(ErrorKind::DimensionMismatch,
                "three-level chart needs 8 coordinates");
  }
  return {x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]};
}

namespace coset {

namespace {

void check_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::OutOfChartRange,
                std::string(name) + " must be finite");
  }
}

void check_range(double value, double lo, double hi, const char* name) {
  check_finite(value, name);
  if (value < lo - kRangeSlack || value > hi + kRangeSlack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << name << " = " << value << " outside [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::OutOfChartRange, msg.str());
  }
}

}  // namespace

double theta1_max() { return std::acos(1.0 / std::sqrt(3.0)); }
double theta2_min() { return pi / 6.0; }
double theta2_max() { return pi / 4.0; }
double theta_max() { return pi / 4.0; }

void validate(const CosetChart2& chart) {
  check_range(chart.theta, 0.0, theta_max(), "theta");
  check_finite(chart.alpha, "alpha");
  check_finite(chart.phi, "phi");
}

void validate(const CosetChart3& chart) {
  check_range(chart.theta1, 0.0, theta1_max(), "theta1");
  check_range(chart.theta2, theta2_min(), theta2_max(), "theta2");
  check_finite(chart.alpha, "alpha");
  check_finite(chart.phi, "phi");
  check_finite(chart.beta1, "beta1");
  check_finite(chart.beta2, "beta2");
  check_finite(chart.psi1, "psi1");
  check_finite(chart.psi2, "psi2");
  if (!(chart.beta() < pi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "beta = sqrt(beta1^2 + beta2^2) = " << chart.beta()
        << " must be below pi";
    throw Error(ErrorKind::OutOfChartRange, msg.str());
  }
}

ComplexMatrix omega2(double alpha, double phi) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const Complex e = std::polar(1.0, phi);
  ComplexMatrix m(2, 2);
  m << c, e * s,
       -std::conj(e) * s, c;
  return m;
}

DensityMatrix diag2(double theta) {
  check_range(theta, 0.0, theta_max(), "theta");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = c * c;
  d(1, 1) = s * s;
  return DensityMatrix(std::move(d));
}

DensityMatrix rho2(const CosetChart2& chart) {
  validate(chart);
  const ComplexMatrix omega = omega2(chart);
  const DensityMatrix d = diag2(chart.theta);
  return DensityMatrix(
      matcore::hermitize(omega * d.matrix() * omega.adjoint()));
}

ComplexMatrix omega_block(const CosetBlockSpec& spec) {
  if (spec.n < 2 || spec.n > matcore::kMaxDim || spec.k < 2 ||
      spec.k > spec.n || spec.b.size() != spec.k - 1) {
    throw Error(ErrorKind::DimensionMismatch,
                "coset block needs 2 <= k <= n <= 8 and k-1 entries in b");
  }
  const Eigen::Index m = spec.k - 1;
  const double norm = spec.b.norm();
  const double sc = sinc(norm);

  ComplexMatrix out = ComplexMatrix::Identity(spec.n, spec.n);
  // cos sqrt(B B^dagger) for rank-one B B^dagger
  out.topLeftCorner(m, m) +=
      cos_minus_one_over_sq(norm) * (spec.b * spec.b.adjoint());
  out.block(0, m, m, 1) = sc * spec.b;
  out.block(m, 0, 1, m) = -sc * spec.b.adjoint();
  out(m, m) = std::cos(norm);
  return out;
}

ComplexMatrix omega3_inner(double alpha, double phi) {
  ComplexVector b(1);
  b(0) = alpha * std::polar(1.0, phi);
  return omega_block({3, 2, std::move(b)});
}

ComplexMatrix omega3_outer(double beta1, double beta2, double psi1,
                           double psi2) {
  ComplexVector b(2);
  b(0) = beta1 * std::polar(1.0, psi1);
  b(1) = beta2 * std::polar(1.0, psi2);
  return omega_block({3, 3, std::move(b)});
}

ComplexMatrix omega3(const CosetChart3& chart) {
  return omega3_outer(chart.beta1, chart.beta2, chart.psi1, chart.psi2) *
         omega3_inner(chart.alpha, chart.phi);
}

std::array<double, 3> spectrum3(double theta1, double theta2) {
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  return {c1 * c1, s1 * s1 * c2 * c2, s1 * s1 * s2 * s2};
}

DensityMatrix diag3(double theta1, double theta2) {
  check_range(theta1, 0.0, theta1_max(), "theta1");
  check_range(theta2, theta2_min(), theta2_max(), "theta2");
  const auto lambda = spectrum3(theta1, theta2);
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) d(i, i) = lambda[i];
  return DensityMatrix(std::move(d));
}

DensityMatrix rho3(const CosetChart3& chart) {
  validate(chart);
  const ComplexMatrix omega = omega3(chart);
  const DensityMatrix d = diag3(chart.theta1, chart.theta2);
  return DensityMatrix(
      matcore::hermitize(omega * d.matrix() * omega.adjoint()));
}

namespace {

// Column j carries a one in row sigma[j].
ComplexMatrix permutation_matrix(const std::array<int, 3>& sigma) {
  ComplexMatrix p = ComplexMatrix::Zero(3, 3);
  for (int j = 0; j < 3; ++j) p(sigma[j], j) = 1.0;
  return p;
}

CosetChart3 coset_setting(double beta1, double beta2, double psi1,
                          double psi2, double alpha, double phi) {
  CosetChart3 c;
  c.beta1 = beta1;
  c.beta2 = beta2;
  c.psi1 = psi1;
  c.psi2 = psi2;
  c.alpha = alpha;
  c.phi = phi;
  return c;
}

}  // namespace

std::vector<PermutationIdentity> permutation_table() {
  const double h = pi / 2.0;
  const Complex i{0.0, 1.0};
  struct Row {
    const char* label;
    CosetChart3 chart;
    std::array<int, 3> sigma;
    Complex phase;
  };
  const std::array<Row, 6> rows{{
      {"(Id)", coset_setting(0, 0, 0, 0, 0, 0), {0, 1, 2}, 1.0},
      {"i(12)", coset_setting(0, 0, 0, 0, h, h), {1, 0, 2}, i},
      {"i(13)", coset_setting(h, 0, h, 0, 0, 0), {2, 1, 0}, i},
      {"i(23)", coset_setting(0, h, 0, h, 0, 0), {0, 2, 1}, i},
      {"i(123)", coset_setting(h, 0, h, 0, h, h), {1, 2, 0}, i},
      {"i(321)", coset_setting(0, h, 0, h, h, h), {2, 0, 1}, i},
  }};

  std::vector<PermutationIdentity> table;
  table.reserve(rows.size());
  for (const Row& row : rows) {
    PermutationIdentity entry;
    entry.label = row.label;
    entry.chart = row.chart;
    entry.permutation = permutation_matrix(row.sigma);
    entry.stated_phase = row.phase;
    entry.omega = omega3(row.chart);
    entry.stated_phase_residual =
        (entry.omega - row.phase * entry.permutation).cwiseAbs().maxCoeff();

    // P^T omega is diagonal exactly when omega = P diag(phases).
    const ComplexMatrix lambda = entry.permutation.transpose() * entry.omega;
    entry.torus_phases = lambda.diagonal();
    double residual = 0.0;
    for (Eigen::Index r = 0; r < 3; ++r) {
      for (Eigen::Index c = 0; c < 3; ++c) {
        residual = std::max(residual, r == c
                                          ? std::abs(std::abs(lambda(r, c)) - 1.0)
                                          : std::abs(lambda(r, c)));
      }
    }
    entry.torus_residual = residual;
    if (residual > 1e-12) {
      throw Error(ErrorKind::VerificationFailure,
                  std::string(row.label) + " is not a phased permutation (" +
                      std::to_string(residual) + ")");
    }
    table.push_back(std::move(entry));
  }
  return table;
}

}  // namespace coset
}  // namespace qgeom
