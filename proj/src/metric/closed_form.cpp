#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "qgeom/errors.hpp"
#include "qgeom/metric.hpp"
#include "qgeom/series.hpp"

namespace qgeom {

std::size_t MetricTensor::index_of(std::string_view coord) const {
  const auto it = std::find(ordering.begin(), ordering.end(), coord);
  if (it == ordering.end()) {
    throw Error(ErrorKind::DimensionMismatch,
                "no coordinate named " + std::string(coord));
  }
  return static_cast<std::size_t>(it - ordering.begin());
}

double MetricTensor::at(std::string_view a, std::string_view b) const {
  return g(static_cast<Eigen::Index>(index_of(a)),
           static_cast<Eigen::Index>(index_of(b)));
}

double MetricTensor::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double MetricTensor::asymmetry() const {
  return (g - g.transpose()).cwiseAbs().maxCoeff();
}

std::string MetricTensor::entry_name(std::string_view a, std::string_view b) {
  std::string name = "g_";
  name += a;
  name += '_';
  name += b;
  return name;
}

namespace metric {

namespace {

std::vector<std::string> names_of(const auto& array) {
  return {array.begin(), array.end()};
}

void guard_spectrum3(const std::array<double, 3>& lambda) {
  for (int i = 0; i < 3; ++i) {
    if (lambda[i] < kClosedFormGuard) {
      throw Error(ErrorKind::DegenerateSpectrum,
                  "eigenvalue " + std::to_string(lambda[i]) +
                      " below closed-form guard");
    }
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs(lambda[i] - lambda[j]) < kClosedFormGuard) {
        throw Error(ErrorKind::DegenerateSpectrum,
                    "eigenvalues " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1) + " within closed-form guard");
      }
    }
  }
}

void guard_denominator(double value, const char* what) {
  if (std::abs(value) < 1e-12) {
    throw Error(ErrorKind::DegenerateSpectrum,
                std::string(what) + " denominator vanishes");
  }
}

}  // namespace

MetricTensor closed_metric2(const CosetChart2& chart) {
  coset::validate(chart);
  const double c2t = std::cos(2.0 * chart.theta);
  const double s2a = std::sin(2.0 * chart.alpha);
  MetricTensor out{names_of(CosetChart2::names()), RealMatrix::Zero(3, 3)};
  out.g(0, 0) = 1.0;
  out.g(1, 1) = c2t * c2t;
  out.g(2, 2) = 0.25 * s2a * s2a * c2t * c2t;
  return out;
}

SCoeff2 s_coeff(const DensityMatrix& d) {
  if (d.dim() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "s_coeff needs a 2x2 matrix");
  }
  const ComplexMatrix& m = d.matrix();
  if (std::abs(m(0, 1)) > 1e-12) {
    throw Error(ErrorKind::InvalidState, "s_coeff needs a diagonal matrix");
  }
  const double d11 = m(0, 0).real();
  const double d22 = m(1, 1).real();
  const double det = d11 * d22;
  if (!(det > 1e-12)) {
    throw Error(ErrorKind::SingularState, "|D| = " + std::to_string(det));
  }
  const double diff = d11 - d22;
  return {diff * diff * (d11 + d22 - d11 * d22 - det - 1.0) / det};
}

PairCoefficients t_coeffs(double theta1, double theta2) {
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double c1s = c1 * c1, s1s = s1 * s1, c2s = c2 * c2, s2s = s2 * s2;
  const double c1q = c1s * c1s, c2q = c2s * c2s, s2q = s2s * s2s;

  // shared factor cos^2 t1 + sin^4 t1 sin^2 t2 cos^2 t2
  const double shared = c1s + s1s * s1s * s2s * c2s;

  const double den12 = c1q * c2q * shared;
  const double den13 = s1s * c1q * c2q * shared;
  const double den23 = s1s * s1s * s1s * s2q * c2s;
  guard_denominator(den12, "T12");
  guard_denominator(den13, "T13");
  guard_denominator(den23, "T23");

  const double gap12 = c1s - s1s * c2s;
  const double gap13 = c1s - s1s * s2s;

  PairCoefficients t;
  t.t12 = -0.5 * gap12 * gap12 *
          (3.0 + (1.0 - s1s * c2s) * (1.0 + c1q * c2q) / den12);
  t.t13 = -0.5 * gap13 * gap13 *
          (3.0 + (1.0 - s1s * s2s) * (c2s + s1s * c1q * s2q) / den13);
  t.t23 = -0.5 * (s1s * c2s * (1.0 + 3.0 * s1s) + c1s / den23);
  return t;
}

PairCoefficients spectral_pair_coefficients(double theta1, double theta2) {
  const auto l = coset::spectrum3(theta1, theta2);
  auto pair = [](double a, double b) {
    const double sum = a + b;
    guard_denominator(sum, "spectral pair");
    return -(a - b) * (a - b) / sum;
  };
  return {pair(l[0], l[1]), pair(l[0], l[2]), pair(l[1], l[2])};
}

AuxCoeffs aux_coeffs(double beta1, double beta2, double phi, double psi1,
                     double psi2) {
  AuxCoeffs a;
  a.gamma = phi - psi1 + psi2;
  const double beta = std::hypot(beta1, beta2);
  if (beta == 0.0) return a;  // limits U = V = 1, W = 2, X = Y = 0

  // Direction cosines keep every coefficient bounded as beta -> 0.
  const double r1 = beta1 / beta;
  const double r2 = beta2 / beta;
  const double cosm1 = cos_minus_one_over_sq(beta) * beta * beta;
  const double sc = sinc(beta);

  a.u1 = 1.0 + r2 * r2 * cosm1;
  a.u2 = 1.0 + r1 * r1 * cosm1;
  a.v1 = 1.0 + r2 * r2 * (sc - 1.0);
  a.v2 = 1.0 + r1 * r1 * (sc - 1.0);
  a.w1 = (2.0 + cosm1) - 2.0 * r1 * r1 * cosm1;
  a.w2 = (2.0 + cosm1) - 2.0 * r2 * r2 * cosm1;
  a.x = r1 * r2 * (1.0 - sc);
  a.y = -r1 * r2 * cosm1;
  return a;
}

Coeffs3 coeffs3(const CosetChart3& chart) {
  return {t_coeffs(chart.theta1, chart.theta2),
          aux_coeffs(chart.beta1, chart.beta2, chart.phi, chart.psi1,
                     chart.psi2)};
}

MetricTensor closed_metric3(const CosetChart3& chart) {
  coset::validate(chart);
  guard_spectrum3(coset::spectrum3(chart.theta1, chart.theta2));
  return closed_metric3(chart, t_coeffs(chart.theta1, chart.theta2));
}

MetricTensor closed_metric3(const CosetChart3& chart,
                            const PairCoefficients& pair) {
  coset::validate(chart);
  const AuxCoeffs k = aux_coeffs(chart.beta1, chart.beta2, chart.phi,
                                 chart.psi1, chart.psi2);
  const double t12 = pair.t12, t13 = pair.t13, t23 = pair.t23;
  const double b1 = chart.beta1, b2 = chart.beta2;
  const double beta = chart.beta();

  // (sin(beta/2)/beta)^2 and its square; sin(beta)/beta
  const double half = 0.5 * sinc(0.5 * beta);
  const double q = half * half;
  const double q2 = q * q;
  const double sc = sinc(beta);
  const double sc2 = sc * sc;

  const double a = chart.alpha;
  const double ca = std::cos(a), sa = std::sin(a);
  const double ca2 = ca * ca, sa2 = sa * sa;
  const double s2a = std::sin(2.0 * a), c2a = std::cos(2.0 * a);
  const double s4a = std::sin(4.0 * a);
  const double cg = std::cos(k.gamma), sg = std::sin(k.gamma);
  const double s2g = std::sin(2.0 * k.gamma);
  const double u1 = k.u1, u2 = k.u2, v1 = k.v1, v2 = k.v2;
  const double w1 = k.w1, w2 = k.w2, x = k.x, y = k.y;
  const double dt = t13 - t23;

  enum { kT1, kT2, kA, kP, kB1, kB2, kS1, kS2 };
  RealMatrix g = RealMatrix::Zero(8, 8);
  g(kT1, kT1) = 1.0;
  const double s1 = std::sin(chart.theta1);
  g(kT2, kT2) = s1 * s1;

  g(kA, kA) = -t12;
  g(kA, kP) = 0.0;
  g(kA, kB1) = 2.0 * t12 * b2 * cg * q;
  // g_ab2 = -(b1/b2) g_ab1 and g_as2 = (U1/U2) g_as1, with the common
  // factor cancelled so that b2 = 0 or U2 = 0 stays finite.
  g(kA, kB2) = -2.0 * t12 * b1 * cg * q;
  g(kA, kS1) = 2.0 * t12 * b1 * b2 * u2 * sg * q;
  g(kA, kS2) = 2.0 * t12 * b1 * b2 * u1 * sg * q;

  g(kP, kP) = -0.25 * t12 * s2a * s2a;
  g(kP, kB1) = -0.5 * t12 * b2 * s4a * q;
  g(kP, kB2) = 0.5 * t12 * b1 * s4a * q;
  g(kP, kS1) = 0.5 * t12 * b1 * s2a *
               (b1 * w2 * s2a + 2.0 * b2 * u2 * c2a * cg) * q;
  g(kP, kS2) = -0.5 * t12 * b2 * s2a *
               (b2 * w1 * s2a - 2.0 * b1 * u1 * c2a * cg) * q;

  const double mix = 1.0 - s2a * s2a * sg * sg;
  g(kB1, kB1) = -4.0 * t12 * b2 * b2 * mix * q2 -
                t13 * (x * x * sa2 + v1 * v1 * ca2 - x * v1 * s2a * cg) -
                t23 * (x * x * ca2 + v1 * v1 * sa2 + x * v1 * s2a * cg);
  g(kB1, kB2) =
      4.0 * t12 * b1 * b2 * mix * q2 -
      t13 * (x * (v1 * ca2 + v2 * sa2) - 0.5 * (v1 * v2 + x * x) * s2a * cg) -
      t23 * (x * (v1 * sa2 + v2 * ca2) + 0.5 * (v1 * v2 + x * x) * s2a * cg);
  g(kB1, kS1) =
      -t12 * b1 * b2 *
          (2.0 * b2 * u2 * s2a * s2a * s2g - b1 * w2 * s4a * sg) * q2 +
      0.5 * dt * b1 * s2a * sg * (u2 * x + v1 * y) * sc;
  g(kB1, kS2) =
      -t12 * b2 * b2 *
          (2.0 * b1 * u1 * s2a * s2a * s2g + b2 * w1 * s4a * sg) * q2 -
      0.5 * dt * b2 * s2a * sg * (u1 * v1 + x * y) * sc;

  g(kB2, kB2) = -4.0 * t12 * b1 * b1 * mix * q2 -
                t13 * (x * x * ca2 + v2 * v2 * sa2 - x * v2 * s2a * cg) -
                t23 * (x * x * sa2 + v2 * v2 * ca2 + x * v2 * s2a * cg);
  g(kB2, kS1) =
      t12 * b1 * b1 *
          (2.0 * b2 * u2 * s2a * s2a * s2g - b1 * w2 * s4a * sg) * q2 +
      0.5 * dt * b1 * s2a * sg * (u2 * v2 + x * y) * sc;
  g(kB2, kS2) =
      t12 * b1 * b2 *
          (2.0 * b1 * u1 * s2a * s2a * s2g + b2 * w1 * s4a * sg) * q2 -
      0.5 * dt * b2 * s2a * sg * (u1 * x + v2 * y) * sc;

  const double mixc = 1.0 - s2a * s2a * cg * cg;
  g(kS1, kS1) =
      -t12 * b1 * b1 *
          (4.0 * b2 * b2 * u2 * u2 * mixc + b1 * b1 * w2 * w2 * s2a * s2a +
           2.0 * b1 * b2 * u2 * w2 * s4a * cg) *
          q2 -
      t13 * b1 * b1 * (u2 * u2 * ca2 + y * y * sa2 + u2 * y * s2a * cg) * sc2 -
      t23 * b1 * b1 * (u2 * u2 * sa2 + y * y * ca2 - u2 * y * s2a * cg) * sc2;
  g(kS1, kS2) =
      -t12 * b1 * b2 *
          (4.0 * b1 * b2 * u1 * u2 * mixc -
           b1 * b2 * w1 * w2 * s2a * s2a -
           s4a * cg * (b2 * b2 * u2 * w1 - b1 * b1 * u1 * w2)) *
          q2 +
      t13 * b1 * b2 *
          (y * (u1 * sa2 + u2 * ca2) + 0.5 * s2a * cg * (u1 * u2 + y * y)) *
          sc2 +
      t23 * b1 * b2 *
          (y * (u1 * ca2 + u2 * sa2) - 0.5 * s2a * cg * (u1 * u2 + y * y)) *
          sc2;
  g(kS2, kS2) =
      -t12 * b2 * b2 *
          (4.0 * b1 * b1 * u1 * u1 * mixc + b2 * b2 * w1 * w1 * s2a * s2a -
           2.0 * b1 * b2 * u1 * w1 * s4a * cg) *
          q2 -
      t13 * b2 * b2 * (u1 * u1 * sa2 + y * y * ca2 + u1 * y * s2a * cg) * sc2 -
      t23 * b2 * b2 * (u1 * u1 * ca2 + y * y * sa2 - u1 * y * s2a * cg) * sc2;

  // complete from the upper triangle
  g.triangularView<Eigen::StrictlyLower>() = g.transpose();
  return {names_of(CosetChart3::names()), std::move(g)};
}

double volume_element(const MetricTensor& g) {
  return std::sqrt(std::max(g.g.determinant(), 0.0));
}

}  // namespace metric
}  // namespace qgeom
