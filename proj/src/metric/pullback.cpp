#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qgeom/bures.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/metric.hpp"

namespace qgeom::metric {

const ChartDescriptor& chart2_descriptor() {
  static const ChartDescriptor kChart{
      {CosetChart2::names().begin(), CosetChart2::names().end()},
      [](std::span<const double> x) {
        return coset::rho2(CosetChart2::from_coords(x));
      },
      [](std::span<const double> x) {
        return std::min(x[0], coset::theta_max() - x[0]);
      }};
  return kChart;
}

const ChartDescriptor& chart3_descriptor() {
  static const ChartDescriptor kChart{
      {CosetChart3::names().begin(), CosetChart3::names().end()},
      [](std::span<const double> x) {
        return coset::rho3(CosetChart3::from_coords(x));
      },
      [](std::span<const double> x) {
        const CosetChart3 c = CosetChart3::from_coords(x);
        return std::min({c.theta1, coset::theta1_max() - c.theta1,
                         c.theta2 - coset::theta2_min(),
                         coset::theta2_max() - c.theta2,
                         std::numbers::pi - c.beta()});
      }};
  return kChart;
}

const ChartDescriptor& chart_descriptor(int n) {
  switch (n) {
    case 2: return chart2_descriptor();
    case 3: return chart3_descriptor();
    default:
      throw Error(ErrorKind::DimensionMismatch,
                  "charts exist for n = 2 and n = 3 only");
  }
}

namespace {

ComplexMatrix central_difference(const ChartDescriptor& chart,
                                 std::vector<double> x, std::size_t i,
                                 double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const ComplexMatrix plus = chart.build(x).matrix();
  x[i] = x0 - h;
  const ComplexMatrix minus = chart.build(x).matrix();
  return (plus - minus) / (2.0 * h);
}

}  // namespace

std::vector<TangentDelta> coordinate_tangents(std::span<const double> point,
                                              const ChartDescriptor& chart,
                                              const PullbackOptions& options) {
  if (point.size() != chart.names.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "chart point has " + std::to_string(point.size()) +
                    " coordinates, expected " +
                    std::to_string(chart.names.size()));
  }
  const double h = options.step;
  const double clearance = chart.boundary_distance(point);
  if (!(clearance > 2.0 * h)) {
    throw Error(ErrorKind::BoundaryTooClose,
                "point is " + std::to_string(clearance) +
                    " from the chart boundary, step " + std::to_string(h));
  }
  const DensityMatrix rho = chart.build(point);
  if (!(rho.min_eigen_gap() > options.min_gap)) {
    throw Error(ErrorKind::DegenerateSpectrum,
                "eigenvalue gap " + std::to_string(rho.min_eigen_gap()));
  }

  const std::vector<double> x(point.begin(), point.end());
  std::vector<TangentDelta> tangents;
  tangents.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ComplexMatrix d = central_difference(chart, x, i, h);
    if (options.richardson) {
      const ComplexMatrix half = central_difference(chart, x, i, 0.5 * h);
      d = (4.0 * half - d) / 3.0;
    }
    tangents.emplace_back(std::move(d));
  }
  return tangents;
}

MetricTensor pullback_metric(std::span<const double> point,
                             const ChartDescriptor& chart,
                             const PullbackOptions& options) {
  const std::vector<TangentDelta> tangents =
      coordinate_tangents(point, chart, options);
  const DensityMatrix rho = chart.build(point);
  return {chart.names, bures::hubner_gram(rho, tangents)};
}

MetricTensor pullback_metric(const CosetChart2& chart,
                             const PullbackOptions& options) {
  const auto x = chart.coords();
  return pullback_metric(x, chart2_descriptor(), options);
}

MetricTensor pullback_metric(const CosetChart3& chart,
                             const PullbackOptions& options) {
  const auto x = chart.coords();
  return pullback_metric(x, chart3_descriptor(), options);
}

}  // namespace qgeom::metric
