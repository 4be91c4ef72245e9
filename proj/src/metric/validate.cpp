#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qgeom/bures.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/metric.hpp"

namespace qgeom::metric {

namespace {

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double relative(double dev, double p, double c) {
  return dev / std::max({std::abs(p), std::abs(c), 1e-9});
}

template <typename Fn>
void collect(std::vector<std::string>& errors, const char* step, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    errors.push_back(std::string(step) + ": " + e.what());
  }
}

CosetChart3 shifted(CosetChart3 c, double a, double b) {
  // gamma = phi - psi1 + psi2 is unchanged
  c.phi += a + b;
  c.psi1 += a;
  c.psi2 -= b;
  return c;
}

}  // namespace

ValidationReport validate(std::span<const double> point, int n,
                          const ValidateOptions& options) {
  const ChartDescriptor& chart = chart_descriptor(n);
  ValidationReport report;
  report.n = n;
  report.point.assign(point.begin(), point.end());

  // Without the pullback there is nothing to compare against.
  report.pullback = pullback_metric(point, chart, options.pullback);

  std::optional<MetricTensor> spectral;
  collect(report.errors, "closed form", [&] {
    if (n == 2) {
      report.closed = closed_metric2(CosetChart2::from_coords(point));
    } else {
      const CosetChart3 c = CosetChart3::from_coords(point);
      report.closed = closed_metric3(c);
      spectral = closed_metric3(c, spectral_pair_coefficients(c.theta1,
                                                              c.theta2));
    }
  });

  if (report.closed.g.size() != 0) {
    const auto& names = chart.names;
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = i; j < names.size(); ++j) {
        const auto r = static_cast<Eigen::Index>(i);
        const auto c = static_cast<Eigen::Index>(j);
        EntryDeviation e;
        e.name = MetricTensor::entry_name(names[i], names[j]);
        e.pullback = report.pullback.g(r, c);
        e.closed = report.closed.g(r, c);
        e.abs_dev = std::abs(e.pullback - e.closed);
        e.rel_dev = relative(e.abs_dev, e.pullback, e.closed);
        if (spectral) {
          e.spectral_closed = spectral->g(r, c);
          e.spectral_abs_dev = std::abs(e.pullback - *e.spectral_closed);
        }
        report.max_abs_dev = std::max(report.max_abs_dev, e.abs_dev);
        report.max_rel_dev = std::max(report.max_rel_dev, e.rel_dev);
        if (e.spectral_abs_dev) {
          report.spectral_max_abs_dev =
              std::max(report.spectral_max_abs_dev.value_or(0.0),
                       *e.spectral_abs_dev);
        }
        report.entries.push_back(std::move(e));
      }
    }
    report.volume_pullback = volume_element(report.pullback);
    report.volume_closed = volume_element(report.closed);
    report.volume_rel_dev =
        std::abs(report.volume_closed - report.volume_pullback) /
        std::max(std::abs(report.volume_pullback), 1e-300);
  }

  collect(report.errors, "dittmann", [&] {
    const DensityMatrix rho = chart.build(point);
    std::vector<TangentDelta> tangents =
        coordinate_tangents(point, chart, options.pullback);
    ComplexMatrix sum = ComplexMatrix::Zero(rho.dim(), rho.dim());
    for (const TangentDelta& t : tangents) sum += t.matrix();
    tangents.emplace_back(std::move(sum));
    for (const TangentDelta& t : tangents) {
      const double hub = bures::hubner_form(rho, t, t);
      const double dit = bures::dittmann_form(rho, t);
      report.dittmann_max_rel_dev =
          std::max(report.dittmann_max_rel_dev,
                   std::abs(dit - hub) / std::max(std::abs(hub), 1e-9));
    }
  });

  if (n == 3) {
    const CosetChart3 c = CosetChart3::from_coords(point);
    const double d = options.gamma_shift;
    collect(report.errors, "closed gamma check", [&] {
      const RealMatrix base = closed_metric3(c).g;
      report.closed_gamma_residual =
          std::max(max_abs_diff(base, closed_metric3(shifted(c, d, 0)).g),
                   max_abs_diff(base, closed_metric3(shifted(c, 0, d)).g));
    });
    collect(report.errors, "pullback gamma check", [&] {
      const RealMatrix& base = report.pullback.g;
      report.pullback_gamma_residual = std::max(
          max_abs_diff(base,
                       pullback_metric(shifted(c, d, 0), options.pullback).g),
          max_abs_diff(base,
                       pullback_metric(shifted(c, 0, d), options.pullback).g));
    });
  }
  return report;
}

}  // namespace qgeom::metric
