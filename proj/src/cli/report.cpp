#include "qgeom/cli/report.hpp"

#include <cstdio>

namespace qgeom::cli {

using nlohmann::json;

json to_json(const MetricTensor& g) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < g.g.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < g.g.cols(); ++c) row.push_back(g.g(r, c));
    rows.push_back(std::move(row));
  }
  return {{"ordering", g.ordering},
          {"g", std::move(rows)},
          {"sqrt_det", metric::volume_element(g)},
          {"min_eigenvalue", g.min_eigenvalue()}};
}

json coords_json(const std::vector<std::string>& names,
                 std::span<const double> values) {
  json out = json::object();
  for (std::size_t i = 0; i < names.size() && i < values.size(); ++i) {
    out[names[i]] = values[i];
  }
  return out;
}

json to_json(const metric::ValidationReport& report) {
  const auto& names = metric::chart_descriptor(report.n).names;
  json entries = json::array();
  for (const auto& e : report.entries) {
    json j = {{"name", e.name},
              {"pullback", e.pullback},
              {"closed", e.closed},
              {"abs_dev", e.abs_dev},
              {"rel_dev", e.rel_dev}};
    if (e.spectral_closed) j["spectral_closed"] = *e.spectral_closed;
    if (e.spectral_abs_dev) j["spectral_abs_dev"] = *e.spectral_abs_dev;
    entries.push_back(std::move(j));
  }
  json out = {{"n", report.n},
              {"point", coords_json(names, report.point)},
              {"pullback", to_json(report.pullback)},
              {"entries", std::move(entries)},
              {"max_abs_dev", report.max_abs_dev},
              {"max_rel_dev", report.max_rel_dev},
              {"dittmann_max_rel_dev", report.dittmann_max_rel_dev},
              {"volume_pullback", report.volume_pullback},
              {"volume_closed", report.volume_closed},
              {"volume_rel_dev", report.volume_rel_dev},
              {"errors", report.errors}};
  if (report.closed.g.size() != 0) out["closed"] = to_json(report.closed);
  if (report.spectral_max_abs_dev) {
    out["spectral_max_abs_dev"] = *report.spectral_max_abs_dev;
  }
  if (report.closed_gamma_residual) {
    out["closed_gamma_residual"] = *report.closed_gamma_residual;
  }
  if (report.pullback_gamma_residual) {
    out["pullback_gamma_residual"] = *report.pullback_gamma_residual;
  }
  return out;
}

std::string format_csv(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace qgeom::cli
