#pragma once

#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "qgeom/metric.hpp"

namespace qgeom::cli {

nlohmann::json to_json(const MetricTensor& g);
nlohmann::json to_json(const metric::ValidationReport& report);

/// {"name": value, ...} in the given order.
nlohmann::json coords_json(const std::vector<std::string>& names,
                           std::span<const double> values);

/// %.17g, enough to read back the same double.
std::string format_csv(double x);

}  // namespace qgeom::cli
