#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "qgeom/matcore.hpp"

namespace qgeom::cli {

// Matrix files are JSON objects {"dim": n, "re": [[...]], "im": [[...]]}
// with row-major arrays. Other keys are ignored, so reports that embed a
// matrix at top level (e.g. the rho command) read back directly.

nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Throws ParseError describing the first malformed field.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Throws ParseError for unreadable files or invalid JSON.
ComplexMatrix read_matrix_file(const std::string& path);

}  // namespace qgeom::cli
