#include "qgeom/cli/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "qgeom/errors.hpp"

namespace qgeom::cli {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json re_row = json::array();
    json im_row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace {

void read_part(const json& j, const char* key, Eigen::Index dim,
               ComplexMatrix& m, bool imaginary) {
  if (!j.contains(key)) {
    if (imaginary) return;  // "im" may be omitted for real matrices
    throw Error(ErrorKind::ParseError, std::string("missing \"") + key + "\"");
  }
  const json& rows = j.at(key);
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) {
    throw Error(ErrorKind::ParseError,
                std::string("\"") + key + "\" must have dim rows");
  }
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw Error(ErrorKind::ParseError, std::string("\"") + key + "\" row " +
                                             std::to_string(r) +
                                             " must have dim entries");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw Error(ErrorKind::ParseError,
                    std::string("\"") + key + "\" entry (" +
                        std::to_string(r) + ", " + std::to_string(c) +
                        ") is not a number");
      }
      const double x = v.get<double>();
      if (imaginary) {
        m(r, c).imag(x);
      } else {
        m(r, c).real(x);
      }
    }
  }
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorKind::ParseError, "matrix document must be an object");
  }
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) {
    throw Error(ErrorKind::ParseError, "\"dim\" must be an integer");
  }
  const auto dim = j.at("dim").get<long long>();
  if (dim < 1 || dim > matcore::kMaxDim) {
    throw Error(ErrorKind::ParseError, "\"dim\" must be in [1, 8]");
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  read_part(j, "re", dim, m, false);
  read_part(j, "im", dim, m, true);
  return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  return matrix_from_json(j);
}

}  // namespace qgeom::cli
