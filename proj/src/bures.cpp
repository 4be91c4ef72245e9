#include "qgeom/bures.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qgeom/errors.hpp"

namespace qgeom {

TangentDelta::TangentDelta(ComplexMatrix drho) : drho_(std::move(drho)) {
  matcore::require_square(drho_, "tangent");
  const double herm = matcore::hermitian_deviation(drho_);
  if (!(herm <= kTol)) {
    throw Error(ErrorKind::InvalidState,
                "tangent not Hermitian (" + std::to_string(herm) + ")");
  }
  const double tr = std::abs(drho_.trace());
  if (!(tr <= kTol)) {
    throw Error(ErrorKind::InvalidState,
                "tangent trace " + std::to_string(tr) + " is not zero");
  }
  drho_ = matcore::hermitize(drho_);
}

namespace bures {

namespace {

void require_same_dim(const DensityMatrix& rho, const TangentDelta& d) {
  if (rho.dim() != d.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state is " + std::to_string(rho.dim()) + "-level, tangent " +
                    std::to_string(d.dim()) + "-level");
  }
}

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

}  // namespace

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "fidelity of " + std::to_string(rho1.dim()) + "- and " +
                    std::to_string(rho2.dim()) + "-level states");
  }
  const ComplexMatrix root1 = matcore::mat_sqrt_psd(rho1.matrix());
  const ComplexMatrix inner =
      matcore::hermitize(root1 * rho2.matrix() * root1);
  const double root_fid = real_trace(matcore::mat_sqrt_psd(inner));
  const double raw = root_fid * root_fid;
  if (!(raw >= -1e-10 && raw <= 1.0 + 1e-9)) {
    throw Error(ErrorKind::InvalidState,
                "fidelity " + std::to_string(raw) + " outside [0, 1]");
  }
  return std::clamp(raw, 0.0, 1.0);
}

double bures_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const double f = fidelity(rho1, rho2);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(f)));
}

RealMatrix hubner_gram(const DensityMatrix& rho,
                       std::span<const TangentDelta> tangents) {
  const auto& spectral = rho.spectral();
  const auto& lambda = spectral.eigenvalues;
  const ComplexMatrix& v = spectral.eigenvectors;
  const Eigen::Index n = rho.dim();
  const std::size_t count = tangents.size();

  std::vector<ComplexMatrix> local;
  local.reserve(count);
  for (const TangentDelta& d : tangents) {
    require_same_dim(rho, d);
    local.push_back(v.adjoint() * d.matrix() * v);
  }

  // weights(i, j) = 1 / (2 (lambda_i + lambda_j)), zero off the support
  RealMatrix weights = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double denom = lambda(i) + lambda(j);
      if (denom > kSpectralEps) {
        weights(i, j) = 0.5 / denom;
        continue;
      }
      for (const ComplexMatrix& a : local) {
        if (std::abs(a(i, j)) > kSupportLeakTol) {
          throw Error(ErrorKind::DegenerateSupport,
                      "tangent leaves the support of rho at eigenpair (" +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
        }
      }
    }
  }

  RealMatrix gram(count, count);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t l = k; l < count; ++l) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (weights(i, j) == 0.0) continue;
          sum += weights(i, j) * (local[k](i, j) * local[l](j, i)).real();
        }
      }
      gram(k, l) = sum;
      gram(l, k) = sum;
    }
  }
  return gram;
}

double hubner_form(const DensityMatrix& rho, const TangentDelta& d1,
                   const TangentDelta& d2) {
  const std::vector<TangentDelta> pair{d1, d2};
  return hubner_gram(rho, pair)(0, 1);
}

double dittmann2_form(const DensityMatrix& rho, const TangentDelta& d) {
  if (rho.dim() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "dittmann2_form needs 2x2");
  }
  require_same_dim(rho, d);
  const double det = matcore::det(rho.matrix()).real();
  if (!(det > 1e-10)) {
    throw Error(ErrorKind::SingularState,
                "|rho| = " + std::to_string(det) + " <= 1e-10");
  }
  const ComplexMatrix& dr = d.matrix();
  const ComplexMatrix q = dr - rho.matrix() * dr;
  return 0.25 * real_trace(dr * dr + (q * q) / det);
}

double dittmann3_form(const DensityMatrix& rho, const TangentDelta& d) {
  if (rho.dim() != 3) {
    throw Error(ErrorKind::DimensionMismatch, "dittmann3_form needs 3x3");
  }
  require_same_dim(rho, d);
  const ComplexMatrix& r = rho.matrix();
  const double tr3 = real_trace(r * r * r);
  if (!(tr3 < 1.0 - 1e-12)) {
    throw Error(ErrorKind::PureState, "Tr rho^3 = " + std::to_string(tr3));
  }
  const double det = matcore::det(r).real();
  if (!(det > 1e-12)) {
    throw Error(ErrorKind::SingularState,
                "|rho| = " + std::to_string(det) + " <= 1e-12");
  }
  const ComplexMatrix& dr = d.matrix();
  const ComplexMatrix q = dr - r * dr;
  const ComplexMatrix p = dr - r.inverse() * dr;
  const double c = 3.0 / (1.0 - tr3);
  return 0.25 * real_trace(dr * dr + c * (q * q) + (c * det) * (p * p));
}

double dittmann_form(const DensityMatrix& rho, const TangentDelta& d) {
  switch (rho.dim()) {
    case 2: return dittmann2_form(rho, d);
    case 3: return dittmann3_form(rho, d);
    default:
      throw Error(ErrorKind::DimensionMismatch,
                  "closed trace forms exist only for 2x2 and 3x3 states");
  }
}

}  // namespace bures
}  // namespace qgeom
