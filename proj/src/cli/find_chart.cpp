#include "qgeom/cli/find_chart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qgeom/cli/prng.hpp"
#include "qgeom/coset.hpp"
#include "qgeom/errors.hpp"

namespace qgeom::cli {

namespace {

using std::numbers::pi;

Complex unit_phase(Complex z) {
  const double r = std::abs(z);
  return r > 0.0 ? z / r : Complex{1.0, 0.0};
}

// Orders eigenpairs so that the eigenvalues fit the chart's diagonal.
struct Ordered {
  std::vector<double> lambda;
  ComplexMatrix vectors;
  std::vector<double> thetas;
};

Ordered order_two(const SpectralDecomposition& s) {
  // descending: cos^2 theta >= 1/2
  Ordered o;
  o.lambda = {s.eigenvalues(1), s.eigenvalues(0)};
  o.vectors = s.eigenvectors.rowwise().reverse();
  o.thetas = {std::acos(std::sqrt(std::clamp(o.lambda[0], 0.0, 1.0)))};
  return o;
}

Ordered order_three(const SpectralDecomposition& s) {
  const double slack = coset::kRangeSlack;
  // descending order first, then the remaining permutations
  std::array<int, 3> perm{2, 1, 0};
  std::vector<std::array<int, 3>> candidates{perm};
  std::array<int, 3> p{0, 1, 2};
  do {
    if (p != perm) candidates.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  for (const auto& c : candidates) {
    const double la = std::max(s.eigenvalues(c[0]), 0.0);
    const double lb = std::max(s.eigenvalues(c[1]), 0.0);
    const double lc = std::max(s.eigenvalues(c[2]), 0.0);
    const double theta1 = std::acos(std::sqrt(std::min(la, 1.0)));
    const double theta2 = std::atan2(std::sqrt(lc), std::sqrt(lb));
    if (theta1 < -slack || theta1 > coset::theta1_max() + slack) continue;
    if (theta2 < coset::theta2_min() - slack ||
        theta2 > coset::theta2_max() + slack) {
      continue;
    }
    Ordered o;
    o.lambda = {la, lb, lc};
    o.vectors.resize(3, 3);
    for (int j = 0; j < 3; ++j) o.vectors.col(j) = s.eigenvectors.col(c[j]);
    o.thetas = {std::clamp(theta1, 0.0, coset::theta1_max()),
                std::clamp(theta2, coset::theta2_min(), coset::theta2_max())};
    return o;
  }
  throw Error(ErrorKind::OutOfChartRange,
              "no ordering of the spectrum lies in the theta1/theta2 ranges");
}

// Coset parameters of the unitary block [[c h1, e s h2], [-e* s h1, c h2]].
std::array<double, 2> read_u2_block(const ComplexMatrix& n) {
  const double alpha = std::atan2(std::abs(n(0, 1)), std::abs(n(0, 0)));
  Complex h2 = 1.0;
  if (std::cos(alpha) >= std::sin(alpha)) h2 = unit_phase(n(1, 1));
  const double phi = std::sin(alpha) > 1e-14 ? std::arg(n(0, 1) / h2) : 0.0;
  return {alpha, phi};
}

std::vector<double> analytic_coset(const Ordered& o, int n) {
  const ComplexMatrix& w = o.vectors;
  if (n == 2) {
    const auto [alpha, phi] = read_u2_block(w);
    return {alpha, phi};
  }
  // third column of Omega equals the third column of the outer block
  const Complex h3 = std::conj(unit_phase(w(2, 2)));
  const ComplexVector col = w.col(2) * h3;
  const double beta = std::acos(std::clamp(col(2).real(), -1.0, 1.0));
  double beta1 = 0.0, beta2 = 0.0, psi1 = 0.0, psi2 = 0.0;
  const double sb = std::sin(beta);
  if (sb > 1e-14) {
    beta1 = beta * std::abs(col(0)) / sb;
    beta2 = beta * std::abs(col(1)) / sb;
    psi1 = std::arg(col(0));
    psi2 = std::arg(col(1));
  }
  const ComplexMatrix inner =
      coset::omega3_outer(beta1, beta2, psi1, psi2).adjoint() * w;
  const auto [alpha, phi] = read_u2_block(inner.topLeftCorner(2, 2));
  return {alpha, phi, beta1, beta2, psi1, psi2};
}

ComplexMatrix omega_of(int n, const std::vector<double>& p) {
  if (n == 2) return coset::omega2(p[0], p[1]);
  return coset::omega3_outer(p[2], p[3], p[4], p[5]) *
         coset::omega3_inner(p[0], p[1]);
}

bool admissible(int n, const std::vector<double>& p) {
  return n == 2 || std::hypot(p[2], p[3]) < pi;
}

class CosetFit {
 public:
  CosetFit(int n, const std::vector<double>& lambda, const ComplexMatrix& rho)
      : n_(n), rho_(rho), d_(ComplexMatrix::Zero(n, n)) {
    for (int i = 0; i < n; ++i) d_(i, i) = lambda[static_cast<std::size_t>(i)];
  }

  Eigen::VectorXd residual(const std::vector<double>& p) const {
    const ComplexMatrix om = omega_of(n_, p);
    const ComplexMatrix diff = om * d_ * om.adjoint() - rho_;
    Eigen::VectorXd r(2 * diff.size());
    for (Eigen::Index i = 0; i < diff.size(); ++i) {
      r(2 * i) = diff(i).real();
      r(2 * i + 1) = diff(i).imag();
    }
    return r;
  }

  // Levenberg-Marquardt with a central-difference Jacobian.
  std::vector<double> polish(std::vector<double> p, double target) const {
    const std::size_t m = p.size();
    Eigen::VectorXd r = residual(p);
    double cost = r.squaredNorm();
    double damping = 1e-3;
    for (int iter = 0; iter < 200 && std::sqrt(cost) > target * 1e-3; ++iter) {
      Eigen::MatrixXd jac(r.size(), static_cast<Eigen::Index>(m));
      for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> hi = p, lo = p;
        hi[k] += 1e-7;
        lo[k] -= 1e-7;
        jac.col(static_cast<Eigen::Index>(k)) =
            (residual(hi) - residual(lo)) / 2e-7;
      }
      const Eigen::MatrixXd jtj = jac.transpose() * jac;
      const Eigen::VectorXd jtr = jac.transpose() * r;
      bool improved = false;
      while (damping < 1e12) {
        Eigen::MatrixXd a = jtj;
        a.diagonal().array() += damping * (1.0 + jtj.diagonal().array());
        const Eigen::VectorXd step = a.ldlt().solve(-jtr);
        std::vector<double> trial = p;
        for (std::size_t k = 0; k < m; ++k) {
          trial[k] += step(static_cast<Eigen::Index>(k));
        }
        if (admissible(n_, trial)) {
          const Eigen::VectorXd rt = residual(trial);
          if (rt.squaredNorm() < cost) {
            p = std::move(trial);
            r = rt;
            cost = rt.squaredNorm();
            damping = std::max(damping * 0.3, 1e-12);
            improved = true;
            break;
          }
        }
        damping *= 10.0;
      }
      if (!improved) break;
    }
    return p;
  }

 private:
  int n_;
  ComplexMatrix rho_;
  ComplexMatrix d_;
};

std::vector<double> random_coset(int n, SplitMix64& rng) {
  if (n == 2) return {rng.uniform(0.0, pi / 2.0), rng.uniform(0.0, 2.0 * pi)};
  const double b = pi / std::sqrt(2.0) * 0.99;
  return {rng.uniform(0.0, pi / 2.0), rng.uniform(0.0, 2.0 * pi),
          rng.uniform(0.0, b),        rng.uniform(0.0, b),
          rng.uniform(0.0, 2.0 * pi), rng.uniform(0.0, 2.0 * pi)};
}

std::vector<double> assemble(const Ordered& o, const std::vector<double>& c) {
  std::vector<double> x = o.thetas;
  x.insert(x.end(), c.begin(), c.end());
  return x;
}

double chart_residual(int n, const std::vector<double>& x,
                      const ComplexMatrix& rho) {
  const DensityMatrix back =
      n == 2 ? coset::rho2(CosetChart2::from_coords(x))
             : coset::rho3(CosetChart3::from_coords(x));
  return (back.matrix() - rho).norm();
}

}  // namespace

ChartFit find_chart(const DensityMatrix& rho, const FitOptions& options) {
  const int n = static_cast<int>(rho.dim());
  if (n != 2 && n != 3) {
    throw Error(ErrorKind::DimensionMismatch,
                "charts exist for 2- and 3-level states only");
  }
  if (!(rho.min_eigen_gap() > options.min_gap)) {
    throw Error(ErrorKind::DegenerateSpectrum,
                "eigenvalue gap " + std::to_string(rho.min_eigen_gap()) +
                    "; the coset chart needs a nondegenerate spectrum");
  }
  const Ordered o =
      n == 2 ? order_two(rho.spectral()) : order_three(rho.spectral());
  const CosetFit fit(n, o.lambda, rho.matrix());

  ChartFit best;
  best.n = n;
  best.eigenvalues = o.lambda;
  best.coords = assemble(o, analytic_coset(o, n));
  best.residual = chart_residual(n, best.coords, rho.matrix());

  auto consider = [&](const std::vector<double>& coset_params) {
    const std::vector<double> x =
        assemble(o, fit.polish(coset_params, options.target));
    const double res = chart_residual(n, x, rho.matrix());
    if (res < best.residual) {
      best.coords = x;
      best.residual = res;
    }
  };

  if (best.residual > 1e-12) {
    consider({best.coords.begin() + static_cast<long>(o.thetas.size()),
              best.coords.end()});
  }
  SplitMix64 rng(options.seed);
  while (best.residual > options.target &&
         best.restarts < options.max_restarts) {
    ++best.restarts;
    consider(random_coset(n, rng));
  }
  if (best.residual > options.accept) {
    throw Error(ErrorKind::FitFailure,
                "best residual " + std::to_string(best.residual) +
                    " after " + std::to_string(best.restarts) + " restarts");
  }
  return best;
}

}  // namespace qgeom::cli
