// Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
// indented diagnostics, and exits nonzero if any selected criterion fails.
//
//   acceptance                 all criteria
//   acceptance --criterion 3   a single criterion

#include <CLI11.hpp>
#include <Eigen/QR>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qgeom/bures.hpp"
#include "qgeom/cli/find_chart.hpp"
#include "qgeom/cli/prng.hpp"
#include "qgeom/cli/sampling.hpp"
#include "qgeom/coset.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/metric.hpp"

using namespace qgeom;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs(const RealMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Haar unitary from the QR decomposition of a complex Ginibre matrix.
ComplexMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix z(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) z(r, c) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

// Uniform point of the probability simplex.
std::vector<double> simplex_point(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e;
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& x : p) sum += (x = e(rng));
  for (double& x : p) x /= sum;
  return p;
}

ComplexMatrix diag_matrix(const std::vector<double>& p) {
  ComplexMatrix d = ComplexMatrix::Zero(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d(i, i) = p[i];
  return d;
}

DensityMatrix random_state(int n, std::mt19937_64& rng) {
  const ComplexMatrix u = haar_unitary(n, rng);
  return DensityMatrix(matcore::hermitize(u * diag_matrix(simplex_point(n, rng)) *
                                          u.adjoint()));
}

TangentDelta unit_tangent(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = Complex(g(rng), g(rng));
  }
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  h -= (h.trace() / double(n)) * ComplexMatrix::Identity(n, n);
  return TangentDelta(h / h.norm());
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// 1. two-level closed form vs pullback on a 20^3 interior grid
Outcome criterion1() {
  constexpr int kGrid = 20;
  constexpr double kTol = 1e-7;
  Stopwatch clock;
  double worst = 0.0;
  std::string worst_at;
  std::map<std::string, double> per_entry;
  const auto& names = metric::chart2_descriptor().names;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      for (int k = 0; k < kGrid; ++k) {
        const CosetChart2 c{(i + 0.5) / kGrid * pi / 4, (j + 0.5) / kGrid * pi,
                            (k + 0.5) / kGrid * 2 * pi};
        const RealMatrix d =
            (metric::closed_metric2(c).g - metric::pullback_metric(c).g).cwiseAbs();
        for (int r = 0; r < 3; ++r) {
          for (int s = r; s < 3; ++s) {
            double& e = per_entry[MetricTensor::entry_name(names[r], names[s])];
            e = std::max(e, d(r, s));
          }
        }
        if (d.maxCoeff() > worst) {
          worst = d.maxCoeff();
          worst_at = fmt("theta=%.4f alpha=%.4f phi=%.4f", c.theta, c.alpha, c.phi);
        }
      }
    }
  }
  const double t = clock.seconds();
  Outcome o;
  o.pass = worst <= kTol && t < 30.0;
  o.summary = fmt("2-level closed form vs pullback, %d^3 interior grid: max |d| = %.2e "
                  "(tol %.0e), %.2f s (limit 30 s)",
                  kGrid, worst, kTol, t);
  for (const auto& [name, dev] : per_entry) {
    o.details.push_back(fmt("%-16s max |d| = %.2e", name.c_str(), dev));
  }
  o.details.push_back("worst point: " + worst_at);
  return o;
}

// 2. three-level closed form vs pullback at 200 random interior points
Outcome criterion2() {
  constexpr int kSamples = 200;
  constexpr double kTol = 1e-6;
  Stopwatch clock;
  cli::SplitMix64 rng(kSeed);
  const auto& names = metric::chart3_descriptor().names;
  struct Agg {
    double max_dev = 0.0;
    double max_spectral = 0.0;
    int over = 0;
  };
  std::map<std::string, Agg> agg;
  std::vector<std::string> errors;
  for (int s = 0; s < kSamples; ++s) {
    const auto p = cli::sample_interior(3, rng);
    try {
      const auto c = CosetChart3::from_coords(p);
      const RealMatrix closed = metric::closed_metric3(c).g;
      const RealMatrix spectral =
          metric::closed_metric3(c, metric::spectral_pair_coefficients(c.theta1, c.theta2)).g;
      const RealMatrix pull = metric::pullback_metric(c).g;
      for (int r = 0; r < 8; ++r) {
        for (int k = r; k < 8; ++k) {
          Agg& a = agg[MetricTensor::entry_name(names[r], names[k])];
          const double d = std::abs(closed(r, k) - pull(r, k));
          a.max_dev = std::max(a.max_dev, d);
          a.max_spectral = std::max(a.max_spectral, std::abs(spectral(r, k) - pull(r, k)));
          a.over += d > kTol ? 1 : 0;
        }
      }
    } catch (const Error& e) {
      errors.push_back(fmt("sample %d: %s", s, e.what()));
    }
  }
  const double t = clock.seconds();
  int failing = 0;
  double worst = 0.0;
  Outcome o;
  for (int r = 0; r < 8; ++r) {
    for (int k = r; k < 8; ++k) {
      const std::string name = MetricTensor::entry_name(names[r], names[k]);
      const Agg& a = agg[name];
      worst = std::max(worst, a.max_dev);
      failing += a.over > 0 ? 1 : 0;
      o.details.push_back(fmt("%-18s max |d| = %9.2e  over tol %3d/%d  %s   "
                              "[with -(li-lj)^2/(li+lj) pair coefficients: %.2e]",
                              name.c_str(), a.max_dev, a.over, kSamples,
                              a.over ? "FAIL" : "ok  ", a.max_spectral));
    }
  }
  for (const auto& e : errors) o.details.push_back(e);
  o.pass = failing == 0 && errors.empty() && t < 120.0;
  o.summary = fmt("3-level closed form vs pullback, %d seeded interior charts: "
                  "%d/36 entries exceed %.0e (max |d| = %.2e), %.2f s (limit 120 s)",
                  kSamples, failing, kTol, worst, t);
  return o;
}

// 3. Dittmann trace forms vs the spectral form
Outcome criterion3() {
  constexpr int kTrials = 10000;
  constexpr double kTol = 1e-9;
  Stopwatch clock;
  std::mt19937_64 rng(kSeed);
  Outcome o;
  bool pass = true;
  for (int n : {2, 3}) {
    double worst = 0.0;
    int drawn = 0, used = 0;
    double min_eig_used = 1.0;
    while (used < kTrials) {
      ++drawn;
      const DensityMatrix rho = random_state(n, rng);
      const TangentDelta d = unit_tangent(n, rng);
      double dit = 0.0;
      try {
        dit = bures::dittmann_form(rho, d);
      } catch (const Error& e) {
        // singular or pure: outside the domain of the trace forms
        continue;
      }
      const double hub = bures::hubner_form(rho, d, d);
      worst = std::max(worst, std::abs(dit - hub) / std::abs(hub));
      min_eig_used = std::min(min_eig_used, rho.min_eigenvalue());
      ++used;
    }
    pass = pass && worst <= kTol;
    o.details.push_back(fmt("n=%d: %d states (%d drawn), max rel |dittmann - hubner| = "
                            "%.2e, smallest eigenvalue %.1e",
                            n, used, drawn, worst, min_eig_used));
  }
  o.pass = pass;
  o.summary = fmt("Dittmann 2x2/3x3 trace forms vs Hubner, %d random states and unit "
                  "tangents per dimension: rel tol %.0e, %.2f s",
                  kTrials, kTol, clock.seconds());
  return o;
}

// 4. permutation identities with the stated global phase
Outcome criterion4() {
  constexpr double kTol = 1e-12;
  Outcome o;
  int passed = 0;
  const auto table = coset::permutation_table();
  for (const auto& id : table) {
    const bool ok = id.stated_phase_residual <= kTol;
    passed += ok ? 1 : 0;
    std::string phases;
    for (Eigen::Index i = 0; i < id.torus_phases.size(); ++i) {
      const Complex z = id.torus_phases(i);
      phases += fmt(" %+.0f%+.0fi", z.real(), z.imag());
    }
    o.details.push_back(fmt("%-7s stated phase %+.0f%+.0fi: residual %.2e %s | "
                            "Omega = P diag(%s ) to %.1e",
                            id.label.c_str(), id.stated_phase.real(),
                            id.stated_phase.imag(), id.stated_phase_residual,
                            ok ? "ok  " : "FAIL", phases.c_str(), id.torus_residual));
  }
  o.pass = passed == static_cast<int>(table.size());
  o.summary = fmt("permutation identities, entrywise |Omega - phase * P| <= %.0e: %d/%zu",
                  kTol, passed, table.size());
  return o;
}

// 5. block structure of the pullback and gamma invariance of the closed form
Outcome criterion5() {
  constexpr int kSamples = 100;
  constexpr double kBlockTol = 1e-8;
  constexpr double kGammaTol = 1e-12;
  Stopwatch clock;
  cli::SplitMix64 rng(kSeed + 5);
  std::mt19937_64 shifts(kSeed);
  std::uniform_real_distribution<double> u(-pi, pi);
  double cross = 0.0, t11 = 0.0, t22 = 0.0, gamma = 0.0, gamma_rel = 0.0;
  double gamma_spectral = 0.0, max_entry = 0.0;
  int gamma_over = 0;
  std::vector<std::string> errors;
  for (int s = 0; s < kSamples; ++s) {
    const auto c = CosetChart3::from_coords(cli::sample_interior(3, rng));
    try {
      const MetricTensor g = metric::pullback_metric(c);
      for (int a = 0; a < 2; ++a) {
        for (int b = 2; b < 8; ++b) cross = std::max(cross, std::abs(g.g(a, b)));
      }
      t11 = std::max(t11, std::abs(g.g(0, 0) - 1.0));
      t22 = std::max(t22, std::abs(g.g(1, 1) - std::pow(std::sin(c.theta1), 2)));

      const RealMatrix base = metric::closed_metric3(c).g;
      const double a = u(shifts), b = u(shifts);
      CosetChart3 moved = c;
      moved.phi += a + b;
      moved.psi1 += a;
      moved.psi2 -= b;
      const double r = max_abs(metric::closed_metric3(moved).g - base);
      gamma = std::max(gamma, r);
      gamma_rel = std::max(gamma_rel, r / max_abs(base));
      gamma_over += r > kGammaTol ? 1 : 0;
      max_entry = std::max(max_entry, max_abs(base));

      const auto pair = metric::spectral_pair_coefficients(c.theta1, c.theta2);
      gamma_spectral = std::max(
          gamma_spectral, max_abs(metric::closed_metric3(moved, pair).g -
                                  metric::closed_metric3(c, pair).g));
    } catch (const Error& e) {
      errors.push_back(fmt("sample %d: %s", s, e.what()));
    }
  }
  Outcome o;
  const bool block = cross <= kBlockTol && t11 <= kBlockTol && t22 <= kBlockTol;
  o.pass = block && gamma <= kGammaTol && errors.empty();
  o.summary = fmt("block and gamma structure, %d interior 3-level points: cross %.1e, "
                  "|g_t1t1-1| %.1e, |g_t2t2-sin^2 t1| %.1e (tol %.0e); gamma shift %.1e "
                  "(tol %.0e), %.2f s",
                  kSamples, cross, t11, t22, kBlockTol, gamma, kGammaTol, clock.seconds());
  o.details.push_back(fmt("pullback block structure: %s", block ? "ok" : "FAIL"));
  o.details.push_back(fmt("closed form under (phi,psi1,psi2) -> (phi+a+b, psi1+a, psi2-b): "
                          "max abs change %.2e at %d/%d points over %.0e; max change "
                          "relative to max|g| %.2e",
                          gamma, gamma_over, kSamples, kGammaTol, gamma_rel));
  o.details.push_back(fmt("largest closed-form entry at these points %.2e; same shifts "
                          "with -(li-lj)^2/(li+lj) pair coefficients: %.2e",
                          max_entry, gamma_spectral));
  for (const auto& e : errors) o.details.push_back(e);
  return o;
}

// 6. fidelity and Bures distance properties
Outcome criterion6() {
  constexpr int kTriples = 1000;
  Stopwatch clock;
  std::mt19937_64 rng(kSeed);
  double self = 0.0, commuting = 0.0, unitary = 0.0, range = 0.0, triangle = 0.0;
  for (int k = 0; k < kTriples; ++k) {
    const int n = 2 + k % 2;
    const DensityMatrix a = random_state(n, rng);
    const DensityMatrix b = random_state(n, rng);
    const DensityMatrix c = random_state(n, rng);

    self = std::max(self, std::abs(bures::fidelity(a, a) - 1.0));

    const auto p = simplex_point(n, rng);
    const auto q = simplex_point(n, rng);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::sqrt(p[i] * q[i]);
    const double f_diag =
        bures::fidelity(DensityMatrix(diag_matrix(p)), DensityMatrix(diag_matrix(q)));
    commuting = std::max(commuting, std::abs(f_diag - s * s));

    const ComplexMatrix v = haar_unitary(n, rng);
    const DensityMatrix va(matcore::hermitize(v * a.matrix() * v.adjoint()));
    const DensityMatrix vb(matcore::hermitize(v * b.matrix() * v.adjoint()));
    unitary = std::max(unitary, std::abs(bures::fidelity(va, vb) - bures::fidelity(a, b)));

    const double ab = bures::bures_distance(a, b);
    const double bc = bures::bures_distance(b, c);
    const double ac = bures::bures_distance(a, c);
    for (double d : {ab, bc, ac}) {
      range = std::max({range, -d, d - std::sqrt(2.0)});
    }
    triangle = std::max(triangle, ac - (ab + bc));
  }
  Outcome o;
  o.pass = self <= 1e-12 && commuting <= 1e-12 && unitary <= 1e-10 && range <= 0.0 &&
           triangle <= 1e-9;
  o.summary = fmt("fidelity properties on %d random triples (n = 2, 3): %.2f s", kTriples,
                  clock.seconds());
  o.details.push_back(fmt("|F(rho,rho) - 1|                    %.2e (tol 1e-12)", self));
  o.details.push_back(fmt("|F - (sum sqrt(p q))^2|, commuting  %.2e (tol 1e-12)", commuting));
  o.details.push_back(fmt("|F(V a V+, V b V+) - F(a, b)|       %.2e (tol 1e-10)", unitary));
  o.details.push_back(fmt("d_B outside [0, sqrt 2] by          %.2e (tol 0)", range));
  o.details.push_back(fmt("max d(a,c) - d(a,b) - d(b,c)        %.2e (tol 1e-9)", triangle));
  return o;
}

// 7. find_chart round trip on rho3
Outcome criterion7() {
  constexpr int kSamples = 100;
  constexpr double kTol = 1e-8;
  Stopwatch clock;
  cli::SplitMix64 rng(kSeed);
  double worst = 0.0;
  int restarts = 0;
  std::vector<std::string> errors;
  for (int s = 0; s < kSamples; ++s) {
    const auto rho = coset::rho3(CosetChart3::from_coords(cli::sample_interior(3, rng)));
    try {
      const auto fit = cli::find_chart(rho);
      const auto back = coset::rho3(CosetChart3::from_coords(fit.coords));
      worst = std::max(worst, (back.matrix() - rho.matrix()).norm());
      restarts += fit.restarts;
    } catch (const Error& e) {
      errors.push_back(fmt("sample %d: %s", s, e.what()));
    }
  }
  Outcome o;
  o.pass = worst <= kTol && errors.empty();
  o.summary = fmt("find_chart round trip, %d seeded interior states: max Frobenius "
                  "residual %.2e (tol %.0e), %.2f s",
                  kSamples, worst, kTol, clock.seconds());
  o.details.push_back(fmt("random restarts used: %d", restarts));
  for (const auto& e : errors) o.details.push_back(e);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-7)")
      ->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4,
      criterion5, criterion6, criterion7};
  bool all = true;
  for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) {
    if (only != 0 && only != k) continue;
    const Outcome o = criteria[k - 1]();
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", k, o.summary.c_str());
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
