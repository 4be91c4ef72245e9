#include "qgeom/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qgeom/bures.hpp"
#include "qgeom/cli/find_chart.hpp"
#include "qgeom/cli/matrix_io.hpp"
#include "qgeom/cli/prng.hpp"
#include "qgeom/cli/report.hpp"
#include "qgeom/cli/sampling.hpp"
#include "qgeom/coset.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/metric.hpp"

namespace qgeom::cli {

namespace {

using nlohmann::json;
using std::numbers::pi;

constexpr double kPermTol = 1e-12;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfChartRange:
    case ErrorKind::BoundaryTooClose:
      return exit_code::kRange;
    case ErrorKind::ParseError:
      return exit_code::kParse;
    case ErrorKind::InvalidState:
    case ErrorKind::NotHermitian:
    case ErrorKind::NotPSD:
      return exit_code::kInvalidState;
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::DegenerateSupport:
    case ErrorKind::SingularState:
    case ErrorKind::PureState:
      return exit_code::kDegenerate;
    case ErrorKind::FitFailure:
    case ErrorKind::VerificationFailure:
      return exit_code::kTolerance;
    default:
      return exit_code::kUsage;
  }
}

const std::vector<std::string>& all_coordinate_names() {
  static const std::vector<std::string> names{
      "theta", "alpha", "phi", "theta1", "theta2",
      "beta1", "beta2", "psi1", "psi2"};
  return names;
}

OutputFormat format_or(const RunConfig& c, OutputFormat fallback) {
  return c.format.value_or(fallback);
}

// ---------------------------------------------------------------- charts

std::vector<double> chart_point(int n,
                                const std::map<std::string, double>& given) {
  const auto& names = metric::chart_descriptor(n).names;
  for (const auto& [name, value] : given) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw UsageError("coordinate '" + name + "' is not part of the " +
                       std::to_string(n) + "-level chart");
    }
  }
  std::vector<double> point;
  for (const auto& name : names) {
    auto it = given.find(name);
    if (it != given.end()) {
      point.push_back(it->second);
    } else {
      point.push_back(name == "theta2" ? coset::theta2_min() : 0.0);
    }
  }
  if (n == 2) {
    coset::validate(CosetChart2::from_coords(point));
  } else {
    coset::validate(CosetChart3::from_coords(point));
  }
  return point;
}

DensityMatrix build_state(int n, std::span<const double> point) {
  return metric::chart_descriptor(n).build(point);
}

// "theta=0.1,alpha=0.2"
std::map<std::string, double> parse_chart_spec(const std::string& spec,
                                               bool degrees) {
  std::map<std::string, double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::ParseError,
                  "chart item '" + item + "' is not name=value");
    }
    const std::string name = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw Error(ErrorKind::ParseError,
                  "chart value '" + text + "' for " + name + " is not a number");
    }
    out[name] = degrees ? value * pi / 180.0 : value;
  }
  return out;
}

// ---------------------------------------------------------------- output

void write_matrix_pretty(std::ostream& out, const ComplexMatrix& m,
                         bool imag) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "   ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << ' ' << std::setw(13)
          << (imag ? m(r, c).imag() : m(r, c).real());
    }
    out << '\n';
  }
}

void write_tensor_pretty(std::ostream& out, const MetricTensor& g) {
  out << std::setw(9) << "";
  for (const auto& name : g.ordering) out << ' ' << std::setw(12) << name;
  out << '\n';
  for (Eigen::Index r = 0; r < g.g.rows(); ++r) {
    out << std::setw(9) << g.ordering[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < g.g.cols(); ++c) {
      out << ' ' << std::setw(12) << g.g(r, c);
    }
    out << '\n';
  }
}

std::vector<std::string> upper_entry_names(
    const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i; j < names.size(); ++j) {
      out.push_back(MetricTensor::entry_name(names[i], names[j]));
    }
  }
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

// --------------------------------------------------------------- commands

int cmd_rho(const RunConfig& c, std::ostream& out) {
  const auto& names = metric::chart_descriptor(c.n).names;
  const std::vector<double> point = chart_point(c.n, c.chart);
  const DensityMatrix rho = build_state(c.n, point);
  const ComplexMatrix& m = rho.matrix();
  const RealVector& ev = rho.spectral().eigenvalues;
  const double tr = matcore::trace(m).real();

  switch (format_or(c, OutputFormat::Json)) {
    case OutputFormat::Json: {
      json j = matrix_to_json(m);
      j["n"] = c.n;
      j["chart"] = coords_json(names, point);
      j["eigenvalues"] = std::vector<double>(ev.begin(), ev.end());
      j["trace"] = tr;
      j["min_eigenvalue"] = rho.min_eigenvalue();
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << "row,col,re,im\n";
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index col = 0; col < m.cols(); ++col) {
          out << r << ',' << col << ',' << format_csv(m(r, col).real()) << ','
              << format_csv(m(r, col).imag()) << '\n';
        }
      }
      break;
    case OutputFormat::Pretty:
      out << "rho (n=" << c.n << ")\n  re:\n";
      write_matrix_pretty(out, m, false);
      out << "  im:\n";
      write_matrix_pretty(out, m, true);
      out << "eigenvalues:";
      for (double x : ev) out << ' ' << x;
      out << "\ntrace: " << tr << "\nmin eigenvalue: "
          << rho.min_eigenvalue() << '\n';
      break;
  }
  return exit_code::kOk;
}

int cmd_fidelity(const RunConfig& c, std::ostream& out,
                 const std::map<std::string, double>& chart_a,
                 const std::map<std::string, double>& chart_b) {
  auto operand = [&](const std::optional<std::string>& file,
                     const std::map<std::string, double>& chart,
                     bool has_chart, const char* which) {
    if (file.has_value() == has_chart) {
      throw UsageError(std::string("state ") + which +
                       " needs exactly one of --rho-" + which +
                       " and --chart-" + which);
    }
    if (file) return DensityMatrix(read_matrix_file(*file));
    return build_state(c.n, chart_point(c.n, chart));
  };
  const DensityMatrix a = operand(c.rho_a, chart_a, c.chart_a.has_value(), "a");
  const DensityMatrix b = operand(c.rho_b, chart_b, c.chart_b.has_value(), "b");
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "states have dimensions " + std::to_string(a.dim()) + " and " +
                    std::to_string(b.dim()));
  }
  const double f = bures::fidelity(a, b);
  const double d = bures::bures_distance(a, b);
  switch (format_or(c, OutputFormat::Json)) {
    case OutputFormat::Json:
      out << json{{"dim", a.dim()},
                  {"fidelity", f},
                  {"sqrt_fidelity", std::sqrt(f)},
                  {"bures_distance", d}}
                 .dump(2)
          << '\n';
      break;
    case OutputFormat::Csv:
      out << "fidelity,sqrt_fidelity,bures_distance\n"
          << format_csv(f) << ',' << format_csv(std::sqrt(f)) << ','
          << format_csv(d) << '\n';
      break;
    case OutputFormat::Pretty:
      out << std::setprecision(12) << "F      = " << f
          << "\nsqrt F = " << std::sqrt(f) << "\nd_B    = " << d << '\n';
      break;
  }
  return exit_code::kOk;
}

metric::PullbackOptions pullback_options(const RunConfig& c) {
  metric::PullbackOptions o;
  o.step = c.step;
  o.richardson = c.richardson;
  return o;
}

MetricTensor closed_at(int n, std::span<const double> point) {
  if (n == 2) return metric::closed_metric2(CosetChart2::from_coords(point));
  return metric::closed_metric3(CosetChart3::from_coords(point));
}

int cmd_metric(const RunConfig& c, std::ostream& out) {
  const auto& chart = metric::chart_descriptor(c.n);
  const std::vector<double> point = chart_point(c.n, c.chart);
  std::optional<MetricTensor> closed, pullback;
  if (c.method != Method::Pullback) closed = closed_at(c.n, point);
  if (c.method != Method::Closed) {
    pullback = metric::pullback_metric(point, chart, pullback_options(c));
  }
  std::optional<double> max_dev;
  std::string worst;
  if (closed && pullback) {
    const RealMatrix diff = (closed->g - pullback->g).cwiseAbs();
    Eigen::Index r = 0, col = 0;
    max_dev = diff.maxCoeff(&r, &col);
    worst = MetricTensor::entry_name(chart.names[static_cast<std::size_t>(r)],
                                     chart.names[static_cast<std::size_t>(col)]);
  }

  switch (format_or(c, OutputFormat::Json)) {
    case OutputFormat::Json: {
      json j = {{"n", c.n},
                {"point", coords_json(chart.names, point)},
                {"ordering", chart.names}};
      if (closed) j["closed"] = to_json(*closed);
      if (pullback) j["pullback"] = to_json(*pullback);
      if (max_dev) {
        j["max_abs_dev"] = *max_dev;
        j["max_abs_dev_entry"] = worst;
        j["tol"] = c.tol;
        j["within_tol"] = *max_dev <= c.tol;
      }
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv: {
      std::vector<std::string> header{"method"};
      header.insert(header.end(), chart.names.begin(), chart.names.end());
      const auto entries = upper_entry_names(chart.names);
      header.insert(header.end(), entries.begin(), entries.end());
      header.push_back("sqrt_det_g");
      write_csv_row(out, header);
      auto row = [&](const char* label, const MetricTensor& g) {
        std::vector<std::string> cells{label};
        for (double x : point) cells.push_back(format_csv(x));
        for (Eigen::Index i = 0; i < g.g.rows(); ++i) {
          for (Eigen::Index k = i; k < g.g.cols(); ++k) {
            cells.push_back(format_csv(g.g(i, k)));
          }
        }
        cells.push_back(format_csv(metric::volume_element(g)));
        write_csv_row(out, cells);
      };
      if (closed) row("closed", *closed);
      if (pullback) row("pullback", *pullback);
      break;
    }
    case OutputFormat::Pretty:
      out << std::setprecision(8);
      if (closed) {
        out << "closed form:\n";
        write_tensor_pretty(out, *closed);
        out << "sqrt det g = " << metric::volume_element(*closed) << "\n";
      }
      if (pullback) {
        out << "pullback:\n";
        write_tensor_pretty(out, *pullback);
        out << "sqrt det g = " << metric::volume_element(*pullback) << "\n";
      }
      if (max_dev) {
        out << std::setprecision(3) << "max |delta| = " << *max_dev << " ("
            << worst << ")\n";
      }
      break;
  }
  return exit_code::kOk;
}

struct EntryAggregate {
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
  std::optional<double> max_spectral_abs_dev;
  int worst_sample = -1;
};

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const auto& chart = metric::chart_descriptor(c.n);
  const auto entry_names = upper_entry_names(chart.names);
  std::map<std::string, EntryAggregate> entries;
  for (const auto& name : entry_names) entries[name];

  metric::ValidateOptions options;
  options.pullback = pullback_options(c);

  SplitMix64 rng(c.seed);
  double max_abs = 0.0, max_rel = 0.0, dittmann = 0.0, volume = 0.0;
  std::optional<double> closed_gamma, pullback_gamma, spectral_max;
  std::vector<std::string> errors;
  std::optional<metric::ValidationReport> worst;

  auto bump = [](std::optional<double>& acc, std::optional<double> x) {
    if (x) acc = std::max(acc.value_or(0.0), *x);
  };

  for (int s = 0; s < c.samples; ++s) {
    const std::vector<double> point = sample_interior(c.n, rng);
    metric::ValidationReport r;
    try {
      r = metric::validate(point, c.n, options);
    } catch (const Error& e) {
      errors.push_back("sample " + std::to_string(s) + ": " + e.what());
      continue;
    }
    for (const auto& msg : r.errors) {
      errors.push_back("sample " + std::to_string(s) + ": " + msg);
    }
    for (const auto& e : r.entries) {
      EntryAggregate& a = entries[e.name];
      if (e.abs_dev > a.max_abs_dev || a.worst_sample < 0) {
        a.max_abs_dev = std::max(a.max_abs_dev, e.abs_dev);
        a.worst_sample = s;
      }
      a.max_rel_dev = std::max(a.max_rel_dev, e.rel_dev);
      bump(a.max_spectral_abs_dev, e.spectral_abs_dev);
    }
    dittmann = std::max(dittmann, r.dittmann_max_rel_dev);
    volume = std::max(volume, r.volume_rel_dev);
    bump(closed_gamma, r.closed_gamma_residual);
    bump(pullback_gamma, r.pullback_gamma_residual);
    bump(spectral_max, r.spectral_max_abs_dev);
    max_rel = std::max(max_rel, r.max_rel_dev);
    if (!worst || r.max_abs_dev > max_abs) worst = r;
    max_abs = std::max(max_abs, r.max_abs_dev);
  }

  std::vector<std::string> failing;
  for (const auto& name : entry_names) {
    if (!(entries[name].max_abs_dev <= c.tol)) failing.push_back(name);
  }
  const bool gamma_ok = !closed_gamma || *closed_gamma <= c.tol;
  const bool pullback_gamma_ok = !pullback_gamma || *pullback_gamma <= c.tol;
  const bool pass = failing.empty() && errors.empty() && dittmann <= c.tol &&
                    gamma_ok && pullback_gamma_ok;

  switch (format_or(c, OutputFormat::Json)) {
    case OutputFormat::Json: {
      json ej = json::array();
      for (const auto& name : entry_names) {
        const EntryAggregate& a = entries[name];
        json row = {{"name", name},
                    {"max_abs_dev", a.max_abs_dev},
                    {"max_rel_dev", a.max_rel_dev},
                    {"worst_sample", a.worst_sample},
                    {"pass", a.max_abs_dev <= c.tol}};
        if (a.max_spectral_abs_dev) {
          row["max_spectral_abs_dev"] = *a.max_spectral_abs_dev;
        }
        ej.push_back(std::move(row));
      }
      json j = {{"n", c.n},
                {"samples", c.samples},
                {"seed", c.seed},
                {"step", c.step},
                {"richardson", c.richardson},
                {"tol", c.tol},
                {"pass", pass},
                {"max_abs_dev", max_abs},
                {"max_rel_dev", max_rel},
                {"dittmann_max_rel_dev", dittmann},
                {"volume_max_rel_dev", volume},
                {"failing_entries", failing},
                {"entries", std::move(ej)},
                {"errors", errors}};
      if (spectral_max) j["spectral_max_abs_dev"] = *spectral_max;
      if (closed_gamma) j["closed_gamma_residual"] = *closed_gamma;
      if (pullback_gamma) j["pullback_gamma_residual"] = *pullback_gamma;
      if (worst) j["worst_point"] = to_json(*worst);
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << "name,max_abs_dev,max_rel_dev,max_spectral_abs_dev,pass\n";
      for (const auto& name : entry_names) {
        const EntryAggregate& a = entries[name];
        out << name << ',' << format_csv(a.max_abs_dev) << ','
            << format_csv(a.max_rel_dev) << ','
            << (a.max_spectral_abs_dev ? format_csv(*a.max_spectral_abs_dev)
                                       : "")
            << ',' << (a.max_abs_dev <= c.tol ? "true" : "false") << '\n';
      }
      break;
    case OutputFormat::Pretty:
      out << std::setprecision(3) << (pass ? "PASS" : "FAIL") << " n=" << c.n
          << " samples=" << c.samples << " seed=" << c.seed
          << " tol=" << c.tol << "\nmax |delta| = " << max_abs
          << "\ndittmann vs hubner (rel) = " << dittmann << '\n';
      if (closed_gamma) {
        out << "gamma shifts: closed " << *closed_gamma << ", pullback "
            << pullback_gamma.value_or(0.0) << '\n';
      }
      for (const auto& name : entry_names) {
        const EntryAggregate& a = entries[name];
        out << "  " << std::left << std::setw(20) << name << std::right
            << std::setw(11) << a.max_abs_dev;
        if (a.max_spectral_abs_dev) {
          out << "  spectral T: " << std::setw(10) << *a.max_spectral_abs_dev;
        }
        out << (a.max_abs_dev <= c.tol ? "" : "  FAIL") << '\n';
      }
      for (const auto& e : errors) out << "error: " << e << '\n';
      break;
  }
  return pass ? exit_code::kOk : exit_code::kTolerance;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
  const auto& chart = metric::chart_descriptor(c.n);
  const auto coord_it =
      std::find(chart.names.begin(), chart.names.end(), c.scan_coord);
  if (coord_it == chart.names.end()) {
    throw UsageError("--coord '" + c.scan_coord + "' is not part of the " +
                     std::to_string(c.n) + "-level chart");
  }
  if (c.scan_points < 1) throw UsageError("--points must be at least 1");
  const auto coord_index =
      static_cast<std::size_t>(coord_it - chart.names.begin());

  const auto all_entries = upper_entry_names(chart.names);
  std::vector<std::string> selected =
      c.scan_entries.empty() ? all_entries : c.scan_entries;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& name : selected) {
    bool found = false;
    for (const auto& a : chart.names) {
      for (const auto& b : chart.names) {
        if (!found && MetricTensor::entry_name(a, b) == name) {
          pairs.emplace_back(a, b);
          found = true;
        }
      }
    }
    if (!found) throw UsageError("unknown metric entry '" + name + "'");
  }

  std::map<std::string, double> base = c.chart;
  base.erase(c.scan_coord);
  std::vector<double> point = chart_point(c.n, base);

  std::vector<std::string> columns = chart.names;
  columns.insert(columns.end(), selected.begin(), selected.end());
  columns.push_back("sqrt_det_g");
  if (c.method == Method::Both) columns.push_back("max_abs_dev");

  std::vector<std::vector<double>> rows;
  for (int k = 0; k < c.scan_points; ++k) {
    const double t =
        c.scan_points == 1 ? 0.0 : static_cast<double>(k) / (c.scan_points - 1);
    point[coord_index] = c.scan_from + t * (c.scan_to - c.scan_from);
    std::map<std::string, double> at;
    for (std::size_t i = 0; i < point.size(); ++i) at[chart.names[i]] = point[i];
    chart_point(c.n, at);

    std::optional<MetricTensor> closed, pullback;
    if (c.method != Method::Pullback) closed = closed_at(c.n, point);
    if (c.method != Method::Closed) {
      pullback = metric::pullback_metric(point, chart, pullback_options(c));
    }
    const MetricTensor& g = closed ? *closed : *pullback;
    std::vector<double> row = point;
    for (const auto& [a, b] : pairs) row.push_back(g.at(a, b));
    row.push_back(metric::volume_element(g));
    if (closed && pullback) {
      row.push_back((closed->g - pullback->g).cwiseAbs().maxCoeff());
    }
    rows.push_back(std::move(row));
  }

  switch (format_or(c, OutputFormat::Csv)) {
    case OutputFormat::Csv:
      write_csv_row(out, columns);
      for (const auto& row : rows) {
        std::vector<std::string> cells;
        for (double x : row) cells.push_back(format_csv(x));
        write_csv_row(out, cells);
      }
      break;
    case OutputFormat::Json:
      out << json{{"n", c.n},
                  {"coord", c.scan_coord},
                  {"method", c.method == Method::Closed     ? "closed"
                             : c.method == Method::Pullback ? "pullback"
                                                            : "both"},
                  {"columns", columns},
                  {"rows", rows}}
                 .dump(2)
          << '\n';
      break;
    case OutputFormat::Pretty:
      out << std::setprecision(8);
      for (const auto& col : columns) out << std::setw(16) << col;
      out << '\n';
      for (const auto& row : rows) {
        for (double x : row) out << std::setw(16) << x;
        out << '\n';
      }
      break;
  }
  return exit_code::kOk;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

int cmd_permtest(const RunConfig& c, std::ostream& out) {
  const auto table = coset::permutation_table();
  int passed = 0;
  json ids = json::array();
  std::vector<std::pair<std::string, double>> summary;
  for (const auto& id : table) {
    const double residual =
        c.strict_phase ? id.stated_phase_residual : id.torus_residual;
    const bool ok = residual <= kPermTol;
    passed += ok ? 1 : 0;
    summary.emplace_back(id.label, residual);
    json phases = json::array();
    for (Eigen::Index i = 0; i < id.torus_phases.size(); ++i) {
      phases.push_back(complex_json(id.torus_phases(i)));
    }
    ids.push_back({{"label", id.label},
                   {"permutation", matrix_to_json(id.permutation)},
                   {"omega", matrix_to_json(id.omega)},
                   {"stated_phase", complex_json(id.stated_phase)},
                   {"stated_phase_residual", id.stated_phase_residual},
                   {"torus_phases", std::move(phases)},
                   {"torus_residual", id.torus_residual},
                   {"residual", residual},
                   {"pass", ok}});
  }
  const int total = static_cast<int>(table.size());
  const char* mode = c.strict_phase ? "stated-phase" : "torus";

  switch (format_or(c, OutputFormat::Json)) {
    case OutputFormat::Json:
      out << json{{"mode", mode},
                  {"tol", kPermTol},
                  {"passed", passed},
                  {"total", total},
                  {"pass", passed == total},
                  {"identities", std::move(ids)}}
                 .dump(2)
          << '\n';
      break;
    case OutputFormat::Csv:
      out << "label,stated_phase_residual,torus_residual,pass\n";
      for (const auto& id : table) {
        const double residual =
            c.strict_phase ? id.stated_phase_residual : id.torus_residual;
        out << id.label << ',' << format_csv(id.stated_phase_residual) << ','
            << format_csv(id.torus_residual) << ','
            << (residual <= kPermTol ? "true" : "false") << '\n';
      }
      break;
    case OutputFormat::Pretty:
      out << std::setprecision(3) << "mode: " << mode << '\n';
      for (const auto& [label, residual] : summary) {
        out << "  " << std::left << std::setw(8) << label << std::right
            << " residual " << std::setw(10) << residual
            << (residual <= kPermTol ? "  PASS" : "  FAIL") << '\n';
      }
      out << passed << '/' << total << " identities\n";
      break;
  }
  return passed == total ? exit_code::kOk : exit_code::kTolerance;
}

int cmd_find_chart(const RunConfig& c, std::ostream& out, bool n_given) {
  if (!c.matrix_path) throw UsageError("find-chart needs --matrix");
  const DensityMatrix rho(read_matrix_file(*c.matrix_path));
  if (n_given && rho.dim() != c.n) {
    throw UsageError("--n " + std::to_string(c.n) + " but the matrix is " +
                     std::to_string(rho.dim()) + "x" +
                     std::to_string(rho.dim()));
  }
  FitOptions options;
  options.seed = c.seed;
  const ChartFit fit = find_chart(rho, options);
  const auto& names = metric::chart_descriptor(fit.n).names;

  switch (format_or(c, OutputFormat::Json)) {
    case OutputFormat::Json:
      out << json{{"n", fit.n},
                  {"chart", coords_json(names, fit.coords)},
                  {"eigenvalues", fit.eigenvalues},
                  {"residual", fit.residual},
                  {"restarts", fit.restarts}}
                 .dump(2)
          << '\n';
      break;
    case OutputFormat::Csv: {
      std::vector<std::string> header = names;
      header.push_back("residual");
      write_csv_row(out, header);
      std::vector<std::string> cells;
      for (double x : fit.coords) cells.push_back(format_csv(x));
      cells.push_back(format_csv(fit.residual));
      write_csv_row(out, cells);
      break;
    }
    case OutputFormat::Pretty:
      out << std::setprecision(12);
      for (std::size_t i = 0; i < names.size(); ++i) {
        out << std::left << std::setw(8) << names[i] << std::right << ' '
            << fit.coords[i] << '\n';
      }
      out << std::setprecision(3) << "residual " << fit.residual << '\n';
      break;
  }
  return exit_code::kOk;
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out) {
  switch (config.command) {
    case Command::Rho:
      return cmd_rho(config, out);
    case Command::Fidelity: {
      std::map<std::string, double> a, b;
      if (config.chart_a) a = parse_chart_spec(*config.chart_a, false);
      if (config.chart_b) b = parse_chart_spec(*config.chart_b, false);
      return cmd_fidelity(config, out, a, b);
    }
    case Command::Metric:
      return cmd_metric(config, out);
    case Command::Validate:
      return cmd_validate(config, out);
    case Command::Scan:
      return cmd_scan(config, out);
    case Command::Permtest:
      return cmd_permtest(config, out);
    case Command::FindChart:
      return cmd_find_chart(config, out, true);
  }
  return exit_code::kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Coset charts, fidelity and the Bures metric for 2- and "
               "3-level density matrices"};
  app.name("qgeom");
  app.require_subcommand(1);

  RunConfig config;
  std::optional<int> n;
  std::map<std::string, std::optional<double>> coords;
  for (const auto& name : all_coordinate_names()) coords[name];
  std::string format, method;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool degrees = false;

  auto add_n = [&](CLI::App* sub) {
    sub->add_option("--n", n, "Number of levels (2 or 3)")
        ->check(CLI::IsMember({2, 3}));
  };
  auto add_coords = [&](CLI::App* sub) {
    for (const auto& name : all_coordinate_names()) {
      sub->add_option("--" + name, coords[name], "Chart coordinate");
    }
  };
  auto add_degrees = [&](CLI::App* sub) {
    sub->add_flag("--degrees", degrees, "Read angles in degrees");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format, "json, csv or pretty")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));
    sub->add_option("--out", config.output_path, "Write output to this path");
  };
  auto add_numerics = [&](CLI::App* sub) {
    sub->add_option("--step", config.step, "Finite-difference step");
    sub->add_flag("--richardson", config.richardson,
                  "Richardson-extrapolate the tangents");
  };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", method, "closed, pullback or both")
        ->check(CLI::IsMember({"closed", "pullback", "both"}));
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "Absolute tolerance (env BURES_TOL)");
  };

  auto* rho = app.add_subcommand("rho", "Build rho = Omega D Omega^dagger");
  add_n(rho);
  add_coords(rho);
  add_degrees(rho);
  add_output(rho);

  auto* fid = app.add_subcommand("fidelity", "Fidelity and Bures distance");
  add_n(fid);
  add_degrees(fid);
  add_output(fid);
  fid->add_option("--rho-a", config.rho_a, "Matrix file for state a");
  fid->add_option("--rho-b", config.rho_b, "Matrix file for state b");
  fid->add_option("--chart-a", config.chart_a, "Chart for state a, k=v,...");
  fid->add_option("--chart-b", config.chart_b, "Chart for state b, k=v,...");

  auto* met = app.add_subcommand("metric", "Metric tensor at a chart point");
  add_n(met);
  add_coords(met);
  add_degrees(met);
  add_output(met);
  add_numerics(met);
  add_method(met);
  add_tol(met);

  auto* val = app.add_subcommand(
      "validate", "Closed form vs pullback on random interior points");
  add_n(val);
  add_output(val);
  add_numerics(val);
  add_tol(val);
  val->add_option("--samples", config.samples, "Number of sample points");
  val->add_option("--seed", seed, "PRNG seed");

  auto* scan = app.add_subcommand("scan", "Sweep one coordinate");
  add_n(scan);
  add_coords(scan);
  add_degrees(scan);
  add_output(scan);
  add_numerics(scan);
  add_method(scan);
  scan->add_option("--coord", config.scan_coord, "Coordinate to sweep")
      ->required();
  scan->add_option("--from", config.scan_from, "Start value")->required();
  scan->add_option("--to", config.scan_to, "End value")->required();
  scan->add_option("--points", config.scan_points, "Number of points")
      ->required();
  scan->add_option("--entries", config.scan_entries,
                   "Entries to emit, e.g. g_theta_theta")
      ->delimiter(',');

  auto* perm = app.add_subcommand("permtest", "Permutation identities");
  add_output(perm);
  perm->add_flag("--strict-phase", config.strict_phase,
                 "Require the stated global phase instead of a torus phase");

  auto* fc = app.add_subcommand("find-chart", "Chart coordinates of a state");
  add_n(fc);
  add_output(fc);
  fc->add_option("--matrix", config.matrix_path, "Matrix file")->required();
  fc->add_option("--seed", seed, "Seed for fit restarts");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  try {
    const std::map<std::string, Command> by_name{
        {"rho", Command::Rho},           {"fidelity", Command::Fidelity},
        {"metric", Command::Metric},     {"validate", Command::Validate},
        {"scan", Command::Scan},         {"permtest", Command::Permtest},
        {"find-chart", Command::FindChart}};
    config.command = by_name.at(app.get_subcommands().front()->get_name());
    config.n = n.value_or(2);
    if (!format.empty()) {
      config.format = format == "json"  ? OutputFormat::Json
                      : format == "csv" ? OutputFormat::Csv
                                        : OutputFormat::Pretty;
    }
    if (config.command == Command::Scan) config.method = Method::Closed;
    if (!method.empty()) {
      config.method = method == "closed"     ? Method::Closed
                      : method == "pullback" ? Method::Pullback
                                             : Method::Both;
    }
    if (tol) {
      config.tol = *tol;
    } else if (const char* env = std::getenv("BURES_TOL")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0') {
        throw Error(ErrorKind::ParseError,
                    std::string("BURES_TOL='") + env + "' is not a number");
      }
      config.tol = v;
    }
    if (!(config.tol >= 0.0)) throw UsageError("tolerance must be >= 0");
    if (seed) config.seed = *seed;
    if (!(config.step > 0.0 && config.step <= 1e-2)) {
      throw UsageError("--step must lie in (0, 1e-2]");
    }
    if (config.samples < 1) throw UsageError("--samples must be at least 1");

    const double unit = degrees ? pi / 180.0 : 1.0;
    for (const auto& [name, value] : coords) {
      if (value) config.chart[name] = *value * unit;
    }
    if (degrees && config.command == Command::Scan) {
      config.scan_from *= unit;
      config.scan_to *= unit;
    }

    RunConfig resolved = config;
    if (degrees && config.command == Command::Fidelity) {
      // chart specs are converted here so execute() sees radians only
      auto convert = [&](std::optional<std::string>& spec) {
        if (!spec) return;
        std::string joined;
        for (const auto& [k, v] : parse_chart_spec(*spec, true)) {
          if (!joined.empty()) joined += ',';
          joined += k + "=" + format_csv(v);
        }
        spec = joined;
      };
      convert(resolved.chart_a);
      convert(resolved.chart_b);
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (resolved.output_path) {
      file.open(*resolved.output_path);
      if (!file) throw UsageError("cannot open " + *resolved.output_path);
      sink = &file;
    }
    const int code =
        resolved.command == Command::FindChart
            ? cmd_find_chart(resolved, *sink, n.has_value())
            : execute(resolved, *sink);
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.kind());
  }
}

}  // namespace qgeom::cli
