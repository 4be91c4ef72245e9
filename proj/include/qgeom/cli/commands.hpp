#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qgeom::cli {

enum class Command { Rho, Fidelity, Metric, Validate, Scan, Permtest, FindChart };
enum class OutputFormat { Json, Csv, Pretty };
enum class Method { Closed, Pullback, Both };

/// Process exit codes.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kRange = 2;
inline constexpr int kParse = 3;
inline constexpr int kInvalidState = 4;
inline constexpr int kDegenerate = 5;
inline constexpr int kTolerance = 6;
}  // namespace exit_code

struct RunConfig {
  Command command = Command::Rho;
  int n = 2;
  // Coordinates given on the command line, in radians.
  std::map<std::string, double> chart;
  std::uint64_t seed = 0;
  int samples = 100;
  double step = 1e-5;
  std::optional<OutputFormat> format;
  std::optional<std::string> output_path;

  Method method = Method::Both;
  double tol = 1e-6;
  bool richardson = false;
  bool strict_phase = false;

  std::string scan_coord;
  double scan_from = 0.0;
  double scan_to = 0.0;
  int scan_points = 0;
  std::vector<std::string> scan_entries;

  std::optional<std::string> rho_a, rho_b;
  std::optional<std::string> chart_a, chart_b;
  std::optional<std::string> matrix_path;
};

/// Parses argv-style arguments (without the program name) and runs the
/// command. Results go to `out` (or --out), diagnostics to `err`.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Runs an already parsed configuration. Throws qgeom::Error.
int execute(const RunConfig& config, std::ostream& out);

}  // namespace qgeom::cli
