#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavedecay/analysis.hpp"
#include "wavedecay/diagnostics.hpp"
#include "wavedecay/medium.hpp"
#include "wavedecay/solver.hpp"

namespace wavedecay {

inline constexpr int kSchemaVersion = 1;

struct ProfileSpec {
  DimMode mode = DimMode::Line1D;
  ProfileFamily family = ProfileFamily::Constant;
  double L = 1.0;
  double a = 0.0;
};

/// Which checks to run and with what tolerances. A check is enabled when its
/// key is present in the config.
struct ChecksSpec {
  std::vector<double> R_list;
  std::optional<double> conservation_tol;
  std::optional<double> morawetz_tol;
  std::optional<double> weighted_energy_tol;
  bool pairing_constant = false;
  std::optional<double> antiderivative_tol;
  double plateau_tol = 0.05;
  bool decay = false;
  double window_start = 1.0 / 3.0;  // fractions of T_final
  double window_end = 1.0;
  double growth_tol = 1.1;
  bool gronwall = false;
  double gronwall_t0 = 0.5;  // fraction of T_final
  bool spectral = false;
  double gamma = 1.0;
  std::vector<double> theta{1.0};
};

struct MatrixSpec {
  std::vector<double> a;
  std::vector<double> L;
  std::vector<double> h;
  bool empty() const { return a.empty() && L.empty() && h.empty(); }
};

struct ExperimentConfig {
  std::string name = "run";
  ProfileSpec profile;
  DataSpec data;
  SolverConfig solver;
  ChecksSpec checks;
  MatrixSpec matrix;
  std::string output_dir;   // empty: decided by the caller
  bool write_csv = true;
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Checks that need no numerics (R > L, ranges, names). Throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

/// Cartesian product over the matrix lists; a config without a matrix
/// expands to itself. Names get a deterministic suffix per point.
std::vector<ExperimentConfig> expand_matrix(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the canonical JSON dump, as hex.
std::string config_digest(const ExperimentConfig& cfg);

struct CheckOutcome {
  std::string name;
  std::string status;  // "pass", "fail" or "skipped:<reason>"
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;

  bool failed() const { return status == "fail"; }
};

struct RunOutcome {
  ExperimentConfig config;
  bool complete = false;
  std::optional<std::size_t> unstable_step;
  nlohmann::json summary;  // deterministic content
  DiagnosticsRecord record;
  std::vector<CheckOutcome> checks;
  double wall_seconds = 0.0;
  std::size_t steps = 0;

  bool all_passed() const;
};

/// Runs one (already expanded) config in memory.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Runs independent configs on up to `parallel` worker threads. Results are
/// in input order; the first exception (in input order) is rethrown.
std::vector<RunOutcome> run_all(const std::vector<ExperimentConfig>& cfgs, std::size_t parallel);

/// Writes config.json, diagnostics.csv, summary.json and timing.json.
void write_artifacts(const RunOutcome& out, const std::filesystem::path& dir);

std::string csv_header(const std::vector<double>& R_list);

/// Exit codes of the command-line runner.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInvalidConfig = 2,
  kExitUnstable = 3,
  kExitIncomplete = 4,
};

/// Reads a run directory, prints a text table to `text` and writes the plot
/// files. Returns kExitIncomplete if the run is missing or incomplete.
int report_run(const std::filesystem::path& dir, std::string& text);

/// Outcome of a verification battery.
struct SuiteReport {
  std::string suite;
  std::vector<CheckOutcome> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();
/// Throws ConfigError for an unknown suite.
SuiteReport verify_suite(const std::string& name, double resolution_scale = 1.0);

std::string format_number(double v);

}  // namespace wavedecay
