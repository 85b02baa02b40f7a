#pragma once

#include "hjb/problem.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hjb {

/// Suite names in execution order.
const std::vector<std::string>& suite_order();

/// Numerical settings of a run. Unset optionals take preset-dependent
/// defaults (see resolve()).
struct RunSettings {
  std::optional<int> nodes;
  std::optional<double> extent;
  std::optional<double> eps;
  int samples = 1000;
  double radius = 5.0;
  std::vector<double> mu{0.5, 0.9, 0.99};
  std::vector<double> R{1.0, 5.0};
  int trials = 20;
  int steps = 200;
  int levels = 3;
  int conv_nodes = 41;
  double conv_T = 0.5;
  double riccati_dt = 1e-3;
  /// Number of solution profiles kept by the solve suite.
  int profiles = 11;
};

struct ExperimentConfig {
  std::string preset;
  std::map<std::string, double> problem_params;
  RunSettings run;
  /// Empty optional selects the suites of the preset descriptor.
  std::optional<std::vector<std::string>> suites;
  std::string output_dir;
  std::uint64_t seed = 12345;

  /// {"preset", "params", "suites", "output_dir", "seed"}. Keys of "params"
  /// are preset parameters or run settings; anything else, an unknown suite,
  /// a suite the preset does not support or an invalid preset value throws
  /// ConfigInvalid (UnknownPreset for the name).
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  /// Normalised form with every default filled in.
  [[nodiscard]] std::string to_json() const;
  /// Suites to run, in execution order.
  [[nodiscard]] std::vector<std::string> selected_suites() const;
};

struct SuiteResult {
  std::string name;
  /// "passed", "failed" or "error" (the suite threw).
  std::string status;
  /// JSON object with the metrics the verdict is computed from.
  std::string metrics;
  /// Paths relative to the run directory.
  std::vector<std::string> artifacts;
  std::string error;
  double seconds = 0.0;

  [[nodiscard]] bool passed() const { return status == "passed"; }
};

struct RunRecord {
  std::string output_dir;
  std::string config;
  std::vector<SuiteResult> suites;
  /// False when some suite threw.
  bool completed = true;

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] std::string summary_path() const;
};

/// Runs the selected suites, isolating failures, and writes
/// <output_dir>/summary.json (deterministic for a fixed config) and
/// <output_dir>/timing.json (wall-clock). Throws ConfigInvalid or IoError.
RunRecord run_experiment(const ExperimentConfig& config);

/// Reads summary.json from a run directory or the file itself.
RunRecord load_run_record(const std::string& path);

enum class PlotKind { Profiles, Trajectory, Envelopes, Convergence };
/// Throws ConfigInvalid.
PlotKind plot_kind_from_string(const std::string& name);

/// Writes long-format CSV (and the trajectory sidecar JSON) under
/// <output_dir>/plots and returns the paths. Throws MissingArtifact when the
/// run did not produce the underlying data.
std::vector<std::string> emit_plot_data(const RunRecord& record, PlotKind what);

}  // namespace hjb
