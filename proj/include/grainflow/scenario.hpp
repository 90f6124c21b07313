#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "grainflow/analysis.hpp"
#include "grainflow/flow.hpp"
#include "grainflow/io.hpp"
#include "grainflow/sigma.hpp"

namespace grainflow {

/// Scenario tasks, declared in execution order.
enum class Task { Simulate, Dissipation, LsFit, Stability, Length, InequalitySuite };
std::string to_string(Task t);

struct FourierMode {
  int k = 1;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Initial interface u0.
///   Zero          u0 = 0
///   Sine          u0 = amplitude sin(2 pi frequency x)
///   FourierModes  u0 = sum amplitude_k sin(2 pi k x + phase_k)
///   FromFile      GridFunction JSON ({"n", "values"})
struct InitialData {
  enum class Kind { Zero, Sine, FourierModes, FromFile };
  Kind kind = Kind::Zero;
  double amplitude = 0.0;
  int frequency = 1;
  std::vector<FourierMode> modes;
  std::filesystem::path path;
};

/// Samples the initial data on n points (mean removed).
GridFunction make_initial_u(const InitialData& init, std::size_t n);

struct AnalysisOptions {
  double ls_radius = 0.1;
  std::size_t ls_count = 400;
  std::size_t ls_max_mode = 4;
  /// Unset: Mixed, or UOnly for a Constant model.
  std::optional<PerturbationMode> ls_mode;
  /// Unset: the critical point nearest to the final (or initial) misorientation.
  std::optional<double> equilibrium_alpha;
  double dissipation_tolerance = 1e-6;
};

struct ScenarioConfig {
  std::string name = "scenario";
  SigmaModel sigma = SigmaModel::default_model();
  InitialData initial_u;
  double alpha0 = 0.0;
  FlowParams flow;
  std::vector<Task> tasks;  // sorted, without duplicates
  std::filesystem::path output_dir = "grainflow_out";
  std::uint64_t seed = 0;
  AnalysisOptions analysis;

  bool has(Task t) const;
};

/// Validates eagerly. Relative file paths resolve against base_dir. Throws
/// ConfigError; flow parameter problems keep the FlowParamError code.
ScenarioConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {});
ScenarioConfig parse_config_file(const std::filesystem::path& path);

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitBlowUp = 2;
inline constexpr int kExitConfig = 3;

/// A named pass/fail check written to summary.json.
struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // how value compares to threshold, e.g. "<=", ">=", "in"
};

struct ScenarioResult {
  int exit_code = kExitPass;
  std::vector<Assertion> assertions;
  std::vector<std::filesystem::path> artifacts;  // excluding summary.json
  Json summary;
};

/// Runs the configured tasks in dependency order and writes the artifacts
/// plus summary.json into config.output_dir.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Sampling and regression only (ls_samples.csv, ls_fit.json, summary.json).
ScenarioResult run_ls_fit(const ScenarioConfig& config);

/// Built-in property suite: inequality checks, derivative consistency,
/// critical-point identities, LS fits at the non-degenerate equilibria and a
/// short flow run. Writes summary.json into out_dir.
ScenarioResult run_verify_suite(std::uint64_t seed, const std::filesystem::path& out_dir);

/// Sets the log level from GRAINFLOW_LOG (error, info, debug; default info).
void configure_logging();

}  // namespace grainflow
