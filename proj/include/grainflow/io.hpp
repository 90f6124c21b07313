#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "grainflow/analysis.hpp"
#include "grainflow/flow.hpp"
#include "grainflow/grid.hpp"
#include "grainflow/sigma.hpp"
#include "grainflow/verification.hpp"

namespace grainflow {

using Json = nlohmann::json;

/// Rejected input. `code` is a stable machine-readable tag such as
/// "malformed_json", "unknown_sigma_kind", "positivity_floor", "cfl_violation",
/// "nonpositive_mobility", "invalid_field", "missing_file"; `field` names the
/// offending JSON field when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string code, std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        code_(std::move(code)),
        field_(std::move(field)) {}
  const std::string& code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string code_;
  std::string field_;
};

/// {"n": N, "values": [...]}. Doubles round-trip bit-exactly.
Json to_json(const GridFunction& u);
GridFunction grid_function_from_json(const Json& j);

/// {"alpha": a, "u": {...}}
Json to_json(const State& s);
State state_from_json(const Json& j);

/// {"kind": "trig_periodic", "base": 1.0, "amplitude": 0.5, "frequency": 2.0} and
/// {"kind": "constant", "value"}, {"kind": "quadratic_convex", "base", "curvature"},
/// {"kind": "quartic_well", "base", "coefficient"}.
Json to_json(const SigmaModel& m);
SigmaModel sigma_from_json(const Json& j);

Json to_json(const LsFit& f);
Json to_json(const StabilityReport& r);
Json to_json(const LengthReport& r);
Json to_json(const DecayClassification& d);
Json to_json(const GradientBoundReport& r);
Json to_json(const CheckResult& r);

/// Header t,energy,diss_lhs,diss_rhs,mean_u,sup_v,sup_ux_sq,length,sup_curvature,grad_x,grad_y
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// Header grad_y_norm,energy_gap
void write_ls_samples_csv(std::ostream& os, std::span<const LsSample> samples);

/// Throws ConfigError("malformed_json") on parse failure and
/// ConfigError("missing_file") when the file cannot be opened.
Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

}  // namespace grainflow
