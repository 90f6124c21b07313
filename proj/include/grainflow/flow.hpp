#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "grainflow/grid.hpp"
#include "grainflow/sigma.hpp"

namespace grainflow {

/// Phase-space point (u, alpha) of the coupled flow.
struct State {
  GridFunction u;
  double alpha = 0.0;
};

struct FlowParams {
  double mu = 1.0;     // curve mobility
  double gamma = 1.0;  // misorientation mobility
  double dt = 1e-5;
  double t_end = 5.0;
  std::size_t n = 256;
  double cfl_safety = 1.0;
  DiffScheme scheme = DiffScheme::Spectral;
  /// Steps between diagnostic records; 0 picks 1 for t_end <= 10, else 10.
  std::size_t record_stride = 0;
  /// Records between stored state snapshots; 0 keeps about 1000 snapshots.
  std::size_t snapshot_stride = 0;
};

/// Invalid flow parameters. `code` is one of "cfl_violation",
/// "nonpositive_mobility", "invalid_time", "invalid_grid".
class FlowParamError : public std::invalid_argument {
 public:
  FlowParamError(std::string code, const std::string& what)
      : std::invalid_argument(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// dt bound cfl_safety * h^2 / (mu * sigma_max) with h = 1/n.
double cfl_limit(const FlowParams& params, double sigma_max);

/// Throws FlowParamError when params are unusable for a flow started at alpha0.
void validate_flow_params(const FlowParams& params, const SigmaModel& model, double alpha0);

struct StateRate {
  std::vector<double> du;  // u_t samples (not mean-projected)
  double dalpha = 0.0;
};

/// Right-hand side in quasi-divergence form:
///   w = u_x / sqrt(1 + u_x^2),  u_t = mu sigma(alpha) sqrt(1 + u_x^2) w_x,
///   alpha_t = -gamma sigma'(alpha) int sqrt(1 + u_x^2) dx.
StateRate rhs(const State& state, const SigmaModel& model, const FlowParams& params);

/// One classical RK4 step of size dt (no stability substepping); u is
/// re-projected to zero mean.
State rk4_step(const State& state, const SigmaModel& model, const FlowParams& params, double dt);

/// Number of RK4 substeps used to advance one step of size params.dt from a
/// state at misorientation alpha, chosen so that dt_sub * lambda_max stays
/// inside the RK4 stability interval for the stiffest resolved mode.
std::size_t stable_substeps(const FlowParams& params, const SigmaModel& model, double alpha);

/// Advances by params.dt using stable_substeps() RK4 substeps.
/// Throws BlowUpError if any sample becomes non-finite.
State step(const State& state, const SigmaModel& model, const FlowParams& params);

/// Per-record structural diagnostics.
struct Diagnostics {
  double energy = 0.0;
  double dissipation_lhs = 0.0;  // numerical dE/dt from recorded energies
  double dissipation_rhs = 0.0;  // -(1/gamma) alpha_t^2 - (1/mu) int (u_t/v)^2 v dx
  double mean_u = 0.0;
  double sup_v = 1.0;            // sup sqrt(1 + u_x^2)
  double sup_ux_sq = 0.0;
  double length = 1.0;
  double sup_curvature = 0.0;    // sup |u_xx| / (1 + u_x^2)^{3/2}
  double grad_norm_x = 0.0;
  double grad_norm_y = 0.0;
};

Diagnostics diagnose(const State& state, const SigmaModel& model, const FlowParams& params);

/// Recorded flow history. Scalars (time, alpha, L - 1, diagnostics) are kept
/// for every record; full states only every snapshot_stride records.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> alpha;
  std::vector<double> length_excess;
  std::vector<Diagnostics> diagnostics;

  std::vector<std::size_t> snapshot_records;  // record index of each snapshot
  std::vector<State> snapshots;

  double record_interval = 0.0;   // time between consecutive records
  double max_mean_drift = 0.0;    // max |mean of the unprojected u update| per step
  std::size_t steps = 0;
  std::size_t substeps = 0;

  std::size_t size() const noexcept { return times.size(); }
  const State& final_state() const { return snapshots.back(); }
};

/// Solver blow-up. Carries the trajectory recorded so far and the last state
/// with finite samples.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, Trajectory prefix, State last_valid)
      : std::runtime_error(what), prefix_(std::move(prefix)), last_valid_(std::move(last_valid)) {}
  const Trajectory& prefix() const noexcept { return prefix_; }
  const State& last_valid() const noexcept { return last_valid_; }

 private:
  Trajectory prefix_;
  State last_valid_;
};

/// Integrates to params.t_end. The final state is always stored as a snapshot.
Trajectory evolve(const State& initial, const SigmaModel& model, const FlowParams& params);

/// |dissipation_lhs - dissipation_rhs| per record. Throws std::invalid_argument
/// for fewer than 3 records. Entries 0 and size-1 use one-sided differences.
std::vector<double> dissipation_residual(const Trajectory& traj);

/// Largest residual over interior records.
double max_interior_residual(const Trajectory& traj);

struct GradientBoundReport {
  bool holds = true;
  double v_bound = 0.0;          // sigma(alpha0) / C1 * sup v(0)^2
  double max_sup_v = 0.0;
  double ux_sq_bound = 0.0;      // sup u_x^2(0)
  double max_ux_sq_excess = 0.0; // max over records of sup u_x^2(t) - sup u_x^2(0)
  bool sup_v_monotone = true;    // observed only, never asserted
  std::vector<std::size_t> violations;
};

/// Checks sup v(t) <= sigma(alpha0)/C1 sup v(0)^2 and the maximum principle
/// sup u_x^2(t) <= sup u_x^2(0) + 1e-8 at every record.
GradientBoundReport gradient_bound_check(const Trajectory& traj, const SigmaModel& model);

/// Largest energy increase between consecutive records.
double max_energy_increase(const Trajectory& traj);

}  // namespace grainflow
