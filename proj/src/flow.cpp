#include "grainflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "grainflow/energy.hpp"
#include "spectral.hpp"

namespace grainflow {
namespace {

// Negative real-axis extent of the classical RK4 stability region is about
// 2.785; keep a margin for the variable coefficient 1/(1 + u_x^2) and the
// slow drift of sigma(alpha) inside a step.
constexpr double kRk4StableExtent = 2.5;

struct RawRate {
  std::vector<double> du;
  double dalpha = 0.0;
};

// Scratch buffers reused across right-hand-side evaluations on one thread.
struct RhsScratch {
  std::vector<double> ux, v, w;
  void resize(std::size_t n) {
    if (ux.size() != n) {
      ux.assign(n, 0.0);
      v.assign(n, 0.0);
      w.assign(n, 0.0);
    }
  }
};

void differentiate_into(std::span<const double> f, std::span<double> out, DiffScheme scheme) {
  if (scheme == DiffScheme::Spectral) {
    spectral::differentiate(f, out);
    return;
  }
  const auto d = derivative(f, scheme);
  std::copy(d.begin(), d.end(), out.begin());
}

// Writes u_t into du and returns alpha_t.
double rate_into(std::span<const double> u, double alpha, const SigmaModel& model,
                 const FlowParams& params, std::span<double> du) {
  thread_local RhsScratch s;
  const std::size_t n = u.size();
  s.resize(n);
  differentiate_into(u, s.ux, params.scheme);
  double len = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    s.v[j] = std::sqrt(1.0 + s.ux[j] * s.ux[j]);
    s.w[j] = s.ux[j] / s.v[j];
    len += s.v[j];
  }
  len /= static_cast<double>(n);
  differentiate_into(s.w, du, params.scheme);
  const double c = params.mu * model(alpha);
  for (std::size_t j = 0; j < n; ++j) du[j] *= c * s.v[j];
  return -params.gamma * model.d1(alpha) * len;
}

RawRate raw_rhs(std::span<const double> u, double alpha, const SigmaModel& model,
                const FlowParams& params) {
  RawRate r{std::vector<double>(u.size()), 0.0};
  r.dalpha = rate_into(u, alpha, model, params, r.du);
  return r;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct Advance {
  double alpha;
  double mean_drift;
};

// One RK4 step of size dt from (u, alpha) written into u_out (unprojected).
Advance rk4_into(std::span<const double> u0, double alpha0, const SigmaModel& model,
                 const FlowParams& params, double dt, std::span<double> u_out) {
  const std::size_t n = u0.size();
  thread_local std::vector<double> k1, k2, k3, k4, stage;
  for (auto* b : {&k1, &k2, &k3, &k4, &stage}) b->resize(n);
  auto shifted = [&](const std::vector<double>& k, double f) {
    for (std::size_t j = 0; j < n; ++j) stage[j] = u0[j] + f * dt * k[j];
    return std::span<const double>(stage);
  };
  const double a1 = rate_into(u0, alpha0, model, params, k1);
  const double a2 = rate_into(shifted(k1, 0.5), alpha0 + 0.5 * dt * a1, model, params, k2);
  const double a3 = rate_into(shifted(k2, 0.5), alpha0 + 0.5 * dt * a2, model, params, k3);
  const double a4 = rate_into(shifted(k3, 1.0), alpha0 + dt * a3, model, params, k4);

  double drift = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double incr = dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    u_out[j] = u0[j] + incr;
    drift += incr;
  }
  return {alpha0 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4), drift / static_cast<double>(n)};
}

double max_wavenumber_sq(const FlowParams& params) {
  const double n = static_cast<double>(params.n);
  if (params.scheme == DiffScheme::Central) return 4.0 * n * n;
  const double k = 2.0 * std::numbers::pi * (n / 2.0 - 1.0);
  return k * k;
}

struct StepOutcome {
  State state;
  double mean_drift;
  std::size_t substeps;
};

StepOutcome advance(const State& state, const SigmaModel& model, const FlowParams& params) {
  const std::size_t m = stable_substeps(params, model, state.alpha);
  const double h = params.dt / static_cast<double>(m);
  std::vector<double> u(state.u.values().begin(), state.u.values().end());
  std::vector<double> next(u.size());
  double alpha = state.alpha;
  double drift = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Advance a = rk4_into(u, alpha, model, params, h, next);
    if (!all_finite(next) || !std::isfinite(a.alpha)) {
      throw BlowUpError("non-finite state during RK4 step", Trajectory{}, state);
    }
    drift += a.mean_drift;
    u.swap(next);
    alpha = a.alpha;
  }
  return {State{GridFunction::from_samples(std::move(u)), alpha}, drift, m};
}

// Diagnostics plus the cancellation-free L - 1, sharing one u_x evaluation.
Diagnostics diagnose_with_excess(const State& state, const SigmaModel& model,
                                 const FlowParams& params, double& excess) {
  const auto& u = state.u;
  const std::size_t n = u.size();
  const auto ux = derivative(u, params.scheme);
  const auto uxx = second_derivative(u, params.scheme);
  const RawRate rate = raw_rhs(u.values(), state.alpha, model, params);

  Diagnostics d;
  double weighted = 0.0;
  excess = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double q = ux[j] * ux[j];
    const double v = std::sqrt(1.0 + q);
    excess += q / (1.0 + v);
    weighted += rate.du[j] * rate.du[j] / v;  // (u_t / v)^2 v
    d.sup_v = std::max(d.sup_v, v);
    d.sup_ux_sq = std::max(d.sup_ux_sq, q);
    d.sup_curvature = std::max(d.sup_curvature, std::abs(uxx[j]) / (v * v * v));
  }
  excess /= static_cast<double>(n);
  d.length = 1.0 + excess;
  d.energy = model(state.alpha) * d.length;
  d.mean_u = mean(u.values());
  d.dissipation_rhs = -rate.dalpha * rate.dalpha / params.gamma -
                      weighted / static_cast<double>(n) / params.mu;

  // Gradient norms from one derivative and one second derivative of u_part.
  const auto grad = frechet_derivative(u, state.alpha, model);
  const double gx = l2_norm(derivative(grad.u_part));
  const double gxx = l2_norm(second_derivative(grad.u_part));
  const double ga = grad.alpha_part;
  d.grad_norm_x = std::sqrt(gx * gx + ga * ga);
  d.grad_norm_y = std::sqrt(gx * gx + gxx * gxx + ga * ga);
  return d;
}

}  // namespace

double cfl_limit(const FlowParams& params, double sigma_max) {
  const double h = 1.0 / static_cast<double>(params.n);
  return params.cfl_safety * h * h / (params.mu * sigma_max);
}

void validate_flow_params(const FlowParams& params, const SigmaModel& model, double alpha0) {
  if (!(params.mu > 0.0) || !(params.gamma > 0.0) || !std::isfinite(params.mu) ||
      !std::isfinite(params.gamma)) {
    throw FlowParamError("nonpositive_mobility", "mobilities mu and gamma must be > 0");
  }
  if (!is_valid_grid_size(params.n)) {
    throw FlowParamError("invalid_grid", "n must be a power of two >= 8");
  }
  if (!(params.cfl_safety > 0.0) || params.cfl_safety > 1.0) {
    throw FlowParamError("cfl_violation", "cfl_safety must lie in (0, 1]");
  }
  if (!(params.dt >= 0.0) || !std::isfinite(params.dt) || !(params.t_end >= 0.0) ||
      !std::isfinite(params.t_end)) {
    throw FlowParamError("invalid_time", "dt and t_end must be finite and >= 0");
  }
  const double limit = cfl_limit(params, model.max_along_flow(alpha0));
  if (params.dt > limit) {
    throw FlowParamError("cfl_violation", "dt = " + std::to_string(params.dt) +
                                              " exceeds the CFL bound " + std::to_string(limit));
  }
}

StateRate rhs(const State& state, const SigmaModel& model, const FlowParams& params) {
  RawRate r = raw_rhs(state.u.values(), state.alpha, model, params);
  return {std::move(r.du), r.dalpha};
}

State rk4_step(const State& state, const SigmaModel& model, const FlowParams& params, double dt) {
  std::vector<double> next(state.u.size());
  const Advance a = rk4_into(state.u.values(), state.alpha, model, params, dt, next);
  if (!all_finite(next) || !std::isfinite(a.alpha)) {
    throw BlowUpError("non-finite state during RK4 step", Trajectory{}, state);
  }
  return {GridFunction::from_samples(std::move(next)), a.alpha};
}

std::size_t stable_substeps(const FlowParams& params, const SigmaModel& model, double alpha) {
  const double lambda = params.mu * model(alpha) * max_wavenumber_sq(params);
  const double ratio = params.dt * lambda / kRk4StableExtent;
  if (!(ratio > 1.0)) return 1;
  return static_cast<std::size_t>(std::ceil(ratio));
}

State step(const State& state, const SigmaModel& model, const FlowParams& params) {
  return advance(state, model, params).state;
}

Diagnostics diagnose(const State& state, const SigmaModel& model, const FlowParams& params) {
  double excess = 0.0;
  return diagnose_with_excess(state, model, params, excess);
}

Trajectory evolve(const State& initial, const SigmaModel& model, const FlowParams& params) {
  validate_flow_params(params, model, initial.alpha);
  if (initial.u.size() != params.n) {
    throw FlowParamError("invalid_grid", "initial state grid size does not match params.n");
  }

  const auto total_steps = static_cast<std::size_t>(
      params.dt > 0.0 ? std::llround(params.t_end / params.dt) : 0);
  const std::size_t record_stride =
      params.record_stride > 0 ? params.record_stride : (params.t_end <= 10.0 ? 1 : 10);
  const std::size_t total_records = total_steps / record_stride + 1;
  const std::size_t snapshot_stride =
      params.snapshot_stride > 0 ? params.snapshot_stride
                                 : std::max<std::size_t>(1, total_records / 1000);

  Trajectory traj;
  traj.record_interval = params.dt * static_cast<double>(record_stride);
  traj.times.reserve(total_records);
  traj.alpha.reserve(total_records);
  traj.length_excess.reserve(total_records);
  traj.diagnostics.reserve(total_records);

  auto record = [&](const State& s, double t, bool force_snapshot) {
    const std::size_t idx = traj.times.size();
    traj.times.push_back(t);
    traj.alpha.push_back(s.alpha);
    double excess = 0.0;
    traj.diagnostics.push_back(diagnose_with_excess(s, model, params, excess));
    traj.length_excess.push_back(excess);
    if (idx % snapshot_stride == 0 || force_snapshot) {
      traj.snapshot_records.push_back(idx);
      traj.snapshots.push_back(s);
    }
  };

  State state = initial;
  record(state, 0.0, total_steps == 0);
  for (std::size_t i = 1; i <= total_steps; ++i) {
    std::optional<StepOutcome> out;
    try {
      out.emplace(advance(state, model, params));
    } catch (const BlowUpError& e) {
      if (traj.snapshot_records.empty() || traj.snapshot_records.back() != traj.size() - 1) {
        // keep the last recorded state reachable even if it was not a snapshot
        traj.snapshot_records.push_back(traj.size() - 1);
        traj.snapshots.push_back(state);
      }
      throw BlowUpError("solver blow-up at t = " + std::to_string(static_cast<double>(i) * params.dt),
                        std::move(traj), state);
    }
    state = std::move(out->state);
    traj.max_mean_drift = std::max(traj.max_mean_drift, std::abs(out->mean_drift));
    traj.substeps += out->substeps;
    ++traj.steps;
    if (i % record_stride == 0 || i == total_steps) {
      record(state, static_cast<double>(i) * params.dt, i == total_steps);
    }
  }
  if (traj.snapshot_records.back() != traj.size() - 1) {
    traj.snapshot_records.push_back(traj.size() - 1);
    traj.snapshots.push_back(state);
  }

  // dE/dt: centered differences, one-sided at the two ends.
  const std::size_t m = traj.size();
  const auto& t = traj.times;
  auto e = [&](std::size_t k) { return traj.diagnostics[k].energy; };
  if (m >= 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t lo = k == 0 ? 0 : k - 1;
      const std::size_t hi = k == m - 1 ? k : k + 1;
      traj.diagnostics[k].dissipation_lhs = (e(hi) - e(lo)) / (t[hi] - t[lo]);
    }
  }
  return traj;
}

std::vector<double> dissipation_residual(const Trajectory& traj) {
  if (traj.size() < 3) {
    throw std::invalid_argument("dissipation residual needs at least 3 records");
  }
  std::vector<double> r(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    r[k] = std::abs(traj.diagnostics[k].dissipation_lhs - traj.diagnostics[k].dissipation_rhs);
  }
  return r;
}

double max_interior_residual(const Trajectory& traj) {
  const auto r = dissipation_residual(traj);
  return *std::max_element(r.begin() + 1, r.end() - 1);
}

GradientBoundReport gradient_bound_check(const Trajectory& traj, const SigmaModel& model) {
  GradientBoundReport rep;
  if (traj.size() == 0) return rep;
  const auto& d0 = traj.diagnostics.front();
  rep.v_bound = model(traj.alpha.front()) / model.positivity_floor() * d0.sup_v * d0.sup_v;
  rep.ux_sq_bound = d0.sup_ux_sq;
  rep.max_ux_sq_excess = -d0.sup_ux_sq;
  double prev_v = d0.sup_v;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& d = traj.diagnostics[k];
    rep.max_sup_v = std::max(rep.max_sup_v, d.sup_v);
    rep.max_ux_sq_excess = std::max(rep.max_ux_sq_excess, d.sup_ux_sq - d0.sup_ux_sq);
    const bool ok = d.sup_v <= rep.v_bound && d.sup_ux_sq <= d0.sup_ux_sq + 1e-8;
    if (!ok) {
      rep.holds = false;
      rep.violations.push_back(k);
    }
    if (d.sup_v > prev_v + 1e-14) rep.sup_v_monotone = false;
    prev_v = d.sup_v;
  }
  return rep;
}

double max_energy_increase(const Trajectory& traj) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.size(); ++k) {
    worst = std::max(worst, traj.diagnostics[k].energy - traj.diagnostics[k - 1].energy);
  }
  return traj.size() > 1 ? worst : 0.0;
}

}  // namespace grainflow
