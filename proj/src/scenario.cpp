#include "grainflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "grainflow/verification.hpp"

namespace grainflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string field_name(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

double read_number(const Json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("invalid_field", field_name(where, key), "expected a number");
  return v.get<double>();
}

std::uint64_t read_unsigned(const Json& obj, const char* key, const std::string& where,
                            std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("invalid_field", field_name(where, key), "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string read_string(const Json& obj, const char* key, const std::string& where,
                        const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("invalid_field", field_name(where, key), "expected a string");
  return v.get<std::string>();
}

const Json& read_object(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_object()) throw ConfigError("invalid_field", field_name(where, key), "expected an object");
  return v;
}

Task parse_task(const std::string& s) {
  for (Task t : {Task::Simulate, Task::Dissipation, Task::LsFit, Task::Stability, Task::Length,
                 Task::InequalitySuite}) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError("invalid_field", "tasks", "unknown task '" + s + "'");
}

PerturbationMode parse_mode(const std::string& s) {
  if (s == "mixed") return PerturbationMode::Mixed;
  if (s == "u_only") return PerturbationMode::UOnly;
  if (s == "alpha_only") return PerturbationMode::AlphaOnly;
  throw ConfigError("invalid_field", "analysis.ls_mode", "expected mixed, u_only or alpha_only");
}

std::string to_string(PerturbationMode m) {
  switch (m) {
    case PerturbationMode::Mixed: return "mixed";
    case PerturbationMode::UOnly: return "u_only";
    case PerturbationMode::AlphaOnly: return "alpha_only";
  }
  return "mixed";
}

InitialData parse_initial(const Json& j, const std::filesystem::path& base_dir) {
  InitialData init;
  if (j.is_string()) {
    if (j.get<std::string>() != "zero") {
      throw ConfigError("invalid_field", "initial_u", "only \"zero\" may be given as a string");
    }
    return init;
  }
  if (!j.is_object()) throw ConfigError("invalid_field", "initial_u", "expected an object");
  const auto kind = read_string(j, "kind", "initial_u", "");
  if (kind == "zero") return init;
  if (kind == "sine") {
    init.kind = InitialData::Kind::Sine;
    init.amplitude = read_number(j, "amplitude", "initial_u", 0.0);
    const auto f = read_number(j, "frequency", "initial_u", 1.0);
    if (!(f >= 1.0) || f != std::floor(f)) {
      throw ConfigError("invalid_field", "initial_u.frequency", "must be a positive integer");
    }
    init.frequency = static_cast<int>(f);
    return init;
  }
  if (kind == "fourier_modes") {
    init.kind = InitialData::Kind::FourierModes;
    if (!j.contains("modes") || !j.at("modes").is_array()) {
      throw ConfigError("invalid_field", "initial_u.modes", "expected an array");
    }
    for (const auto& m : j.at("modes")) {
      if (!m.is_object()) throw ConfigError("invalid_field", "initial_u.modes", "expected objects");
      FourierMode fm;
      const double k = read_number(m, "k", "initial_u.modes", 0.0);
      if (!(k >= 1.0) || k != std::floor(k)) {
        throw ConfigError("invalid_field", "initial_u.modes.k", "must be a positive integer");
      }
      fm.k = static_cast<int>(k);
      fm.amplitude = read_number(m, "amplitude", "initial_u.modes", 0.0);
      fm.phase = read_number(m, "phase", "initial_u.modes", 0.0);
      init.modes.push_back(fm);
    }
    return init;
  }
  if (kind == "from_file") {
    init.kind = InitialData::Kind::FromFile;
    std::filesystem::path p = read_string(j, "path", "initial_u", "");
    if (p.empty()) throw ConfigError("invalid_field", "initial_u.path", "missing");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) {
      throw ConfigError("missing_file", "initial_u.path", p.string() + " does not exist");
    }
    init.path = p;
    return init;
  }
  throw ConfigError("invalid_field", "initial_u.kind", "unknown kind '" + kind + "'");
}

std::string flow_field_for(const std::string& code) {
  if (code == "cfl_violation") return "flow.dt";
  if (code == "nonpositive_mobility") return "flow.mu/flow.gamma";
  if (code == "invalid_grid") return "flow.n";
  return "flow.t_end";
}

Json to_json(const Assertion& a) {
  return {{"name", a.name},
          {"passed", a.passed},
          {"value", a.value},
          {"threshold", a.threshold},
          {"relation", a.relation}};
}

Json flow_json(const FlowParams& p) {
  return {{"mu", p.mu},
          {"gamma", p.gamma},
          {"dt", p.dt},
          {"t_end", p.t_end},
          {"n", p.n},
          {"cfl_safety", p.cfl_safety},
          {"scheme", p.scheme == DiffScheme::Spectral ? "spectral" : "central"}};
}

// Collects assertions and artifacts for one run.
class Recorder {
 public:
  explicit Recorder(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void check(std::string name, double value, double threshold, const std::string& relation) {
    bool ok = false;
    if (relation == "<=") ok = value <= threshold;
    else if (relation == ">=") ok = value >= threshold;
    else if (relation == "<") ok = value < threshold;
    else if (relation == "==") ok = value == threshold;
    spdlog::debug("{} = {} ({} {}) {}", name, value, relation, threshold, ok ? "pass" : "FAIL");
    result_.assertions.push_back({std::move(name), ok, value, threshold, relation});
  }

  void check_range(const std::string& name, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    result_.assertions.push_back({name, ok, value, lo, "in [" + format_double(lo) + ", " + format_double(hi) + "]"});
  }

  void check_result(const std::string& prefix, const CheckResult& r) {
    result_.assertions.push_back({prefix + r.name, r.passed, r.worst, r.threshold, r.relation});
  }

  void json_artifact(const std::string& file, const Json& j) {
    write_json_file(dir_ / file, j);
    result_.artifacts.emplace_back(file);
  }

  void text_artifact(const std::string& file, const std::string& text) {
    write_text_file(dir_ / file, text);
    result_.artifacts.emplace_back(file);
  }

  bool all_passed() const {
    return std::all_of(result_.assertions.begin(), result_.assertions.end(),
                       [](const Assertion& a) { return a.passed; });
  }

  ScenarioResult finish(Json summary, int exit_code) {
    if (exit_code == kExitPass && !all_passed()) exit_code = kExitAssertion;
    static const char* const status[] = {"pass", "assertion_failure", "blow_up", "config_error"};
    summary["status"] = status[exit_code];
    summary["exit_code"] = exit_code;
    Json list = Json::array();
    for (const auto& a : result_.assertions) list.push_back(to_json(a));
    summary["assertions"] = std::move(list);
    Json files = Json::array();
    for (const auto& f : result_.artifacts) files.push_back(f.string());
    summary["artifacts"] = std::move(files);
    write_json_file(dir_ / "summary.json", summary);
    result_.summary = std::move(summary);
    result_.exit_code = exit_code;
    return std::move(result_);
  }

 private:
  std::filesystem::path dir_;
  ScenarioResult result_;
};

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  return os.str();
}

std::string samples_csv(const std::vector<LsSample>& samples) {
  std::ostringstream os;
  write_ls_samples_csv(os, samples);
  return os.str();
}

double max_abs_mean(const Trajectory& traj) {
  double m = 0.0;
  for (const auto& d : traj.diagnostics) m = std::max(m, std::abs(d.mean_u));
  return m;
}

void flow_assertions(Recorder& rec, const Trajectory& traj, const SigmaModel& model) {
  const auto bounds = gradient_bound_check(traj, model);
  rec.check("flow.energy_monotone", max_energy_increase(traj), 1e-12, "<=");
  rec.check("flow.mean_conservation", std::max(max_abs_mean(traj), traj.max_mean_drift), 1e-12, "<=");
  rec.check("flow.gradient_estimate", bounds.max_sup_v, bounds.v_bound, "<=");
  rec.check("flow.max_principle", bounds.max_ux_sq_excess, 1e-8, "<=");
}

void ls_assertions(Recorder& rec, const std::string& prefix, const LsFit& fit,
                   const std::vector<LsSample>& samples, bool degenerate) {
  if (!degenerate) {
    rec.check_range(prefix + "ls_exponent", fit.theta_unclamped, 0.45, 0.55);
    rec.check(prefix + "ls_regression_quality", fit.r_squared, 0.99, ">=");
  }
  rec.check(prefix + "ls_constant_floor", fit.c_constant, 1e-6, ">=");
  rec.check(prefix + "ls_inequality", verify_ls_inequality(samples, fit) ? 1.0 : 0.0, 1.0, "==");
}

bool is_degenerate(const SigmaModel& model, double alpha_bar) {
  return model.kind() != SigmaModel::Kind::Constant &&
         std::abs(model.d2(alpha_bar)) < kDegeneracyThreshold;
}

struct LsOutcome {
  std::vector<LsSample> samples;
  LsFit fit;
};

LsOutcome sample_and_fit(const ScenarioConfig& cfg, double alpha_bar, Rng& rng) {
  LsSamplingOptions opts;
  opts.max_mode = cfg.analysis.ls_max_mode;
  opts.mode = cfg.analysis.ls_mode.value_or(cfg.sigma.kind() == SigmaModel::Kind::Constant
                                                ? PerturbationMode::UOnly
                                                : PerturbationMode::Mixed);
  const State eq{GridFunction(cfg.flow.n), alpha_bar};
  LsOutcome out;
  out.samples = ls_samples(eq, cfg.sigma, cfg.analysis.ls_radius, cfg.analysis.ls_count, rng, opts);
  out.fit = fit_ls_exponent(out.samples);
  return out;
}

Json config_json(const ScenarioConfig& cfg) {
  Json tasks = Json::array();
  for (Task t : cfg.tasks) tasks.push_back(to_string(t));
  return {{"name", cfg.name},
          {"seed", cfg.seed},
          {"sigma", to_json(cfg.sigma)},
          {"alpha0", cfg.alpha0},
          {"flow", flow_json(cfg.flow)},
          {"tasks", std::move(tasks)}};
}

double pick_equilibrium(const ScenarioConfig& cfg, double alpha_final) {
  if (cfg.analysis.equilibrium_alpha) return *cfg.analysis.equilibrium_alpha;
  return nearest_critical_point(cfg.sigma, alpha_final).alpha_bar;
}

}  // namespace

std::string to_string(Task t) {
  switch (t) {
    case Task::Simulate: return "simulate";
    case Task::Dissipation: return "dissipation";
    case Task::LsFit: return "ls_fit";
    case Task::Stability: return "stability";
    case Task::Length: return "length";
    case Task::InequalitySuite: return "inequality_suite";
  }
  return "simulate";
}

bool ScenarioConfig::has(Task t) const {
  return std::find(tasks.begin(), tasks.end(), t) != tasks.end();
}

GridFunction make_initial_u(const InitialData& init, std::size_t n) {
  const auto x = grid_points(n);
  std::vector<double> u(n, 0.0);
  switch (init.kind) {
    case InitialData::Kind::Zero: break;
    case InitialData::Kind::Sine:
      for (std::size_t j = 0; j < n; ++j) {
        u[j] = init.amplitude * std::sin(2.0 * std::numbers::pi * init.frequency * x[j]);
      }
      break;
    case InitialData::Kind::FourierModes:
      for (const auto& m : init.modes) {
        for (std::size_t j = 0; j < n; ++j) {
          u[j] += m.amplitude * std::sin(2.0 * std::numbers::pi * m.k * x[j] + m.phase);
        }
      }
      break;
    case InitialData::Kind::FromFile: {
      auto g = grid_function_from_json(read_json_file(init.path));
      if (g.size() != n) {
        throw ConfigError("invalid_field", "initial_u.path",
                          "file has " + std::to_string(g.size()) + " samples, flow.n is " +
                              std::to_string(n));
      }
      return g;
    }
  }
  return GridFunction::from_samples(std::move(u));
}

ScenarioConfig parse_config(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("malformed_json", "", "config must be a JSON object");
  ScenarioConfig cfg;
  cfg.name = read_string(j, "name", "", cfg.name);
  if (!j.contains("sigma")) throw ConfigError("invalid_field", "sigma", "missing");
  cfg.sigma = sigma_from_json(j.at("sigma"));
  if (!(cfg.sigma.sampled_min(-std::numbers::pi, std::numbers::pi) >= cfg.sigma.positivity_floor())) {
    throw ConfigError("positivity_floor", "sigma", "sampled sigma falls below its floor");
  }
  if (j.contains("initial_u")) cfg.initial_u = parse_initial(j.at("initial_u"), base_dir);
  cfg.alpha0 = read_number(j, "alpha0", "", 0.0);
  if (!std::isfinite(cfg.alpha0)) throw ConfigError("invalid_field", "alpha0", "must be finite");

  if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty()) {
    throw ConfigError("invalid_field", "tasks", "expected a non-empty array");
  }
  for (const auto& t : j.at("tasks")) {
    if (!t.is_string()) throw ConfigError("invalid_field", "tasks", "expected task names");
    cfg.tasks.push_back(parse_task(t.get<std::string>()));
  }
  std::sort(cfg.tasks.begin(), cfg.tasks.end());
  cfg.tasks.erase(std::unique(cfg.tasks.begin(), cfg.tasks.end()), cfg.tasks.end());

  cfg.output_dir = read_string(j, "output_dir", "", cfg.output_dir.string());
  cfg.seed = read_unsigned(j, "seed", "", cfg.seed);

  FlowParams& p = cfg.flow;
  bool dt_given = false;
  bool n_given = false;
  if (j.contains("flow")) {
    const auto& f = read_object(j, "flow", "");
    p.mu = read_number(f, "mu", "flow", p.mu);
    p.gamma = read_number(f, "gamma", "flow", p.gamma);
    p.t_end = read_number(f, "t_end", "flow", p.t_end);
    p.cfl_safety = read_number(f, "cfl_safety", "flow", p.cfl_safety);
    n_given = f.contains("n");
    p.n = read_unsigned(f, "n", "flow", p.n);
    p.record_stride = read_unsigned(f, "record_stride", "flow", 0);
    p.snapshot_stride = read_unsigned(f, "snapshot_stride", "flow", 0);
    const auto scheme = read_string(f, "scheme", "flow", "spectral");
    if (scheme == "spectral") p.scheme = DiffScheme::Spectral;
    else if (scheme == "central") p.scheme = DiffScheme::Central;
    else throw ConfigError("invalid_field", "flow.scheme", "expected spectral or central");
    dt_given = f.contains("dt");
    p.dt = read_number(f, "dt", "flow", p.dt);
  }
  if (cfg.initial_u.kind == InitialData::Kind::FromFile && !n_given) {
    p.n = grid_function_from_json(read_json_file(cfg.initial_u.path)).size();
  }
  if (!dt_given && p.mu > 0.0 && is_valid_grid_size(p.n)) {
    const double limit = cfl_limit(p, cfg.sigma.max_along_flow(cfg.alpha0));
    if (p.t_end > 0.0 && std::isfinite(limit)) {
      p.dt = p.t_end / std::ceil(p.t_end / limit);
    } else {
      p.dt = limit;
    }
  }
  try {
    validate_flow_params(p, cfg.sigma, cfg.alpha0);
  } catch (const FlowParamError& e) {
    throw ConfigError(e.code(), flow_field_for(e.code()), e.what());
  }
  if (cfg.initial_u.kind == InitialData::Kind::FromFile) make_initial_u(cfg.initial_u, p.n);

  if (j.contains("analysis")) {
    const auto& a = read_object(j, "analysis", "");
    auto& o = cfg.analysis;
    o.ls_radius = read_number(a, "ls_radius", "analysis", o.ls_radius);
    o.ls_count = read_unsigned(a, "ls_samples", "analysis", o.ls_count);
    o.ls_max_mode = read_unsigned(a, "ls_max_mode", "analysis", o.ls_max_mode);
    if (a.contains("ls_mode")) o.ls_mode = parse_mode(read_string(a, "ls_mode", "analysis", ""));
    if (a.contains("equilibrium_alpha")) {
      o.equilibrium_alpha = read_number(a, "equilibrium_alpha", "analysis", 0.0);
    }
    o.dissipation_tolerance =
        read_number(a, "dissipation_tolerance", "analysis", o.dissipation_tolerance);
    if (!(o.ls_radius > 0.0)) throw ConfigError("invalid_field", "analysis.ls_radius", "must be > 0");
    if (o.ls_max_mode == 0 || 2 * o.ls_max_mode >= p.n) {
      throw ConfigError("invalid_field", "analysis.ls_max_mode", "must lie in [1, n/2)");
    }
  }
  return cfg;
}

ScenarioConfig parse_config_file(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  Recorder rec(cfg.output_dir);
  Json summary = config_json(cfg);
  Rng rng(cfg.seed);
  const auto& model = cfg.sigma;

  const bool needs_flow = cfg.has(Task::Simulate) || cfg.has(Task::Dissipation) ||
                          cfg.has(Task::Stability) || cfg.has(Task::Length);
  std::optional<Trajectory> traj;
  Json analysis = Json::object();

  if (needs_flow) {
    const State initial{make_initial_u(cfg.initial_u, cfg.flow.n), cfg.alpha0};
    spdlog::info("[{}] evolving to t = {} with dt = {}", cfg.name, cfg.flow.t_end, cfg.flow.dt);
    try {
      traj = evolve(initial, model, cfg.flow);
    } catch (const BlowUpError& e) {
      spdlog::error("[{}] {}", cfg.name, e.what());
      rec.text_artifact("trajectory.csv", trajectory_csv(e.prefix()));
      rec.json_artifact("final_state.json", to_json(e.last_valid()));
      summary["blow_up"] = e.what();
      return rec.finish(std::move(summary), kExitBlowUp);
    }
    rec.text_artifact("trajectory.csv", trajectory_csv(*traj));
    rec.json_artifact("final_state.json", to_json(traj->final_state()));
    flow_assertions(rec, *traj, model);
    analysis["gradient_bounds"] = to_json(gradient_bound_check(*traj, model));
    analysis["steps"] = traj->steps;
    analysis["substeps"] = traj->substeps;
  }

  if (cfg.has(Task::Dissipation)) {
    if (traj->size() >= 3) {
      const double res = max_interior_residual(*traj);
      analysis["dissipation"] = {{"max_interior_residual", res},
                                 {"tolerance", cfg.analysis.dissipation_tolerance}};
      rec.check("flow.dissipation_identity", res, cfg.analysis.dissipation_tolerance, "<=");
    } else {
      rec.check("flow.dissipation_identity", kInf, cfg.analysis.dissipation_tolerance, "<=");
    }
  }

  const double alpha_bar = pick_equilibrium(cfg, traj ? traj->alpha.back() : cfg.alpha0);
  summary["equilibrium_alpha"] = alpha_bar;
  const bool degenerate = is_degenerate(model, alpha_bar);

  std::optional<LsOutcome> ls;
  if (cfg.has(Task::LsFit) || cfg.has(Task::Stability) || cfg.has(Task::Length)) {
    try {
      ls = sample_and_fit(cfg, alpha_bar, rng);
    } catch (const NotCriticalError& e) {
      spdlog::error("[{}] {}", cfg.name, e.what());
      rec.check("analysis.ls_equilibrium_critical", 0.0, 1.0, "==");
    } catch (const std::invalid_argument& e) {
      spdlog::error("[{}] LS fit failed: {}", cfg.name, e.what());
      rec.check("analysis.ls_sample_count", 0.0, 20.0, ">=");
    }
    if (ls) {
      rec.text_artifact("ls_samples.csv", samples_csv(ls->samples));
      Json fit = to_json(ls->fit);
      fit["equilibrium_alpha"] = alpha_bar;
      fit["degenerate"] = degenerate;
      rec.json_artifact("ls_fit.json", fit);
      ls_assertions(rec, "analysis.", ls->fit, ls->samples, degenerate);
    }
  }

  if (cfg.has(Task::Stability) && ls) {
    try {
      const auto rep = stability_check(*traj, alpha_bar, ls->fit.theta, model);
      analysis["stability"] = to_json(rep);
      rec.check("analysis.stability_constant_finite", rep.c3, kInf, "<");
    } catch (const NonConvergentError& e) {
      analysis["stability"] = {{"error", e.what()}};
      rec.check("analysis.stability_convergent", 0.0, 1.0, "==");
    }
    try {
      analysis["decay"] = to_json(decay_classifier(*traj, model, alpha_bar));
    } catch (const std::invalid_argument& e) {
      analysis["decay"] = {{"error", e.what()}};
    }
  }

  if (cfg.has(Task::Length) && ls) {
    const double g = length_gamma_exponent(ls->fit.theta);
    const double c5 = length_constant(ls->fit);
    double min_slack = kInf;
    std::size_t checked = 0;
    for (const auto& s : traj->snapshots) {
      if (y_distance(s, alpha_bar) > ls->fit.neighborhood_radius) continue;
      min_slack = std::min(min_slack, length_estimate_check(s.u, s.alpha, alpha_bar, model, g, c5).slack);
      ++checked;
    }
    Json spots = Json::array();
    double spot_slack = kInf;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      InitialData sine;
      sine.kind = InitialData::Kind::Sine;
      sine.amplitude = eps;
      const auto rep = length_estimate_check(make_initial_u(sine, cfg.flow.n), alpha_bar, alpha_bar,
                                             model, g, c5);
      spot_slack = std::min(spot_slack, rep.slack);
      Json r = to_json(rep);
      r["epsilon"] = eps;
      spots.push_back(std::move(r));
    }
    analysis["length"] = {{"gamma_exponent", g},
                          {"c5", c5},
                          {"states_checked", checked},
                          {"min_slack", min_slack},
                          {"spot_checks", std::move(spots)}};
    rec.check("analysis.length_estimate", min_slack, -1e-12, ">=");
    rec.check("analysis.length_estimate_spot_checks", spot_slack, -1e-12, ">=");
  }

  if (cfg.has(Task::InequalitySuite)) {
    std::vector<CheckResult> checks = inequality_suite(rng);
    checks.push_back(check_gradient_consistency(rng, model));
    checks.push_back(check_second_derivative_consistency(rng, model));
    if (critical_manifold_check(GridFunction(128), alpha_bar, model)) {
      checks.push_back(check_critical_point_identity(rng, model, alpha_bar));
    }
    Json list = Json::array();
    for (const auto& c : checks) {
      list.push_back(to_json(c));
      rec.check_result("verification.", c);
    }
    rec.json_artifact("inequalities.json", list);
  }

  if (!analysis.empty()) rec.json_artifact("analysis.json", analysis);
  return rec.finish(std::move(summary), kExitPass);
}

ScenarioResult run_ls_fit(const ScenarioConfig& cfg) {
  Recorder rec(cfg.output_dir);
  Json summary = config_json(cfg);
  Rng rng(cfg.seed);
  const double alpha_bar = pick_equilibrium(cfg, cfg.alpha0);
  summary["equilibrium_alpha"] = alpha_bar;
  const bool degenerate = is_degenerate(cfg.sigma, alpha_bar);
  const auto ls = sample_and_fit(cfg, alpha_bar, rng);
  rec.text_artifact("ls_samples.csv", samples_csv(ls.samples));
  Json fit = to_json(ls.fit);
  fit["equilibrium_alpha"] = alpha_bar;
  fit["degenerate"] = degenerate;
  rec.json_artifact("ls_fit.json", fit);
  ls_assertions(rec, "analysis.", ls.fit, ls.samples, degenerate);
  return rec.finish(std::move(summary), kExitPass);
}

ScenarioResult run_verify_suite(std::uint64_t seed, const std::filesystem::path& out_dir) {
  Recorder rec(out_dir);
  Rng rng(seed);
  Json summary = {{"suite", "verify-suite"}, {"seed", seed}};

  for (const auto& c : inequality_suite(rng)) rec.check_result("verification.", c);

  const SigmaModel trig = SigmaModel::default_model();
  const SigmaModel quad = SigmaModel::quadratic_convex(1.0, 1.0);
  const SigmaModel flat = SigmaModel::constant(2.0);
  for (const auto* m : {&trig, &quad, &flat}) {
    rec.check_result("energy.", check_gradient_consistency(rng, *m));
    rec.check_result("energy.", check_second_derivative_consistency(rng, *m));
  }

  struct Equilibrium {
    std::string label;
    SigmaModel model;
    double alpha_bar;
    PerturbationMode mode;
  };
  const std::vector<Equilibrium> equilibria = {
      {"trig_periodic_0", trig, 0.0, PerturbationMode::Mixed},
      {"trig_periodic_pi_4", trig, 0.25 * std::numbers::pi, PerturbationMode::Mixed},
      {"quadratic_convex_0", quad, 0.0, PerturbationMode::Mixed},
      {"constant_0", flat, 0.0, PerturbationMode::UOnly},
  };
  Json fits = Json::object();
  for (const auto& e : equilibria) {
    auto id = check_critical_point_identity(rng, e.model, e.alpha_bar);
    id.name = "critical_point_identity_" + e.label;
    rec.check_result("energy.", id);

    LsSamplingOptions opts;
    opts.mode = e.mode;
    const State eq{GridFunction(128), e.alpha_bar};
    const auto samples = ls_samples(eq, e.model, 0.1, 400, rng, opts);
    const auto fit = fit_ls_exponent(samples);
    Json f = to_json(fit);
    f["perturbation"] = to_string(e.mode);
    fits[e.label] = std::move(f);
    ls_assertions(rec, "analysis." + e.label + ".", fit, samples, false);
  }
  summary["ls_fits"] = std::move(fits);

  {
    // Degenerate equilibrium: reported, not asserted.
    const SigmaModel quartic = SigmaModel::quartic_well(1.0, 1.0);
    LsSamplingOptions opts;
    opts.mode = PerturbationMode::AlphaOnly;
    const State eq{GridFunction(128), 0.0};
    const auto samples = ls_samples(eq, quartic, 0.1, 400, rng, opts);
    Json f = to_json(fit_ls_exponent(samples));
    f["perturbation"] = to_string(opts.mode);
    summary["exploratory"] = {{"quartic_well_0", std::move(f)}};
  }

  {
    FlowParams p;
    p.n = 64;
    p.t_end = 0.5;
    p.dt = 1e-4;
    InitialData sine;
    sine.kind = InitialData::Kind::Sine;
    sine.amplitude = 0.1;
    const State initial{make_initial_u(sine, p.n), 0.3};
    const auto coarse = evolve(initial, trig, p);
    flow_assertions(rec, coarse, trig);
    FlowParams half = p;
    half.dt = 0.5 * p.dt;
    const auto fine = evolve(initial, trig, half);
    const double ratio = max_interior_residual(coarse) / max_interior_residual(fine);
    summary["flow"] = {{"n", p.n},
                       {"t_end", p.t_end},
                       {"dt", p.dt},
                       {"residual_dt", max_interior_residual(coarse)},
                       {"residual_half_dt", max_interior_residual(fine)}};
    rec.check("flow.dissipation_order", ratio, 3.5, ">=");
  }

  return rec.finish(std::move(summary), kExitPass);
}

void configure_logging() {
  auto logger = spdlog::get("grainflow");
  if (!logger) {
    logger = spdlog::stderr_color_mt("grainflow");
    spdlog::set_default_logger(logger);
  }
  const char* env = std::getenv("GRAINFLOW_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") spdlog::set_level(spdlog::level::err);
  else if (level == "debug") spdlog::set_level(spdlog::level::debug);
  else spdlog::set_level(spdlog::level::info);
}

}  // namespace grainflow
