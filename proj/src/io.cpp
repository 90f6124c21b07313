#include "grainflow/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>

namespace grainflow {

namespace {

double number_field(const Json& j, const char* key, const std::string& where) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError("invalid_field", field, "missing required number");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("invalid_field", field, "expected a number");
  return v.get<double>();
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const GridFunction& u) {
  return Json{{"n", u.size()}, {"values", std::vector<double>(u.values().begin(), u.values().end())}};
}

GridFunction grid_function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("values") || !j.at("values").is_array()) {
    throw ConfigError("invalid_field", "values", "expected an array of samples");
  }
  std::vector<double> values;
  values.reserve(j.at("values").size());
  for (const auto& v : j.at("values")) {
    if (!v.is_number()) throw ConfigError("invalid_field", "values", "non-numeric sample");
    values.push_back(v.get<double>());
  }
  if (j.contains("n") && (!j.at("n").is_number_integer() || j.at("n").get<std::int64_t>() < 0 ||
                          j.at("n").get<std::size_t>() != values.size())) {
    throw ConfigError("invalid_field", "n", "does not match the number of samples");
  }
  if (!is_valid_grid_size(values.size())) {
    throw ConfigError("invalid_field", "n", "grid size must be a power of two >= 8");
  }
  return GridFunction::restore(std::move(values));
}

Json to_json(const State& s) { return Json{{"alpha", s.alpha}, {"u", to_json(s.u)}}; }

State state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("u")) throw ConfigError("invalid_field", "u", "missing");
  return {grid_function_from_json(j.at("u")), number_field(j, "alpha", "")};
}

Json to_json(const SigmaModel& m) {
  switch (m.kind()) {
    case SigmaModel::Kind::Constant:
      return {{"kind", m.kind_name()}, {"value", m.p0()}};
    case SigmaModel::Kind::TrigPeriodic:
      return {{"kind", m.kind_name()}, {"base", m.p0()}, {"amplitude", m.p1()}, {"frequency", m.p2()}};
    case SigmaModel::Kind::QuadraticConvex:
      return {{"kind", m.kind_name()}, {"base", m.p0()}, {"curvature", m.p1()}};
    case SigmaModel::Kind::QuarticWell:
      return {{"kind", m.kind_name()}, {"base", m.p0()}, {"coefficient", m.p1()}};
  }
  return {};
}

SigmaModel sigma_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("invalid_field", "sigma.kind", "expected a string");
  }
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") return SigmaModel::constant(number_field(j, "value", "sigma"));
    if (kind == "trig_periodic") {
      const double freq = j.contains("frequency") ? number_field(j, "frequency", "sigma") : 2.0;
      return SigmaModel::trig_periodic(number_field(j, "base", "sigma"),
                                       number_field(j, "amplitude", "sigma"), freq);
    }
    if (kind == "quadratic_convex") {
      return SigmaModel::quadratic_convex(number_field(j, "base", "sigma"),
                                          number_field(j, "curvature", "sigma"));
    }
    if (kind == "quartic_well") {
      return SigmaModel::quartic_well(number_field(j, "base", "sigma"),
                                      number_field(j, "coefficient", "sigma"));
    }
  } catch (const PositivityError& e) {
    throw ConfigError("positivity_floor", "sigma", e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid_field", "sigma", e.what());
  }
  throw ConfigError("unknown_sigma_kind", "sigma.kind", "unknown kind '" + kind + "'");
}

Json to_json(const LsFit& f) {
  return {{"theta", f.theta},
          {"theta_unclamped", f.theta_unclamped},
          {"slope", f.slope},
          {"intercept", f.intercept},
          {"c_constant", f.c_constant},
          {"r_squared", f.r_squared},
          {"n_points", f.n_points},
          {"neighborhood_radius", f.neighborhood_radius}};
}

Json to_json(const StabilityReport& r) {
  return {{"degenerate", r.degenerate}, {"theta", r.theta},       {"c3", r.c3},
          {"c3_alpha", r.c3_alpha},     {"c3_u", r.c3_u},         {"pairs_checked", r.pairs_checked},
          {"tail_records", r.tail_records}, {"holds", r.holds}};
}

Json to_json(const LengthReport& r) {
  return {{"length", r.length},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"slack", r.slack},
          {"curvature_term", r.curvature_term},
          {"gamma_exponent", r.gamma_exponent},
          {"c5", r.c5},
          {"holds", r.holds}};
}

Json to_json(const DecayClassification& d) {
  return {{"kind", to_string(d.kind)},
          {"rate", d.rate},
          {"r2_exponential", d.r2_exponential},
          {"r2_algebraic", d.r2_algebraic},
          {"tail_records", d.tail_records}};
}

Json to_json(const GradientBoundReport& r) {
  return {{"holds", r.holds},
          {"v_bound", r.v_bound},
          {"max_sup_v", r.max_sup_v},
          {"ux_sq_bound", r.ux_sq_bound},
          {"max_ux_sq_excess", r.max_ux_sq_excess},
          {"sup_v_monotone", r.sup_v_monotone},
          {"violations", r.violations.size()}};
}

Json to_json(const CheckResult& r) {
  return {{"name", r.name},
          {"passed", r.passed},
          {"trials", r.trials},
          {"failures", r.failures},
          {"worst", r.worst},
          {"threshold", r.threshold},
          {"relation", r.relation}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,energy,diss_lhs,diss_rhs,mean_u,sup_v,sup_ux_sq,length,sup_curvature,grad_x,grad_y\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& d = traj.diagnostics[k];
    const double row[] = {traj.times[k], d.energy,   d.dissipation_lhs, d.dissipation_rhs,
                          d.mean_u,      d.sup_v,    d.sup_ux_sq,       d.length,
                          d.sup_curvature, d.grad_norm_x, d.grad_norm_y};
    for (std::size_t c = 0; c < std::size(row); ++c) {
      if (c) os << ',';
      os << format_double(row[c]);
    }
    os << '\n';
  }
}

void write_ls_samples_csv(std::ostream& os, std::span<const LsSample> samples) {
  os << "grad_y_norm,energy_gap\n";
  for (const auto& s : samples) {
    os << format_double(s.grad_y_norm) << ',' << format_double(s.energy_gap) << '\n';
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("missing_file", "", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed_json", "", path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace grainflow
