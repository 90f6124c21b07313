#include "grainflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace grainflow {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line needs two equally sized series of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x has zero variance");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? std::min(1.0, (sxy * sxy) / (sxx * syy)) : 1.0;
  return f;
}

double y_distance(const State& s, double alpha_bar) {
  const double h = h2_seminorm(s.u);
  const double da = s.alpha - alpha_bar;
  return std::sqrt(h * h + da * da);
}

std::vector<LsSample> ls_samples(const State& equilibrium, const SigmaModel& model, double radius,
                                 std::size_t count, Rng& rng, const LsSamplingOptions& opts) {
  if (!critical_manifold_check(equilibrium.u, equilibrium.alpha, model)) {
    throw NotCriticalError("equilibrium is not a critical point of E");
  }
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  const double lo = std::min(opts.min_radius, radius);
  const std::size_t n = equilibrium.u.size();
  const double alpha_bar = equilibrium.alpha;

  std::vector<LsSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = std::exp(uniform(rng, std::log(lo), std::log(radius)));
    // phi splits the Y-distance between the u block and the alpha block.
    double phi = 0.0;
    switch (opts.mode) {
      case PerturbationMode::Mixed: phi = uniform(rng, 0.0, 0.5 * std::numbers::pi); break;
      case PerturbationMode::UOnly: phi = 0.0; break;
      case PerturbationMode::AlphaOnly: phi = 0.5 * std::numbers::pi; break;
    }
    const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;

    GridFunction u(n);
    if (opts.mode != PerturbationMode::AlphaOnly) {
      const GridFunction h = GridFunction::from_samples(
          random_trig_polynomial(rng, n, opts.max_mode, 1.0));
      u = (r * std::cos(phi) / h2_seminorm(h)) * h;
    }
    const double alpha = alpha_bar + sign * r * std::sin(phi);

    const auto grad = frechet_derivative(u, alpha, model);
    const double gap = std::abs(energy_gap(u, alpha, alpha_bar, model));
    if (!(gap >= kGapFloor)) continue;
    out.push_back({y_norm(grad.as_xvector()), gap, y_distance(State{u, alpha}, alpha_bar)});
  }
  return out;
}

LsFit fit_ls_exponent(std::span<const LsSample> samples) {
  if (samples.size() < 20) throw std::invalid_argument("LS fit needs at least 20 samples");
  std::vector<double> x, y;
  x.reserve(samples.size());
  y.reserve(samples.size());
  double radius = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.grad_y_norm) || !std::isfinite(s.energy_gap) || !(s.energy_gap > 0.0) ||
        !(s.grad_y_norm > 0.0)) {
      throw std::invalid_argument("LS fit got a non-finite or non-positive sample");
    }
    x.push_back(std::log(s.energy_gap));
    y.push_back(std::log(s.grad_y_norm));
    radius = std::max(radius, s.y_distance);
  }
  const LinearFit line = fit_line(x, y);

  LsFit fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.theta_unclamped = 1.0 - line.slope;
  fit.theta = std::clamp(fit.theta_unclamped, std::numeric_limits<double>::min(), 0.5);
  fit.n_points = samples.size();
  fit.neighborhood_radius = radius;

  double c = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    c = std::min(c, s.grad_y_norm / std::pow(s.energy_gap, 1.0 - fit.theta));
  }
  fit.c_constant = c;
  return fit;
}

bool verify_ls_inequality(std::span<const LsSample> samples, const LsFit& fit) {
  return std::all_of(samples.begin(), samples.end(), [&](const LsSample& s) {
    return s.grad_y_norm / std::pow(s.energy_gap, 1.0 - fit.theta) >= fit.c_constant;
  });
}

std::vector<double> trajectory_gaps(const Trajectory& traj, const SigmaModel& model,
                                    double alpha_bar) {
  std::vector<double> g(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double a = traj.alpha[k];
    g[k] = std::abs(model(a) * traj.length_excess[k] + model.difference(a, alpha_bar));
  }
  return g;
}

StabilityReport stability_check(const Trajectory& traj, double alpha_bar, double theta,
                                const SigmaModel& model) {
  StabilityReport rep;
  rep.theta = theta;
  if (traj.size() < 2 || traj.snapshots.empty()) {
    throw std::invalid_argument("stability check needs a recorded trajectory with snapshots");
  }
  const auto gaps = trajectory_gaps(traj, model, alpha_bar);
  const double d0 = y_distance(traj.snapshots.front(), alpha_bar);
  const double d1 = y_distance(traj.snapshots.back(), alpha_bar);
  const bool any_gap =
      std::any_of(gaps.begin(), gaps.end(), [](double g) { return g >= kGapFloor; });
  if (d0 == 0.0 || !any_gap) {
    rep.degenerate = true;
    return rep;
  }
  if (d1 > 0.1 * d0) {
    throw NonConvergentError("trajectory does not converge toward the equilibrium");
  }

  // Suffix extrema give max_{s > t} |alpha(t) - alpha(s)| in one pass.
  const std::size_t m = traj.size();
  std::vector<double> suf_min(m), suf_max(m);
  suf_min[m - 1] = suf_max[m - 1] = traj.alpha[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) {
    suf_min[k] = std::min(suf_min[k + 1], traj.alpha[k]);
    suf_max[k] = std::max(suf_max[k + 1], traj.alpha[k]);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (gaps[k] < kGapFloor) continue;
    ++rep.tail_records;
    const double a = traj.alpha[k];
    const double d = std::max(a - suf_min[k + 1], suf_max[k + 1] - a);
    rep.c3_alpha = std::max(rep.c3_alpha, d / std::pow(gaps[k], theta));
    rep.pairs_checked += m - 1 - k;
  }

  const std::size_t ns = traj.snapshots.size();
  for (std::size_t i = 0; i + 1 < ns; ++i) {
    const double g = gaps[traj.snapshot_records[i]];
    if (g < kGapFloor) continue;
    const auto ui = traj.snapshots[i].u.values();
    const double scale = std::pow(g, theta);
    for (std::size_t j = i + 1; j < ns; ++j) {
      const auto uj = traj.snapshots[j].u.values();
      double s = 0.0;
      for (std::size_t q = 0; q < ui.size(); ++q) {
        const double d = ui[q] - uj[q];
        s += d * d;
      }
      rep.c3_u = std::max(rep.c3_u, std::sqrt(s / static_cast<double>(ui.size())) / scale);
      ++rep.pairs_checked;
    }
  }
  rep.c3 = std::max(rep.c3_alpha, rep.c3_u);
  rep.holds = std::isfinite(rep.c3);
  return rep;
}

double length_gamma_exponent(double theta) { return 1.0 / (2.0 * (1.0 - theta)); }

double length_constant(const LsFit& fit) {
  const double g = length_gamma_exponent(fit.theta);
  return std::pow(2.0, g) / std::pow(fit.c_constant, 1.0 - fit.theta);
}

LengthReport length_estimate_check(const GridFunction& u, double alpha, double alpha_bar,
                                   const SigmaModel& model, double gamma_exp, double c5) {
  const auto ux = derivative(u);
  std::vector<double> w(ux.size());
  for (std::size_t j = 0; j < ux.size(); ++j) w[j] = ux[j] / std::sqrt(1.0 + ux[j] * ux[j]);
  const double curvature = std::pow(l2_norm(derivative(w)), 2);

  LengthReport rep;
  rep.length = length(u);
  rep.curvature_term = curvature;
  rep.gamma_exponent = gamma_exp;
  rep.c5 = c5;
  const double s = model(alpha);
  const double s1 = model.d1(alpha);
  const double inner = s * s * curvature + s1 * s1 * rep.length * rep.length;
  const double term = c5 * std::pow(inner, gamma_exp);
  rep.lhs = s * rep.length;
  rep.rhs = model(alpha_bar) + term;
  rep.slack = term - energy_gap(u, alpha, alpha_bar, model);
  rep.holds = rep.slack >= -1e-12;
  return rep;
}

std::string to_string(DecayKind k) {
  switch (k) {
    case DecayKind::Exponential: return "exponential";
    case DecayKind::Algebraic: return "algebraic";
    case DecayKind::Undetermined: return "undetermined";
  }
  return "undetermined";
}

DecayClassification decay_classifier(const Trajectory& traj, const SigmaModel& model,
                                     double alpha_bar) {
  DecayClassification out;
  const auto gaps = trajectory_gaps(traj, model, alpha_bar);
  std::vector<std::size_t> usable;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] > 0.0 && gaps[k] >= kGapFloor) usable.push_back(k);
  }
  if (usable.empty()) return out;
  const std::vector<std::size_t> tail(usable.begin() + static_cast<std::ptrdiff_t>(usable.size() / 2),
                                      usable.end());
  if (tail.size() < 100) throw std::invalid_argument("decay classifier needs >= 100 tail records");
  out.tail_records = tail.size();

  std::vector<double> t, logt, logg;
  for (std::size_t k : tail) {
    t.push_back(traj.times[k]);
    logt.push_back(std::log(traj.times[k]));
    logg.push_back(std::log(gaps[k]));
  }
  const LinearFit ex = fit_line(t, logg);
  const LinearFit al = fit_line(logt, logg);
  out.r2_exponential = ex.r_squared;
  out.r2_algebraic = al.r_squared;
  if (ex.r_squared < 0.95 && al.r_squared < 0.95) return out;
  if (ex.r_squared >= al.r_squared) {
    out.kind = DecayKind::Exponential;
    out.rate = -ex.slope;
  } else {
    out.kind = DecayKind::Algebraic;
    out.rate = -al.slope;
  }
  return out;
}

DecayClassification decay_classifier(const Trajectory& traj, const SigmaModel& model) {
  if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
  return decay_classifier(traj, model, nearest_critical_point(model, traj.alpha.back()).alpha_bar);
}

}  // namespace grainflow
