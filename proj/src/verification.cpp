#include "grainflow/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "grainflow/energy.hpp"

namespace grainflow {

namespace {

constexpr double kSlackTolerance = 1e-8;
constexpr double kLipschitzTolerance = 1e-12;
constexpr std::size_t kMaxMode = 16;

// Tracks the smallest slack over trials.
struct SlackTally {
  CheckResult r;
  SlackTally(std::string name, double tol) {
    r.name = std::move(name);
    r.worst = std::numeric_limits<double>::infinity();
    r.threshold = -tol;
    r.relation = ">=";
  }
  void add(double slack) {
    ++r.trials;
    r.worst = std::min(r.worst, slack);
    if (!(slack >= r.threshold)) {
      ++r.failures;
      r.passed = false;
    }
  }
};

// Tracks the largest error over trials.
struct ErrorTally {
  CheckResult r;
  ErrorTally(std::string name, double tol) {
    r.name = std::move(name);
    r.threshold = tol;
    r.relation = "<=";
  }
  void add(double err) {
    ++r.trials;
    r.worst = std::max(r.worst, err);
    if (!(err <= r.threshold)) {
      ++r.failures;
      r.passed = false;
    }
  }
};

GridFunction random_u(Rng& rng, std::size_t n, double amplitude) {
  return random_band_limited(rng, n, std::min<std::size_t>(kMaxMode, n / 2 - 1), amplitude);
}

}  // namespace

std::vector<CheckResult> check_lipschitz_bounds(Rng& rng, std::size_t pairs) {
  using Fn = std::function<double(double)>;
  struct Bound {
    const char* name;
    Fn f;
    double lipschitz;
  };
  const std::array<Bound, 4> bounds{{
      {"lipschitz_sqrt", [](double x) { return std::sqrt(1.0 + x * x); }, 1.0},
      {"lipschitz_slope", [](double x) { return x / std::sqrt(1.0 + x * x); }, 1.0},
      {"lipschitz_inverse_cube", [](double x) { return std::pow(1.0 + x * x, -1.5); }, 3.0},
      {"lipschitz_slope_fifth", [](double x) { return x * std::pow(1.0 + x * x, -2.5); }, 15.0},
  }};
  std::vector<SlackTally> tallies;
  for (const auto& b : bounds) tallies.emplace_back(b.name, kLipschitzTolerance);
  for (std::size_t i = 0; i < pairs; ++i) {
    const double xi = uniform(rng, -100.0, 100.0);
    const double eta = uniform(rng, -100.0, 100.0);
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      const double lhs = std::abs(bounds[k].f(xi) - bounds[k].f(eta));
      const double rhs = bounds[k].lipschitz * std::abs(xi - eta);
      tallies[k].add(rhs - lhs);
    }
  }
  std::vector<CheckResult> out;
  for (auto& t : tallies) out.push_back(t.r);
  return out;
}

CheckResult check_mean_embedding(Rng& rng, std::size_t n, std::size_t count) {
  SlackTally t("embedding_mean", kSlackTolerance);
  for (std::size_t i = 0; i < count; ++i) {
    auto f = random_trig_polynomial(rng, n, std::min<std::size_t>(kMaxMode, n / 2 - 1),
                                    uniform(rng, 0.0, 1.0));
    const double offset = uniform(rng, -1.0, 1.0);
    for (double& x : f) x += offset;
    const double m = mean(f);
    double sup = 0.0;
    for (double x : f) sup = std::max(sup, std::abs(x - m));
    t.add(l2_norm(derivative(f)) - sup);
  }
  return t.r;
}

CheckResult check_x_embedding(Rng& rng, std::size_t n, std::size_t count) {
  SlackTally t("embedding_x", kSlackTolerance);
  for (std::size_t i = 0; i < count; ++i) {
    const auto u = random_u(rng, n, 1.0);
    t.add(l2_norm(derivative(u)) - max_abs(u.values()));
  }
  return t.r;
}

CheckResult check_y_embedding(Rng& rng, std::size_t n, std::size_t count) {
  SlackTally t("embedding_y", kSlackTolerance);
  for (std::size_t i = 0; i < count; ++i) {
    const auto u = random_u(rng, n, 1.0);
    const double a = l2_norm(derivative(u));
    const double b = l2_norm(second_derivative(u));
    const double sup_ux = max_abs(derivative(u));
    t.add(std::min(a + b - sup_ux, std::sqrt(2.0) * h2_seminorm(u) - (a + b)));
  }
  return t.r;
}

CheckResult check_poincare(Rng& rng, std::size_t n, std::size_t count) {
  SlackTally t("poincare_periodic", kSlackTolerance);
  for (std::size_t i = 0; i < count; ++i) {
    const auto f = random_u(rng, n, 1.0);
    const double fx = l2_norm(derivative(f));
    const double fxx = l2_norm(second_derivative(f));
    t.add(fxx * fxx - fx * fx);
  }
  return t.r;
}

CheckResult check_x_below_y(Rng& rng, std::size_t n, std::size_t count) {
  SlackTally t("x_norm_below_y_norm", kSlackTolerance);
  for (std::size_t i = 0; i < count; ++i) {
    const XVector v{random_u(rng, n, 1.0), uniform(rng, -1.0, 1.0)};
    t.add(y_norm(v) - x_norm(v));
  }
  return t.r;
}

CheckResult check_gradient_consistency(Rng& rng, const SigmaModel& model, std::size_t n,
                                       std::size_t trials, double eps, double tol) {
  ErrorTally t("gradient_consistency_" + model.kind_name(), tol);
  for (std::size_t i = 0; i < trials; ++i) {
    const auto u = random_u(rng, n, 0.5);
    const auto h = random_u(rng, n, 0.5);
    const double alpha = uniform(rng, -1.0, 1.0);
    const double beta = uniform(rng, -1.0, 1.0);
    // Gaps against a shared reference keep the O(1) part of E out of the difference.
    const double fd = (energy_gap(u + eps * h, alpha + eps * beta, alpha, model) -
                       energy_gap(u - eps * h, alpha - eps * beta, alpha, model)) /
                      (2.0 * eps);
    const double an = directional_derivative(frechet_derivative(u, alpha, model), {h, beta});
    t.add(std::abs(fd - an) / std::max(std::abs(an), std::numeric_limits<double>::min()));
  }
  return t.r;
}

CheckResult check_second_derivative_consistency(Rng& rng, const SigmaModel& model,
                                                std::size_t n, std::size_t trials, double eps,
                                                double tol) {
  ErrorTally t("second_derivative_consistency_" + model.kind_name(), tol);
  for (std::size_t i = 0; i < trials; ++i) {
    const auto u = random_u(rng, n, 0.5);
    const auto h = random_u(rng, n, 0.5);
    const double alpha = uniform(rng, -1.0, 1.0);
    const double beta = uniform(rng, -1.0, 1.0);
    const auto gp = frechet_derivative(u + eps * h, alpha + eps * beta, model);
    const auto gm = frechet_derivative(u - eps * h, alpha - eps * beta, model);
    const XVector fd{(1.0 / (2.0 * eps)) * (gp.u_part - gm.u_part),
                     (gp.alpha_part - gm.alpha_part) / (2.0 * eps)};
    const auto an = gateaux_second_derivative(u, alpha, h, beta, model).as_xvector();
    const double err = x_norm({fd.h - an.h, fd.beta - an.beta});
    t.add(err / std::max(x_norm(an), std::numeric_limits<double>::min()));
  }
  return t.r;
}

CheckResult check_critical_point_identity(Rng& rng, const SigmaModel& model, double alpha_bar,
                                          std::size_t n, std::size_t trials, double tol) {
  ErrorTally t("critical_point_identity_" + model.kind_name(), tol);
  const GridFunction zero(n);
  const double s0 = model(alpha_bar);
  const double s2 = model.d2(alpha_bar);
  for (std::size_t i = 0; i < trials; ++i) {
    const auto h = random_u(rng, n, 0.5);
    const double beta = uniform(rng, -1.0, 1.0);
    const auto d = gateaux_second_derivative(zero, alpha_bar, h, beta, model);
    t.add(x_norm({d.u_part - s0 * h, d.alpha_part - s2 * beta}));
  }
  return t.r;
}

std::vector<CheckResult> inequality_suite(Rng& rng) {
  std::vector<CheckResult> out = check_lipschitz_bounds(rng);
  out.push_back(check_mean_embedding(rng));
  out.push_back(check_x_embedding(rng));
  out.push_back(check_y_embedding(rng));
  out.push_back(check_poincare(rng));
  out.push_back(check_x_below_y(rng));
  return out;
}

}  // namespace grainflow
