#include <doctest.h>

#include <cmath>

#include "grainflow/analysis.hpp"
#include "support.hpp"

using namespace grainflow;
using test::kPi;

namespace {

// Scalar-only trajectory with a flat interface and the given misorientations.
Trajectory synthetic(const std::vector<double>& t, const std::vector<double>& alpha) {
  Trajectory tr;
  tr.times = t;
  tr.alpha = alpha;
  tr.length_excess.assign(t.size(), 0.0);
  tr.diagnostics.resize(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    tr.snapshot_records.push_back(k);
    tr.snapshots.push_back({GridFunction(16), alpha[k]});
  }
  return tr;
}

std::vector<LsSample> power_law(double slope, double c, std::size_t count) {
  std::vector<LsSample> s;
  for (std::size_t i = 0; i < count; ++i) {
    const double gap = std::pow(10.0, -12.0 + 10.0 * static_cast<double>(i) / static_cast<double>(count - 1));
    s.push_back({c * std::pow(gap, slope), gap, 0.01});
  }
  return s;
}

}  // namespace

TEST_CASE("fit_line") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const std::vector<double> noisy{1, 3.2, 4.9, 7.1};
  CHECK(fit_line(x, noisy).r_squared < 1.0);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1}, std::vector<double>{0, 1}), std::invalid_argument);
}

TEST_CASE("exponent regression on exact power laws") {
  const auto s = power_law(0.5, 3.0, 50);
  const auto fit = fit_ls_exponent(s);
  CHECK(fit.theta == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit.c_constant == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.neighborhood_radius == 0.01);
  CHECK(verify_ls_inequality(s, fit));
  auto inflated = fit;
  inflated.c_constant *= 10.0;
  CHECK_FALSE(verify_ls_inequality(s, inflated));

  const auto steep = fit_ls_exponent(power_law(0.25, 1.0, 50));
  CHECK(steep.theta == 0.5);
  CHECK(steep.theta_unclamped == doctest::Approx(0.75));

  CHECK_THROWS_AS(fit_ls_exponent(power_law(0.5, 1.0, 19)), std::invalid_argument);
  auto bad = s;
  bad[3].grad_y_norm = std::nan("");
  CHECK_THROWS_AS(fit_ls_exponent(bad), std::invalid_argument);
}

TEST_CASE("LS sampling") {
  const auto m = SigmaModel::default_model();
  Rng rng(42);
  SUBCASE("non-critical base point") {
    CHECK_THROWS_AS(ls_samples({GridFunction(64), 0.3}, m, 0.1, 10, rng), NotCriticalError);
  }
  SUBCASE("samples lie in the ball") {
    const auto s = ls_samples({GridFunction(64), 0.0}, m, 0.1, 200, rng);
    CHECK(s.size() > 150);
    for (const auto& x : s) {
      CHECK(x.y_distance <= 0.1 * (1 + 1e-12));
      CHECK(x.energy_gap >= kGapFloor);
    }
  }
  SUBCASE("tiny radius drops everything") {
    LsSamplingOptions o;
    o.min_radius = 1e-9;
    CHECK(ls_samples({GridFunction(64), 0.0}, m, 1e-9, 50, rng, o).empty());
  }
  SUBCASE("alpha direction follows the Taylor ratio") {
    LsSamplingOptions o;
    o.mode = PerturbationMode::AlphaOnly;
    for (double ab : {0.0, kPi / 4}) {
      const double expected = std::sqrt(2 * std::abs(m.d2(ab)));
      for (double r : {1e-2, 1e-3, 1e-4, 1e-5}) {
        o.min_radius = r;
        for (const auto& x : ls_samples({GridFunction(64), ab}, m, r, 5, rng, o)) {
          CHECK(x.grad_y_norm / std::sqrt(x.energy_gap) == doctest::Approx(expected).epsilon(0.1));
        }
      }
    }
  }
  SUBCASE("u direction follows the Taylor ratio") {
    const double eps = 1e-5;
    const auto u = test::sine(64, eps);
    const double gap = energy_gap(u, 0.0, 0.0, m);
    CHECK(gap == doctest::Approx(kPi * kPi * eps * eps).epsilon(1e-6));
    const double grad = y_norm(frechet_derivative(u, 0.0, m).as_xvector());
    const double expected = std::sqrt(2 * kPi * kPi + 8 * std::pow(kPi, 4)) / kPi;
    CHECK(grad / std::sqrt(gap) == doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("degenerate well gives a quartic exponent") {
    LsSamplingOptions o;
    o.mode = PerturbationMode::AlphaOnly;
    const auto s = ls_samples({GridFunction(64), 0.0}, SigmaModel::quartic_well(1.0, 1.0), 0.1,
                              200, rng, o);
    const auto fit = fit_ls_exponent(s);
    CHECK(fit.theta_unclamped == doctest::Approx(0.25).epsilon(0.01));
  }
  SUBCASE("u-only fit near a constant density") {
    LsSamplingOptions o;
    o.mode = PerturbationMode::UOnly;
    const auto s = ls_samples({GridFunction(64), 0.0}, SigmaModel::constant(2.0), 0.1, 400, rng, o);
    const auto fit = fit_ls_exponent(s);
    CHECK(fit.theta == doctest::Approx(0.5).epsilon(0.05));
    CHECK(verify_ls_inequality(s, fit));
  }
}

TEST_CASE("y_distance") {
  CHECK(y_distance({GridFunction(32), 0.7}, 0.4) == doctest::Approx(0.3));
  const auto u = test::sine(64, 1.0);
  CHECK(y_distance({u, 0.0}, 0.0) == doctest::Approx(std::sqrt(2 * kPi * kPi + 8 * std::pow(kPi, 4))));
}

TEST_CASE("stability check") {
  const auto m = SigmaModel::quadratic_convex(1.0, 1.0);
  std::vector<double> t, a;
  for (int k = 0; k <= 200; ++k) {
    t.push_back(0.05 * k);
    a.push_back(0.1 * std::exp(-0.05 * k));
  }
  SUBCASE("exponential approach has a finite constant") {
    const auto rep = stability_check(synthetic(t, a), 0.0, 0.5, m);
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.holds);
    // |alpha(t) - alpha(s)| <= alpha(t) = sqrt(gap)
    CHECK(rep.c3_alpha <= 1.0 + 1e-12);
    CHECK(rep.c3_alpha > 0.9);
    CHECK(rep.c3_u == 0.0);
  }
  SUBCASE("larger exponents inflate the constant") {
    const auto half = stability_check(synthetic(t, a), 0.0, 0.5, m);
    const auto big = stability_check(synthetic(t, a), 0.0, 0.9, m);
    CHECK(big.c3 > 100 * half.c3);
  }
  SUBCASE("trajectory already at the equilibrium") {
    const auto rep = stability_check(synthetic(t, std::vector<double>(t.size(), 0.0)), 0.0, 0.5, m);
    CHECK(rep.degenerate);
  }
  SUBCASE("non-convergent") {
    CHECK_THROWS_AS(stability_check(synthetic(t, std::vector<double>(t.size(), 0.2)), 0.0, 0.5, m),
                    NonConvergentError);
  }
}

TEST_CASE("length estimate") {
  const auto m = SigmaModel::default_model();
  CHECK(length_gamma_exponent(0.5) == 1.0);
  CHECK(length_gamma_exponent(0.25) == doctest::Approx(2.0 / 3.0));
  LsFit fit;
  fit.theta = 0.5;
  fit.c_constant = 1.0;
  CHECK(length_constant(fit) == 2.0);

  SUBCASE("equilibrium") {
    const auto rep = length_estimate_check(GridFunction(64), 0.0, 0.0, m, 1.0, 2.0);
    CHECK(rep.slack == 0.0);
    CHECK(rep.holds);
    CHECK(rep.lhs == 1.0);
  }
  SUBCASE("small perturbation") {
    const auto rep = length_estimate_check(test::sine(64, 1e-3), 1e-3, 0.0, m, 1.0, 2.0);
    CHECK(rep.holds);
    CHECK(rep.slack > 0.0);
  }
  SUBCASE("a tiny constant fails") {
    const auto rep = length_estimate_check(test::sine(64, 1e-2), 0.0, 0.0, m, 1.0, 1e-6);
    CHECK_FALSE(rep.holds);
  }
}

TEST_CASE("decay classifier") {
  const auto m = SigmaModel::quadratic_convex(1.0, 1.0);
  std::vector<double> t;
  for (int k = 0; k <= 400; ++k) t.push_back(1.0 + 0.05 * k);
  SUBCASE("exponential") {
    std::vector<double> a;
    for (double s : t) a.push_back(0.1 * std::exp(-s));
    const auto c = decay_classifier(synthetic(t, a), m);
    CHECK(c.kind == DecayKind::Exponential);
    CHECK(c.rate == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(to_string(c.kind) == "exponential");
  }
  SUBCASE("algebraic") {
    std::vector<double> a;
    for (double s : t) a.push_back(1.0 / std::sqrt(s));
    const auto c = decay_classifier(synthetic(t, a), m, 0.0);
    CHECK(c.kind == DecayKind::Algebraic);
    CHECK(c.rate == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("no usable gap") {
    const auto c = decay_classifier(synthetic(t, std::vector<double>(t.size(), 0.0)), m, 0.0);
    CHECK(c.kind == DecayKind::Undetermined);
  }
  SUBCASE("too short") {
    std::vector<double> ts(t.begin(), t.begin() + 50), a;
    for (double s : ts) a.push_back(0.1 * std::exp(-s));
    CHECK_THROWS_AS(decay_classifier(synthetic(ts, a), m, 0.0), std::invalid_argument);
  }
  SUBCASE("noise is undetermined") {
    std::vector<double> a;
    for (std::size_t k = 0; k < t.size(); ++k) a.push_back(k % 2 ? 0.1 : 1e-3);
    CHECK(decay_classifier(synthetic(t, a), m, 0.0).kind == DecayKind::Undetermined);
  }
}
