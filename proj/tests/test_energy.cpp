#include <doctest.h>

#include <cmath>

#include "grainflow/energy.hpp"
#include "grainflow/random_fields.hpp"
#include "grainflow/verification.hpp"
#include "support.hpp"

using namespace grainflow;
using test::kPi;

namespace {

double directional_fd(const GridFunction& u, double a, const GridFunction& h, double b,
                      const SigmaModel& m, double eps) {
  return (energy(u + eps * h, a + eps * b, m) - energy(u - eps * h, a - eps * b, m)) / (2 * eps);
}

}  // namespace

TEST_CASE("energy values") {
  CHECK(energy(GridFunction(64), 0.3, SigmaModel::constant(2.0)) == 2.0);
  CHECK(energy(GridFunction(64), kPi / 8, SigmaModel::default_model()) ==
        doctest::Approx(1.25).epsilon(1e-15));

  const double a = 0.1;
  const double oracle = test::simpson(
      [&](double x) {
        const double p = 2 * kPi * a * std::cos(2 * kPi * x);
        return std::sqrt(1 + p * p);
      },
      1000000);
  CHECK(std::abs(energy(test::sine(256, a), 0.0, SigmaModel::constant(1.0)) - oracle) <= 1e-10);
}

TEST_CASE("length and gap") {
  const auto u = test::sine(128, 1e-6);
  // L - 1 = pi^2 a^2 to leading order
  CHECK(length_excess(u) == doctest::Approx(kPi * kPi * 1e-12).epsilon(1e-6));
  const auto m = SigmaModel::default_model();
  CHECK(energy_gap(GridFunction(32), kPi / 4, kPi / 4, m) == 0.0);
  CHECK(energy_gap(GridFunction(32), 1e-4, 0.0, m) ==
        doctest::Approx(0.5 * 4.0 * 1e-8).epsilon(1e-6));
}

TEST_CASE("energy is bounded below by the floor") {
  Rng rng(9);
  const auto m = SigmaModel::trig_periodic(0.7, 0.5, 2.0);
  for (int i = 0; i < 100; ++i) {
    const auto u = random_band_limited(rng, 64, 8, 1.0);
    CHECK(energy(u, uniform(rng, -3, 3), m) >= m.positivity_floor());
  }
}

TEST_CASE("Frechet derivative") {
  const auto m = SigmaModel::default_model();
  SUBCASE("flat interface") {
    const auto g = frechet_derivative(GridFunction(64), 0.3, m);
    CHECK(max_abs(g.u_part.values()) == 0.0);
    CHECK(g.alpha_part == doctest::Approx(m.d1(0.3)).epsilon(1e-15));
  }
  SUBCASE("critical point") {
    const auto g = frechet_derivative(GridFunction(64), kPi / 4, m);
    CHECK(x_norm(g.as_xvector()) <= 1e-10);
    for (const auto& cp : find_critical_points(m, -1.0, 2.0).points) {
      CHECK(x_norm(frechet_derivative(GridFunction(64), cp.alpha_bar, m).as_xvector()) <= 1e-10);
    }
  }
  SUBCASE("directional finite differences") {
    Rng rng(77);
    const auto u = test::sine(256, 0.05);
    const auto grad = frechet_derivative(u, 0.3, m);
    CHECK(std::abs(mean(grad.u_part.values())) <= 1e-13);
    for (int i = 0; i < 20; ++i) {
      const auto h = random_band_limited(rng, 256, 8, 0.5);
      const double b = uniform(rng, -1, 1);
      const double an = directional_derivative(grad, {h, b});
      const double fd = directional_fd(u, 0.3, h, b, m, 1e-6);
      CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
    }
  }
}

TEST_CASE("epsilon sweep shows second-order central differences") {
  const auto m = SigmaModel::default_model();
  const auto u = test::sine(128, 0.3);
  const auto h = test::sine(128, 0.4, 3);
  const double b = 0.8;
  const double an = directional_derivative(frechet_derivative(u, 0.3, m), {h, b});
  double prev = 0.0;
  for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const double err = std::abs(directional_fd(u, 0.3, h, b, m, eps) - an) / std::abs(an);
    CHECK(err <= 1e-5 * (eps >= 1e-3 ? 100.0 : 1.0));
    if (eps == 1e-4) CHECK(prev / err == doctest::Approx(100.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("Gateaux second derivative") {
  const auto m = SigmaModel::default_model();
  Rng rng(31);
  SUBCASE("critical point identity") {
    for (double ab : {0.0, kPi / 4, kPi / 2}) {
      const auto h = random_band_limited(rng, 128, 8, 0.5);
      const double b = uniform(rng, -1, 1);
      const auto d = gateaux_second_derivative(GridFunction(128), ab, h, b, m);
      CHECK(x_norm({d.u_part - m(ab) * h, d.alpha_part - m.d2(ab) * b}) <= 1e-12);
    }
  }
  SUBCASE("zero direction") {
    const auto d = gateaux_second_derivative(test::sine(64, 0.1), 0.3, GridFunction(64), 0.0, m);
    CHECK(x_norm(d.as_xvector()) == 0.0);
  }
  SUBCASE("finite differences of the gradient") {
    const auto u = test::sine(256, 0.05);
    const double eps = 1e-6;
    for (int i = 0; i < 10; ++i) {
      const auto h = random_band_limited(rng, 256, 8, 0.5);
      const double b = uniform(rng, -1, 1);
      const auto gp = frechet_derivative(u + eps * h, 0.3 + eps * b, m);
      const auto gm = frechet_derivative(u - eps * h, 0.3 - eps * b, m);
      const auto an = gateaux_second_derivative(u, 0.3, h, b, m);
      const XVector diff{(1 / (2 * eps)) * (gp.u_part - gm.u_part) - an.u_part,
                         (gp.alpha_part - gm.alpha_part) / (2 * eps) - an.alpha_part};
      CHECK(x_norm(diff) <= 1e-5 * x_norm(an.as_xvector()));
    }
  }
  SUBCASE("Hessian is symmetric at critical points") {
    for (double ab : {0.0, kPi / 4}) {
      const auto h1 = random_band_limited(rng, 128, 8, 0.5);
      const auto h2 = random_band_limited(rng, 128, 8, 0.5);
      const double b1 = uniform(rng, -1, 1), b2 = uniform(rng, -1, 1);
      const auto d1 = gateaux_second_derivative(GridFunction(128), ab, h1, b1, m);
      const auto d2 = gateaux_second_derivative(GridFunction(128), ab, h2, b2, m);
      CHECK(std::abs(x_inner(d1.as_xvector(), {h2, b2}) - x_inner(d2.as_xvector(), {h1, b1})) <=
            1e-10);
    }
  }
}

TEST_CASE("critical manifold") {
  const auto m = SigmaModel::default_model();
  CHECK(critical_manifold_check(GridFunction(64), kPi / 4, m));
  CHECK_FALSE(critical_manifold_check(GridFunction(64), 0.1, m));
  CHECK_FALSE(critical_manifold_check(test::sine(64, 1e-3), kPi / 4, m));
  CHECK(critical_manifold_check(GridFunction(64), 1.234, SigmaModel::constant(2.0)));
}

TEST_CASE("randomized consistency over the model families") {
  Rng rng(4);
  for (const auto& m : {SigmaModel::default_model(), SigmaModel::quadratic_convex(1.0, 1.0),
                        SigmaModel::constant(2.0)}) {
    const auto g = check_gradient_consistency(rng, m);
    CHECK_MESSAGE(g.passed, g.name, " worst ", g.worst);
    const auto s = check_second_derivative_consistency(rng, m);
    CHECK_MESSAGE(s.passed, s.name, " worst ", s.worst);
  }
}

TEST_CASE("auxiliary Lipschitz bounds") {
  Rng rng(8);
  for (const auto& r : check_lipschitz_bounds(rng)) {
    CHECK_MESSAGE(r.passed, r.name, " worst slack ", r.worst);
    CHECK(r.trials == 10000);
  }
}
