#include <doctest.h>

#include <cmath>

#include "grainflow/random_fields.hpp"
#include "grainflow/sigma.hpp"
#include "support.hpp"

using namespace grainflow;
using test::kPi;

TEST_CASE("closed-form values") {
  const auto c = SigmaModel::constant(2.0);
  CHECK(c.eval(0.7, 0) == 2.0);
  for (int order = 1; order <= 3; ++order) CHECK(c.eval(-3.1, order) == 0.0);

  const auto t = SigmaModel::default_model();
  CHECK(t.eval(kPi / 8) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(t.kind_name() == "trig_periodic");
  CHECK_THROWS_AS(t.eval(0.1, 4), std::invalid_argument);
  CHECK_THROWS_AS(t.eval(0.1, -1), std::invalid_argument);

  const auto q = SigmaModel::quadratic_convex(1.0, 3.0);
  CHECK(q(2.0) == 13.0);
  CHECK(q.d1(2.0) == 12.0);
  CHECK(q.d2(2.0) == 6.0);
  CHECK(q.d3(2.0) == 0.0);

  const auto w = SigmaModel::quartic_well(1.0, 2.0);
  CHECK(w(1.0) == 3.0);
  CHECK(w.d2(0.0) == 0.0);
}

TEST_CASE("positivity floor") {
  CHECK_THROWS_AS(SigmaModel::trig_periodic(0.0, 0.5), PositivityError);
  CHECK_THROWS_AS(SigmaModel::constant(-1.0), PositivityError);
  CHECK_THROWS_AS(SigmaModel::quadratic_convex(0.0, 1.0), PositivityError);
  CHECK_THROWS_AS(SigmaModel::trig_periodic(1.0, -0.5), std::invalid_argument);
  for (const auto& m : {SigmaModel::default_model(), SigmaModel::quadratic_convex(0.5, 2.0),
                        SigmaModel::constant(3.0), SigmaModel::quartic_well(0.2, 1.0)}) {
    CHECK(m.sampled_min(-10.0, 10.0) >= m.positivity_floor());
    CHECK(m.positivity_floor() > 0.0);
  }
}

TEST_CASE("finite differences match analytic derivatives") {
  Rng rng(17);
  const double eps = 1e-5;
  for (const auto& m : {SigmaModel::default_model(), SigmaModel::trig_periodic(0.3, 1.7, 3.0),
                        SigmaModel::quadratic_convex(1.0, 2.0), SigmaModel::constant(2.0),
                        SigmaModel::quartic_well(1.0, 1.0)}) {
    for (int i = 0; i < 1000; ++i) {
      const double a = uniform(rng, -2.0, 2.0);
      for (int order = 1; order <= 3; ++order) {
        const double fd = (m.eval(a + eps, order - 1) - m.eval(a - eps, order - 1)) / (2 * eps);
        const double ex = m.eval(a, order);
        CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
      }
    }
  }
}

TEST_CASE("trig model is periodic") {
  Rng rng(1);
  const auto m = SigmaModel::trig_periodic(1.0, 0.5, 2.0);
  CHECK(m.period() == doctest::Approx(kPi / 2));
  for (int i = 0; i < 100; ++i) {
    const double a = uniform(rng, -3.0, 3.0);
    CHECK(std::abs(m(a + m.period()) - m(a)) <= 1e-14);
  }
}

TEST_CASE("difference avoids cancellation") {
  const auto m = SigmaModel::default_model();
  const double a = 0.3, d = 1e-12;
  CHECK(m.difference(a + d, a) == doctest::Approx(m.d1(a) * d).epsilon(1e-6));
  const auto q = SigmaModel::quadratic_convex(1.0, 1.0);
  CHECK(q.difference(1e-9, 0.0) == doctest::Approx(1e-18).epsilon(1e-12));
  CHECK(m.difference(0.7, 0.2) == doctest::Approx(m(0.7) - m(0.2)).epsilon(1e-14));
}

TEST_CASE("convexity condition") {
  CHECK(SigmaModel::quadratic_convex(1.0, 1.0).satisfies_convexity_condition());
  CHECK(SigmaModel::constant(1.0).satisfies_convexity_condition());
  CHECK_FALSE(SigmaModel::default_model().satisfies_convexity_condition());
}

TEST_CASE("critical points") {
  SUBCASE("trig periodic") {
    const auto m = SigmaModel::default_model();
    const auto set = find_critical_points(m, -0.1, 1.7);
    CHECK_FALSE(set.all_critical);
    REQUIRE(set.points.size() == 3);
    const double expected[] = {0.0, kPi / 4, kPi / 2};
    const double second[] = {4.0, -4.0, 4.0};
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(set.points[i].alpha_bar == doctest::Approx(expected[i]).epsilon(1e-12));
      CHECK(std::abs(m.d1(set.points[i].alpha_bar)) <= kCriticalTolerance);
      CHECK(set.points[i].sigma_second == doctest::Approx(second[i]).epsilon(1e-10));
      CHECK_FALSE(set.points[i].degenerate);
    }
  }
  SUBCASE("quadratic") {
    const auto set = find_critical_points(SigmaModel::quadratic_convex(1.0, 1.0), -1.0, 1.0);
    REQUIRE(set.points.size() == 1);
    CHECK(std::abs(set.points[0].alpha_bar) <= 1e-12);
    CHECK(set.points[0].sigma_second == 2.0);
  }
  SUBCASE("constant") {
    const auto set = find_critical_points(SigmaModel::constant(3.0), -5.0, 5.0);
    CHECK(set.all_critical);
    CHECK(set.points.empty());
  }
  SUBCASE("quartic well is degenerate") {
    const auto set = find_critical_points(SigmaModel::quartic_well(1.0, 1.0), -1.0, 1.0);
    REQUIRE(set.points.size() == 1);
    CHECK(set.points[0].degenerate);
  }
  SUBCASE("no sign change") {
    CHECK(find_critical_points(SigmaModel::quadratic_convex(1.0, 1.0), 1.0, 2.0).points.empty());
  }
  SUBCASE("bad interval") {
    CHECK_THROWS_AS(find_critical_points(SigmaModel::default_model(), 1.0, 1.0),
                    std::invalid_argument);
  }
  SUBCASE("nearest") {
    const auto m = SigmaModel::default_model();
    CHECK(std::abs(nearest_critical_point(m, 0.3).alpha_bar) <= 1e-12);
    CHECK(nearest_critical_point(m, 0.5).alpha_bar == doctest::Approx(kPi / 4));
  }
}
