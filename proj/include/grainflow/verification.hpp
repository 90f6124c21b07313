#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grainflow/random_fields.hpp"
#include "grainflow/sigma.hpp"

namespace grainflow {

/// Outcome of a randomized property check. Inequality checks report the
/// smallest slack (bound minus value) with relation ">="; consistency checks
/// report the largest error with relation "<=". A trial passes when
/// `worst relation threshold` holds for it.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  double threshold = 0.0;
  std::string relation;
};

/// Lipschitz bounds of sqrt(1+x^2), x/sqrt(1+x^2), (1+x^2)^(-3/2) and
/// x (1+x^2)^(-5/2) with constants 1, 1, 3, 15 on random pairs in [-100, 100]^2.
std::vector<CheckResult> check_lipschitz_bounds(Rng& rng, std::size_t pairs = 10000);

/// sup |f - mean f| <= ||f_x|| for random band-limited f (non-zero mean allowed).
CheckResult check_mean_embedding(Rng& rng, std::size_t n = 128, std::size_t count = 200);
/// sup |u| <= ||u_x|| for zero-mean u.
CheckResult check_x_embedding(Rng& rng, std::size_t n = 128, std::size_t count = 200);
/// sup |u_x| <= ||u_xx|| + ||u_x|| <= sqrt(2) ||u||_{H^2}; both links are checked.
CheckResult check_y_embedding(Rng& rng, std::size_t n = 128, std::size_t count = 200);
/// int f_x^2 <= int f_xx^2.
CheckResult check_poincare(Rng& rng, std::size_t n = 128, std::size_t count = 200);
/// x_norm(v) <= y_norm(v).
CheckResult check_x_below_y(Rng& rng, std::size_t n = 128, std::size_t count = 200);

/// Central differences of E along random directions against (E', (h, beta))_X.
CheckResult check_gradient_consistency(Rng& rng, const SigmaModel& model, std::size_t n = 128,
                                       std::size_t trials = 100, double eps = 1e-6,
                                       double tol = 1e-5);

/// Central differences of E' against the Gateaux derivative, in X norm.
CheckResult check_second_derivative_consistency(Rng& rng, const SigmaModel& model,
                                                std::size_t n = 128, std::size_t trials = 100,
                                                double eps = 1e-6, double tol = 1e-5);

/// DE'((0, alpha_bar), (h, beta)) = (sigma h, sigma'' beta) in X norm.
CheckResult check_critical_point_identity(Rng& rng, const SigmaModel& model, double alpha_bar,
                                          std::size_t n = 128, std::size_t trials = 50,
                                          double tol = 1e-12);

/// Lipschitz, embedding, Poincare and norm-ordering checks in a fixed order.
std::vector<CheckResult> inequality_suite(Rng& rng);

}  // namespace grainflow
