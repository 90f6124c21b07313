#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "grainflow/grid.hpp"

namespace grainflow {

/// Single RNG stream used by every sampling routine.
using Rng = std::mt19937_64;

/// Random trigonometric polynomial sum_{k=1..max_mode} a_k cos(2 pi k x) + b_k sin(2 pi k x)
/// on n points, coefficients uniform in [-1, 1] with 1/k^2 decay, rescaled so
/// that max |f| = amplitude. max_mode must be < n/2.
std::vector<double> random_trig_polynomial(Rng& rng, std::size_t n, std::size_t max_mode,
                                           double amplitude);

/// As random_trig_polynomial, with sup norm drawn uniformly in (0, max_amplitude].
GridFunction random_band_limited(Rng& rng, std::size_t n, std::size_t max_mode,
                                 double max_amplitude);

double uniform(Rng& rng, double lo, double hi);

}  // namespace grainflow
