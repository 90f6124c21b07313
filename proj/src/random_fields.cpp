#include "grainflow/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace grainflow {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<double> random_trig_polynomial(Rng& rng, std::size_t n, std::size_t max_mode,
                                           double amplitude) {
  if (max_mode == 0 || 2 * max_mode >= n) {
    throw std::invalid_argument("max_mode must satisfy 1 <= max_mode < n/2");
  }
  std::vector<double> f(n, 0.0);
  for (std::size_t k = 1; k <= max_mode; ++k) {
    const double decay = 1.0 / static_cast<double>(k * k);
    const double a = uniform(rng, -1.0, 1.0) * decay;
    const double b = uniform(rng, -1.0, 1.0) * decay;
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * j) / static_cast<double>(n);
      f[j] += a * std::cos(phase) + b * std::sin(phase);
    }
  }
  double peak = 0.0;
  for (double x : f) peak = std::max(peak, std::abs(x));
  if (peak > 0.0) {
    for (double& x : f) x *= amplitude / peak;
  }
  return f;
}

GridFunction random_band_limited(Rng& rng, std::size_t n, std::size_t max_mode,
                                 double max_amplitude) {
  const double amp = max_amplitude * (1.0 - uniform(rng, 0.0, 1.0));
  return GridFunction::from_samples(random_trig_polynomial(rng, n, max_mode, amp));
}

}  // namespace grainflow
