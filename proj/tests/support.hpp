#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "grainflow/grid.hpp"

namespace test {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<double> sample(std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(static_cast<double>(j) / static_cast<double>(n));
  return v;
}

inline grainflow::GridFunction sine(std::size_t n, double amplitude, int k = 1) {
  return grainflow::GridFunction::from_samples(
      sample(n, [&](double x) { return amplitude * std::sin(2.0 * kPi * k * x); }));
}

inline double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

/// Composite Simpson rule on [0, 1] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, std::size_t m) {
  const double h = 1.0 / static_cast<double>(m);
  double s = f(0.0) + f(1.0);
  for (std::size_t i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) * h);
  return s * h / 3.0;
}

}  // namespace test
