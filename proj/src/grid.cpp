#include "grainflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spectral.hpp"

namespace grainflow {
namespace {

void require_grid_size(std::size_t n) {
  if (!is_valid_grid_size(n)) {
    throw std::invalid_argument("invalid grid size " + std::to_string(n) +
                                ": need a power of two >= 8");
  }
}

void subtract_mean(std::vector<double>& v) {
  const double m = mean(v);
  for (double& x : v) x -= m;
}

}  // namespace

bool is_valid_grid_size(std::size_t n) noexcept {
  return n >= 8 && (n & (n - 1)) == 0;
}

GridFunction::GridFunction(std::size_t n) {
  require_grid_size(n);
  values_.assign(n, 0.0);
}

GridFunction GridFunction::from_samples(std::span<const double> samples) {
  return from_samples(std::vector<double>(samples.begin(), samples.end()));
}

GridFunction GridFunction::from_samples(std::vector<double>&& samples) {
  require_grid_size(samples.size());
  GridFunction g;
  g.values_ = std::move(samples);
  subtract_mean(g.values_);
  return g;
}

GridFunction GridFunction::restore(std::vector<double>&& samples) {
  require_grid_size(samples.size());
  GridFunction g;
  g.values_ = std::move(samples);
  if (std::abs(mean(g.values_)) > 1e-12 * std::max(1.0, max_abs(g.values_))) subtract_mean(g.values_);
  return g;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("grid size mismatch");
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.values_[j] + b.values_[j];
  return GridFunction::from_samples(std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("grid size mismatch");
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.values_[j] - b.values_[j];
  return GridFunction::from_samples(std::move(v));
}

GridFunction operator*(double s, const GridFunction& a) {
  std::vector<double> v(a.values_);
  for (double& x : v) x *= s;
  return GridFunction::from_samples(std::move(v));
}

GridFunction make_grid_function(std::span<const double> samples) {
  return GridFunction::from_samples(samples);
}

std::vector<double> grid_points(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<double>(j) / static_cast<double>(n);
  return x;
}

double integrate(std::span<const double> f) {
  if (f.empty()) return 0.0;
  double s = 0.0;
  for (double x : f) s += x;
  return s / static_cast<double>(f.size());
}

double mean(std::span<const double> f) { return integrate(f); }

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

double l2_norm(std::span<const double> f) {
  if (f.empty()) return 0.0;
  double s = 0.0;
  for (double x : f) s += x * x;
  return std::sqrt(s / static_cast<double>(f.size()));
}

std::vector<double> derivative(std::span<const double> f, DiffScheme scheme) {
  require_grid_size(f.size());
  std::vector<double> out(f.size());
  if (scheme == DiffScheme::Spectral) {
    spectral::differentiate(f, out);
    return out;
  }
  const std::size_t n = f.size();
  const double inv_2h = 0.5 * static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = (f[(j + 1) % n] - f[(j + n - 1) % n]) * inv_2h;
  }
  return out;
}

std::vector<double> derivative(const GridFunction& u, DiffScheme scheme) {
  return derivative(u.values(), scheme);
}

std::vector<double> second_derivative(std::span<const double> f, DiffScheme scheme) {
  require_grid_size(f.size());
  std::vector<double> out(f.size());
  if (scheme == DiffScheme::Spectral) {
    spectral::differentiate_twice(f, out);
    return out;
  }
  const std::size_t n = f.size();
  const double inv_h2 = static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = (f[(j + 1) % n] - 2.0 * f[j] + f[(j + n - 1) % n]) * inv_h2;
  }
  return out;
}

std::vector<double> second_derivative(const GridFunction& u, DiffScheme scheme) {
  return second_derivative(u.values(), scheme);
}

GridFunction antiderivative(std::span<const double> f) {
  require_grid_size(f.size());
  std::vector<double> out(f.size());
  spectral::integrate_zero_mean(f, out);
  return GridFunction::from_samples(std::move(out));
}

double x_inner(const XVector& a, const XVector& b) {
  const auto ax = derivative(a.h);
  const auto bx = derivative(b.h);
  double s = 0.0;
  for (std::size_t j = 0; j < ax.size(); ++j) s += ax[j] * bx[j];
  return s / static_cast<double>(ax.size()) + a.beta * b.beta;
}

double x_norm(const XVector& v) {
  const double hx = l2_norm(derivative(v.h));
  return std::sqrt(hx * hx + v.beta * v.beta);
}

double h2_seminorm(const GridFunction& u) {
  const double ux = l2_norm(derivative(u));
  const double uxx = l2_norm(second_derivative(u));
  return std::sqrt(ux * ux + uxx * uxx);
}

double y_norm(const XVector& v) {
  const double h = h2_seminorm(v.h);
  return std::sqrt(h * h + v.beta * v.beta);
}

}  // namespace grainflow
