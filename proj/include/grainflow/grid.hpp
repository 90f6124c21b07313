#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace grainflow {

/// Differentiation scheme for periodic samples. Spectral is the default;
/// Central (2nd-order central differences) exists for cross-validation.
enum class DiffScheme { Spectral, Central };

/// N >= 8 and a power of two.
bool is_valid_grid_size(std::size_t n) noexcept;

/// Uniform samples u(x_j), x_j = j/N, of a zero-mean periodic function on [0,1).
///
/// The mean is subtracted on construction, so every GridFunction satisfies
/// the zero-average constraint up to rounding.
class GridFunction {
 public:
  /// All-zero function on n points. Throws std::invalid_argument on a bad n.
  explicit GridFunction(std::size_t n);

  /// Subtracts the sample mean. Throws std::invalid_argument on a bad size.
  static GridFunction from_samples(std::span<const double> samples);
  static GridFunction from_samples(std::vector<double>&& samples);
  /// Reloads stored samples unchanged when their mean is already at rounding
  /// level (|mean| <= 1e-12 max(1, sup|f|)), so saved states round-trip bit-exactly.
  static GridFunction restore(std::vector<double>&& samples);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(double s, const GridFunction& a);

 private:
  GridFunction() = default;
  std::vector<double> values_;
};

/// make_grid_function: validated construction with mean subtraction.
GridFunction make_grid_function(std::span<const double> samples);

/// Grid points x_j = j/n.
std::vector<double> grid_points(std::size_t n);

/// Rectangle rule (1/N) sum f_j.
double integrate(std::span<const double> f);
double mean(std::span<const double> f);
double max_abs(std::span<const double> f);

/// sqrt(integrate(f^2)).
double l2_norm(std::span<const double> f);

/// Derivative of periodic samples. The spectral version is exact for
/// trigonometric polynomials of degree < N/2 (the Nyquist mode is dropped).
std::vector<double> derivative(std::span<const double> f,
                               DiffScheme scheme = DiffScheme::Spectral);
std::vector<double> derivative(const GridFunction& u,
                               DiffScheme scheme = DiffScheme::Spectral);

std::vector<double> second_derivative(std::span<const double> f,
                                      DiffScheme scheme = DiffScheme::Spectral);
std::vector<double> second_derivative(const GridFunction& u,
                                      DiffScheme scheme = DiffScheme::Spectral);

/// Zero-mean periodic primitive F with F' = f - mean(f), computed by
/// dividing each Fourier mode by its wavenumber.
GridFunction antiderivative(std::span<const double> f);

/// Element (h, beta) of H^1_per.ave x R (or H^2 x R).
struct XVector {
  GridFunction h;
  double beta = 0.0;
};

/// int h1_x h2_x dx + beta1 beta2
double x_inner(const XVector& a, const XVector& b);
/// sqrt(int h_x^2 + beta^2)
double x_norm(const XVector& v);
/// sqrt(int h_x^2 + int h_xx^2 + beta^2)
double y_norm(const XVector& v);

/// sqrt(int u_x^2 + int u_xx^2), the u-part of the Y norm.
double h2_seminorm(const GridFunction& u);

}  // namespace grainflow
