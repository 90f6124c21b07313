#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace grainflow {

/// A model parameter choice that violates sigma >= C1 > 0.
class PositivityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Analytic grain boundary energy density sigma(alpha).
///
///   Constant          sigma = c
///   TrigPeriodic      sigma = base + amplitude * sin^2(frequency * alpha)
///   QuadraticConvex   sigma = base + curvature * alpha^2
///   QuarticWell       sigma = base + coefficient * alpha^4
///
/// QuarticWell has sigma''(0) = 0 and is used for the degenerate-equilibrium
/// exploratory scenario. Every model has a strictly positive floor C1.
class SigmaModel {
 public:
  enum class Kind { Constant, TrigPeriodic, QuadraticConvex, QuarticWell };

  static SigmaModel constant(double c);
  static SigmaModel trig_periodic(double base, double amplitude, double frequency = 2.0);
  static SigmaModel quadratic_convex(double base, double curvature);
  static SigmaModel quartic_well(double base, double coefficient);

  /// TrigPeriodic(1, 0.5, 2).
  static SigmaModel default_model() { return trig_periodic(1.0, 0.5, 2.0); }

  Kind kind() const noexcept { return kind_; }
  std::string kind_name() const;

  // Parameters: p0 is c or base, p1 is amplitude/curvature/coefficient,
  // p2 is the frequency (TrigPeriodic only).
  double p0() const noexcept { return p0_; }
  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }

  /// d^order sigma / d alpha^order, order in 0..3. Throws std::invalid_argument
  /// for any other order.
  double eval(double alpha, int order = 0) const;
  double operator()(double alpha) const { return eval(alpha, 0); }
  double d1(double alpha) const { return eval(alpha, 1); }
  double d2(double alpha) const { return eval(alpha, 2); }
  double d3(double alpha) const { return eval(alpha, 3); }

  /// sigma(a) - sigma(b) without cancellation for a close to b.
  double difference(double a, double b) const;

  /// Analytic lower bound C1 > 0 with sigma >= C1 everywhere.
  double positivity_floor() const noexcept { return p0_; }

  /// Minimum of sigma over `count` uniform samples of [lo, hi].
  double sampled_min(double lo, double hi, int count = 10000) const;
  double sampled_max(double lo, double hi, int count = 10000) const;

  /// Upper bound for sigma(alpha(t)) along a flow started at alpha0.
  /// Periodic and constant models use the sampled global maximum; for the
  /// confining models sigma(alpha(t)) is non-increasing in t, so sigma(alpha0)
  /// bounds it.
  double max_along_flow(double alpha0) const;

  /// Period in alpha, or 0 for non-periodic models.
  double period() const noexcept;

  /// alpha * sigma'(alpha) >= 0 for all alpha.
  bool satisfies_convexity_condition() const noexcept;

 private:
  SigmaModel(Kind k, double p0, double p1, double p2) : kind_(k), p0_(p0), p1_(p1), p2_(p2) {}
  Kind kind_;
  double p0_;
  double p1_;
  double p2_;
};

struct CriticalPoint {
  double alpha_bar = 0.0;
  double sigma_second = 0.0;
  bool degenerate = false;
};

/// Result of a critical point search. For a Constant model every alpha is
/// critical: all_critical is set and points is empty.
struct CriticalPointSet {
  bool all_critical = false;
  std::vector<CriticalPoint> points;
};

inline constexpr double kCriticalTolerance = 1e-12;
inline constexpr double kDegeneracyThreshold = 1e-10;

/// Roots of sigma' in [a, b] by sign-change bracketing on a 10^4-point sample
/// followed by bisection. Throws std::invalid_argument unless a < b.
CriticalPointSet find_critical_points(const SigmaModel& model, double a, double b);

/// Critical point closest to alpha (Constant: alpha itself).
CriticalPoint nearest_critical_point(const SigmaModel& model, double alpha);

}  // namespace grainflow
