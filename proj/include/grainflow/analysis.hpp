#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grainflow/energy.hpp"
#include "grainflow/flow.hpp"
#include "grainflow/random_fields.hpp"

namespace grainflow {

/// Least-squares line y = slope * x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Throws std::invalid_argument for fewer than 2 points or mismatched sizes.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Distance sqrt(||u||_{H^2}^2 + (alpha - alpha_bar)^2) to the equilibrium (0, alpha_bar).
double y_distance(const State& s, double alpha_bar);

// ---------------------------------------------------------------------------
// Lojasiewicz-Simon sampling and fitting

struct LsSample {
  double grad_y_norm = 0.0;  // ||E'(u, alpha)||_Y
  double energy_gap = 0.0;   // |E[u, alpha] - E[0, alpha_bar]|
  double y_distance = 0.0;   // Y distance of (u, alpha) to the equilibrium
};

enum class PerturbationMode { Mixed, UOnly, AlphaOnly };

struct LsSamplingOptions {
  std::size_t max_mode = 4;     // band limit of u perturbations
  double min_radius = 1e-6;     // radii are log-uniform in [min_radius, radius]
  PerturbationMode mode = PerturbationMode::Mixed;
};

inline constexpr double kGapFloor = 1e-14;

/// Equilibrium handed to an LS routine is not on the critical manifold.
class NotCriticalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Draws `count` random band-limited perturbations of the equilibrium (on its
/// grid) with Y-distance <= radius and returns (||E'||_Y, |E - E*|) pairs. Pairs whose
/// gap falls below kGapFloor are dropped.
std::vector<LsSample> ls_samples(const State& equilibrium, const SigmaModel& model, double radius,
                                 std::size_t count, Rng& rng, const LsSamplingOptions& opts = {});

struct LsFit {
  double theta = 0.5;             // clamped into (0, 1/2]
  double theta_unclamped = 0.5;   // 1 - slope
  double slope = 0.5;             // d log||E'||_Y / d log gap
  double intercept = 0.0;
  double c_constant = 0.0;        // min over samples of ||E'||_Y / gap^(1 - theta)
  double r_squared = 0.0;
  std::size_t n_points = 0;
  double neighborhood_radius = 0.0;
};

/// Regression of log ||E'||_Y on log gap. Needs >= 20 finite samples.
LsFit fit_ls_exponent(std::span<const LsSample> samples);

/// ||E'||_Y >= c_constant * gap^(1 - theta) on every sample.
bool verify_ls_inequality(std::span<const LsSample> samples, const LsFit& fit);

// ---------------------------------------------------------------------------
// Stability estimate along a trajectory

struct StabilityReport {
  bool degenerate = false;   // no record with a usable energy gap
  double theta = 0.5;
  double c3 = 0.0;           // max(c3_alpha, c3_u)
  double c3_alpha = 0.0;     // sup |alpha(t) - alpha(s)| / gap(t)^theta
  double c3_u = 0.0;         // sup ||u(t) - u(s)||_{L2} / gap(t)^theta over snapshots
  std::size_t pairs_checked = 0;
  std::size_t tail_records = 0;
  bool holds = true;
};

/// Trajectory does not approach the equilibrium.
class NonConvergentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Smallest C3 with |alpha(t) - alpha(s)|, ||u(t) - u(s)|| <= C3 |E(t) - E*|^theta
/// for all recorded t < s with gap(t) >= kGapFloor. Throws NonConvergentError
/// unless the final Y-distance is <= 0.1 times the initial one.
StabilityReport stability_check(const Trajectory& traj, double alpha_bar, double theta,
                                const SigmaModel& model);

// ---------------------------------------------------------------------------
// Length estimate

struct LengthReport {
  double length = 1.0;
  double lhs = 0.0;              // sigma(alpha) L
  double rhs = 0.0;              // sigma(alpha_bar) + c5 (sigma^2 ||w_x||^2 + sigma'^2 L^2)^gamma
  double slack = 0.0;            // rhs - lhs, evaluated without cancellation
  double curvature_term = 0.0;   // ||(u_x / sqrt(1 + u_x^2))_x||^2
  double gamma_exponent = 1.0;
  double c5 = 0.0;
  bool holds = true;
};

/// gamma = 1 / (2 (1 - theta))
double length_gamma_exponent(double theta);
/// c5 = 2^gamma / C2^(1 - theta)
double length_constant(const LsFit& fit);

LengthReport length_estimate_check(const GridFunction& u, double alpha, double alpha_bar,
                                   const SigmaModel& model, double gamma_exp, double c5);

// ---------------------------------------------------------------------------
// Decay classification

enum class DecayKind { Exponential, Algebraic, Undetermined };
std::string to_string(DecayKind k);

struct DecayClassification {
  DecayKind kind = DecayKind::Undetermined;
  double rate = 0.0;         // Exponential: gap ~ exp(-rate t); Algebraic: gap ~ t^(-rate)
  double r2_exponential = 0.0;
  double r2_algebraic = 0.0;
  std::size_t tail_records = 0;
};

/// Fits log gap against t and against log t on the tail (last half of the
/// records with gap >= kGapFloor) and keeps the better fit; Undetermined when
/// both r^2 < 0.95 or no record has a usable gap. Throws std::invalid_argument
/// when the tail has fewer than 100 records.
DecayClassification decay_classifier(const Trajectory& traj, const SigmaModel& model,
                                     double alpha_bar);
/// Uses the critical point nearest to the final misorientation.
DecayClassification decay_classifier(const Trajectory& traj, const SigmaModel& model);

/// |E - E*| per record, from alpha and L - 1.
std::vector<double> trajectory_gaps(const Trajectory& traj, const SigmaModel& model,
                                    double alpha_bar);

}  // namespace grainflow
