#include "grainflow/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace grainflow {
namespace {

void require_positive_base(double base, const char* what) {
  if (!(base > 0.0) || !std::isfinite(base)) {
    throw PositivityError(std::string(what) + " must be > 0 (positivity floor)");
  }
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace

SigmaModel SigmaModel::constant(double c) {
  require_positive_base(c, "constant sigma");
  return {Kind::Constant, c, 0.0, 0.0};
}

SigmaModel SigmaModel::trig_periodic(double base, double amplitude, double frequency) {
  require_positive_base(base, "base");
  require_nonnegative(amplitude, "amplitude");
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw std::invalid_argument("frequency must be finite and > 0");
  }
  return {Kind::TrigPeriodic, base, amplitude, frequency};
}

SigmaModel SigmaModel::quadratic_convex(double base, double curvature) {
  require_positive_base(base, "base");
  require_nonnegative(curvature, "curvature");
  return {Kind::QuadraticConvex, base, curvature, 0.0};
}

SigmaModel SigmaModel::quartic_well(double base, double coefficient) {
  require_positive_base(base, "base");
  require_nonnegative(coefficient, "coefficient");
  return {Kind::QuarticWell, base, coefficient, 0.0};
}

std::string SigmaModel::kind_name() const {
  switch (kind_) {
    case Kind::Constant: return "constant";
    case Kind::TrigPeriodic: return "trig_periodic";
    case Kind::QuadraticConvex: return "quadratic_convex";
    case Kind::QuarticWell: return "quartic_well";
  }
  return "unknown";
}

double SigmaModel::eval(double alpha, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("sigma derivative order must be 0..3");
  switch (kind_) {
    case Kind::Constant:
      return order == 0 ? p0_ : 0.0;
    case Kind::TrigPeriodic: {
      const double a = p1_;
      const double f = p2_;
      switch (order) {
        case 0: {
          const double s = std::sin(f * alpha);
          return p0_ + a * s * s;
        }
        case 1: return a * f * std::sin(2.0 * f * alpha);
        case 2: return 2.0 * a * f * f * std::cos(2.0 * f * alpha);
        default: return -4.0 * a * f * f * f * std::sin(2.0 * f * alpha);
      }
    }
    case Kind::QuadraticConvex:
      switch (order) {
        case 0: return p0_ + p1_ * alpha * alpha;
        case 1: return 2.0 * p1_ * alpha;
        case 2: return 2.0 * p1_;
        default: return 0.0;
      }
    case Kind::QuarticWell: {
      const double a2 = alpha * alpha;
      switch (order) {
        case 0: return p0_ + p1_ * a2 * a2;
        case 1: return 4.0 * p1_ * a2 * alpha;
        case 2: return 12.0 * p1_ * a2;
        default: return 24.0 * p1_ * alpha;
      }
    }
  }
  return 0.0;
}

double SigmaModel::difference(double a, double b) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::TrigPeriodic:
      // sin^2 x - sin^2 y = sin(x - y) sin(x + y)
      return p1_ * std::sin(p2_ * (a - b)) * std::sin(p2_ * (a + b));
    case Kind::QuadraticConvex: return p1_ * (a - b) * (a + b);
    case Kind::QuarticWell: return p1_ * (a - b) * (a + b) * (a * a + b * b);
  }
  return 0.0;
}

double SigmaModel::sampled_min(double lo, double hi, int count) const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    m = std::min(m, eval(lo + (hi - lo) * t));
  }
  return m;
}

double SigmaModel::sampled_max(double lo, double hi, int count) const {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    m = std::max(m, eval(lo + (hi - lo) * t));
  }
  return m;
}

double SigmaModel::period() const noexcept {
  return kind_ == Kind::TrigPeriodic ? std::numbers::pi / p2_ : 0.0;
}

double SigmaModel::max_along_flow(double alpha0) const {
  switch (kind_) {
    case Kind::Constant: return p0_;
    case Kind::TrigPeriodic: return std::max(sampled_max(0.0, period()), p0_ + p1_);
    default: return eval(alpha0);
  }
}

bool SigmaModel::satisfies_convexity_condition() const noexcept {
  return kind_ != Kind::TrigPeriodic || p1_ == 0.0;
}

CriticalPointSet find_critical_points(const SigmaModel& model, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("critical point search needs a < b");
  CriticalPointSet out;
  // Zero amplitude/curvature degenerates to a constant model.
  if (model.kind() == SigmaModel::Kind::Constant || model.p1() == 0.0) {
    out.all_critical = true;
    return out;
  }

  constexpr int kSamples = 10000;
  std::vector<double> xs(kSamples), ds(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    xs[i] = a + (b - a) * static_cast<double>(i) / (kSamples - 1);
    ds[i] = model.d1(xs[i]);
  }

  auto push = [&](double x) {
    if (!out.points.empty() && std::abs(out.points.back().alpha_bar - x) < 1e-9) return;
    const double s2 = model.d2(x);
    out.points.push_back({x, s2, std::abs(s2) < kDegeneracyThreshold});
  };

  for (int i = 0; i < kSamples; ++i) {
    if (ds[i] == 0.0) {
      push(xs[i]);
      continue;
    }
    if (i + 1 >= kSamples) break;
    if (ds[i + 1] == 0.0) continue;
    if ((ds[i] > 0.0) == (ds[i + 1] > 0.0)) continue;

    double lo = xs[i], hi = xs[i + 1];
    double dlo = ds[i];
    double best = lo;
    double best_abs = std::abs(dlo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double dm = model.d1(mid);
      if (std::abs(dm) < best_abs) {
        best = mid;
        best_abs = std::abs(dm);
      }
      if (dm == 0.0) break;
      if ((dm > 0.0) == (dlo > 0.0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
        break;
      }
    }
    if (best_abs <= kCriticalTolerance) push(best);
  }
  return out;
}

CriticalPoint nearest_critical_point(const SigmaModel& model, double alpha) {
  if (model.kind() == SigmaModel::Kind::Constant) return {alpha, 0.0, true};
  const double w = model.period() > 0.0 ? model.period() : std::max(1.0, 2.0 * std::abs(alpha));
  const auto set = find_critical_points(model, alpha - w, alpha + w);
  if (set.all_critical) return {alpha, model.d2(alpha), true};
  if (set.points.empty()) throw std::runtime_error("no critical point near alpha");
  return *std::min_element(set.points.begin(), set.points.end(),
                           [&](const CriticalPoint& x, const CriticalPoint& y) {
                             return std::abs(x.alpha_bar - alpha) < std::abs(y.alpha_bar - alpha);
                           });
}

}  // namespace grainflow
