#include "grainflow/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace grainflow {

double length(const GridFunction& u, DiffScheme scheme) {
  return 1.0 + length_excess(u, scheme);
}

double length_excess(const GridFunction& u, DiffScheme scheme) {
  const auto ux = derivative(u, scheme);
  double s = 0.0;
  for (double p : ux) {
    const double p2 = p * p;
    s += p2 / (1.0 + std::sqrt(1.0 + p2));
  }
  return s / static_cast<double>(ux.size());
}

double energy(const GridFunction& u, double alpha, const SigmaModel& model, DiffScheme scheme) {
  return model(alpha) * length(u, scheme);
}

double energy_gap(const GridFunction& u, double alpha, double alpha_bar, const SigmaModel& model) {
  return model(alpha) * length_excess(u) + model.difference(alpha, alpha_bar);
}

EnergyGradient frechet_derivative(const GridFunction& u, double alpha, const SigmaModel& model) {
  const auto ux = derivative(u);
  std::vector<double> w(ux.size());
  double len = 0.0;
  for (std::size_t j = 0; j < ux.size(); ++j) {
    const double v = std::sqrt(1.0 + ux[j] * ux[j]);
    w[j] = ux[j] / v;
    len += v;
  }
  len /= static_cast<double>(ux.size());
  return {model(alpha) * antiderivative(w), model.d1(alpha) * len};
}

EnergyGradient gateaux_second_derivative(const GridFunction& u, double alpha,
                                         const GridFunction& h, double beta,
                                         const SigmaModel& model) {
  if (u.size() != h.size()) throw std::invalid_argument("grid size mismatch");
  const auto ux = derivative(u);
  const auto hx = derivative(h);
  const double s0 = model(alpha);
  const double s1 = model.d1(alpha);
  const double s2 = model.d2(alpha);

  std::vector<double> integrand(ux.size());
  double alpha_part = 0.0;
  for (std::size_t j = 0; j < ux.size(); ++j) {
    const double v = std::sqrt(1.0 + ux[j] * ux[j]);
    integrand[j] = s1 * beta * ux[j] / v + s0 * hx[j] / (v * v * v);
    alpha_part += s2 * beta * v + s1 * ux[j] * hx[j] / v;
  }
  alpha_part /= static_cast<double>(ux.size());
  return {antiderivative(integrand), alpha_part};
}

double directional_derivative(const EnergyGradient& grad, const XVector& direction) {
  return x_inner(grad.as_xvector(), direction);
}

bool critical_manifold_check(const GridFunction& u, double alpha, const SigmaModel& model) {
  if (h2_seminorm(u) > 1e-10) return false;
  return model.kind() == SigmaModel::Kind::Constant || std::abs(model.d1(alpha)) <= 1e-10;
}

}  // namespace grainflow
