#pragma once

#include "grainflow/grid.hpp"
#include "grainflow/sigma.hpp"

namespace grainflow {

/// Element of X representing the Frechet derivative of E (or a directional
/// derivative of it). u_part is zero-mean by construction.
struct EnergyGradient {
  GridFunction u_part;
  double alpha_part = 0.0;

  XVector as_xvector() const { return {u_part, alpha_part}; }
};

/// L = int sqrt(1 + u_x^2) dx
double length(const GridFunction& u, DiffScheme scheme = DiffScheme::Spectral);

/// L - 1, summed as u_x^2 / (1 + sqrt(1 + u_x^2)) to keep small excesses exact.
double length_excess(const GridFunction& u, DiffScheme scheme = DiffScheme::Spectral);

/// E[u, alpha] = sigma(alpha) * L
double energy(const GridFunction& u, double alpha, const SigmaModel& model,
              DiffScheme scheme = DiffScheme::Spectral);

/// E[u, alpha] - E[0, alpha_bar], evaluated as
/// sigma(alpha) (L - 1) + (sigma(alpha) - sigma(alpha_bar)) so that gaps down to
/// ~1e-16 relative survive.
double energy_gap(const GridFunction& u, double alpha, double alpha_bar, const SigmaModel& model);

/// Frechet derivative on X:
///   u_part  = sigma(alpha) * zero-mean primitive of u_x / sqrt(1 + u_x^2)
///   alpha   = sigma'(alpha) * L
/// The primitive is taken of the zero-mean part of the integrand; the mean
/// part only contributes a non-periodic linear term that is X-orthogonal to
/// every periodic direction.
EnergyGradient frechet_derivative(const GridFunction& u, double alpha, const SigmaModel& model);

/// Directional (Gateaux) derivative of the Frechet derivative at (u, alpha)
/// in the direction (h, beta).
EnergyGradient gateaux_second_derivative(const GridFunction& u, double alpha,
                                         const GridFunction& h, double beta,
                                         const SigmaModel& model);

/// (E'(u, alpha), (h, beta))_X
double directional_derivative(const EnergyGradient& grad, const XVector& direction);

/// Membership of (u, alpha) in the critical manifold {0} x {sigma'(alpha) = 0}.
bool critical_manifold_check(const GridFunction& u, double alpha, const SigmaModel& model);

}  // namespace grainflow
