#pragma once

// FFTW-backed spectral multipliers on uniform periodic grids.

#include <cstddef>
#include <span>

namespace grainflow::spectral {

// Plans and buffers are cached per thread and per N; `in` and `out` may alias.

/// out = f'  (Nyquist mode dropped)
void differentiate(std::span<const double> in, std::span<double> out);
/// out = f'' (Nyquist mode dropped)
void differentiate_twice(std::span<const double> in, std::span<double> out);
/// out = zero-mean primitive of f - mean(f) (Nyquist mode dropped)
void integrate_zero_mean(std::span<const double> in, std::span<double> out);

}  // namespace grainflow::spectral
