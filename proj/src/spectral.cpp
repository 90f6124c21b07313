#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace grainflow::spectral {
namespace {

// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Workspace {
 public:
  explicit Workspace(std::size_t n) : n_(n) {
    real_ = fftw_alloc_real(n);
    spec_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE keeps plan selection (and so rounding) reproducible.
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_, FFTW_ESTIMATE);
  }
  ~Workspace() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  std::size_t size() const { return n_; }
  std::size_t modes() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(forward_);
  }
  // Backward transform with the 1/N normalization folded in.
  void backward(std::span<double> out) {
    fftw_execute(backward_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = real_[j] * scale;
  }
  std::complex<double>* spectrum() { return reinterpret_cast<std::complex<double>*>(spec_); }

 private:
  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

Workspace& workspace(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<Workspace>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Workspace>(n);
  return *slot;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

void differentiate(std::span<const double> in, std::span<double> out) {
  auto& ws = workspace(in.size());
  ws.forward(in);
  auto* c = ws.spectrum();
  const std::size_t nyquist = ws.size() / 2;
  c[0] = 0.0;
  for (std::size_t k = 1; k < nyquist; ++k) {
    const double w = kTwoPi * static_cast<double>(k);
    c[k] = std::complex<double>(-w * c[k].imag(), w * c[k].real());
  }
  c[nyquist] = 0.0;
  ws.backward(out);
}

void differentiate_twice(std::span<const double> in, std::span<double> out) {
  auto& ws = workspace(in.size());
  ws.forward(in);
  auto* c = ws.spectrum();
  const std::size_t nyquist = ws.size() / 2;
  c[0] = 0.0;
  for (std::size_t k = 1; k < nyquist; ++k) {
    const double w = kTwoPi * static_cast<double>(k);
    c[k] *= -w * w;
  }
  c[nyquist] = 0.0;
  ws.backward(out);
}

void integrate_zero_mean(std::span<const double> in, std::span<double> out) {
  auto& ws = workspace(in.size());
  ws.forward(in);
  auto* c = ws.spectrum();
  const std::size_t nyquist = ws.size() / 2;
  c[0] = 0.0;
  for (std::size_t k = 1; k < nyquist; ++k) {
    const double w = kTwoPi * static_cast<double>(k);
    // divide by i*w
    c[k] = std::complex<double>(c[k].imag() / w, -c[k].real() / w);
  }
  c[nyquist] = 0.0;
  ws.backward(out);
}

}  // namespace grainflow::spectral
