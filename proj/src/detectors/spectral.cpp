/// @file spectral.cpp

#include "pitchgate/detectors/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace pitchgate {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Impl {
  std::size_t n = 0;
  double* time = nullptr;
  fftw_complex* freq = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(std::size_t size) : n(size) {
    time = fftw_alloc_real(n);
    freq = fftw_alloc_complex(n / 2 + 1);
    if (time == nullptr || freq == nullptr) {
      release();
      throw std::bad_alloc();
    }
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    fwd = fftw_plan_dft_r2c_1d(len, time, freq, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(len, freq, time, FFTW_ESTIMATE);
  }

  ~Impl() { release(); }

  void release() {
    std::lock_guard lock(planner_mutex());
    if (fwd != nullptr) fftw_destroy_plan(fwd);
    if (inv != nullptr) fftw_destroy_plan(inv);
    fftw_free(time);
    fftw_free(freq);
    fwd = inv = nullptr;
    time = nullptr;
    freq = nullptr;
  }
};

RealFft::RealFft(std::size_t size) : impl_(std::make_unique<Impl>(size)) {}
RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::size_t RealFft::size() const noexcept { return impl_->n; }

std::span<double> RealFft::time() { return {impl_->time, impl_->n}; }

std::span<std::complex<double>> RealFft::spectrum() {
  // fftw_complex is layout-compatible with std::complex<double>
  return {reinterpret_cast<std::complex<double>*>(impl_->freq), impl_->n / 2 + 1};
}

void RealFft::forward() { fftw_execute(impl_->fwd); }

// c2r destroys its input; callers treat spectrum() as scratch afterwards.
void RealFft::inverse() { fftw_execute(impl_->inv); }

}  // namespace pitchgate
