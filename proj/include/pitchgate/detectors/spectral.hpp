/// @file spectral.hpp
/// @brief Real-input FFT backed by FFTW, with one plan pair per instance.

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace pitchgate {

/// Real forward / inverse transform of a fixed length.
///
/// Plans use FFTW_ESTIMATE so the same input produces the same output on every
/// run. One instance must not be used from two threads at once.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept;

  /// Input buffer of size() reals; fill, then call forward().
  std::span<double> time();
  /// size()/2 + 1 complex bins.
  std::span<std::complex<double>> spectrum();

  /// time() -> spectrum().
  void forward();
  /// spectrum() -> time(), unnormalized (scaled by size()).
  void inverse();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pitchgate
