/// @file fft_peak.cpp
/// @brief Spectral peak picking on the raw frame. No window, no interpolation:
/// the estimate is always an exact bin frequency.

#include <algorithm>
#include <cmath>
#include <complex>

#include "pitchgate/detectors/detector.hpp"

namespace pitchgate {

DetectorResult PitchDetector::fft_peak(const AudioFrame& frame, const DetectorConfig& cfg) {
  const std::size_t n = frame.size();
  const double rate = frame.sample_rate();
  RealFft& plan = fft(n);
  auto time = plan.time();
  std::copy(frame.samples().begin(), frame.samples().end(), time.begin());
  plan.forward();
  const auto spec = plan.spectrum();

  const double bin_hz = rate / static_cast<double>(n);
  const auto lo = static_cast<std::size_t>(std::ceil(cfg.min_freq_hz / bin_hz));
  const auto hi = std::min(static_cast<std::size_t>(std::floor(cfg.max_freq_hz / bin_hz)), n / 2);

  double total = 0.0;
  for (const auto& c : spec) total += std::abs(c);

  std::size_t best = lo;
  double best_mag = -1.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double mag = std::abs(spec[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  const double clarity = total > 0.0 ? best_mag / total : 0.0;
  return DetectorResult::at(
      std::clamp(static_cast<double>(best) * bin_hz, cfg.min_freq_hz, cfg.max_freq_hz), clarity);
}

}  // namespace pitchgate
