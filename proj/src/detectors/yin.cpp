/// @file yin.cpp
/// @brief Yin and FastYin. Both share the normalization and dip selection; only
/// the difference function differs (direct sums vs. spectral cross-correlation).

#include <algorithm>
#include <bit>
#include <complex>
#include <vector>

#include "detail.hpp"
#include "pitchgate/detectors/detector.hpp"
#include "pitchgate/detectors/lag_functions.hpp"

namespace pitchgate {

namespace {

DetectorResult pick_dip(const std::vector<double>& dn, const LagBand& band, int sample_rate,
                        const DetectorConfig& cfg) {
  std::size_t tau = 0;
  for (std::size_t t = band.min_lag; t <= band.max_lag; ++t) {
    if (dn[t] < cfg.yin_threshold) {
      while (t + 1 <= band.max_lag && dn[t + 1] < dn[t]) ++t;
      tau = t;
      break;
    }
  }
  if (tau == 0) {
    const auto first = dn.begin() + static_cast<std::ptrdiff_t>(band.min_lag);
    const auto last = dn.begin() + static_cast<std::ptrdiff_t>(band.max_lag + 1);
    const double floor = *std::min_element(first, last);
    return DetectorResult::unpitched(1.0 - floor);
  }
  const double lag = detail::refine_lag(dn, tau, band.min_lag, band.max_lag);
  return detail::from_lag(lag, sample_rate, 1.0 - dn[tau], cfg);
}

}  // namespace

std::vector<double> PitchDetector::difference_function_spectral(std::span<const float> x,
                                                                std::size_t max_lag) {
  const std::size_t n = x.size();
  const std::size_t w = n / 2;
  const std::size_t size = std::bit_ceil(n);
  RealFft& plan = fft(size);

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + static_cast<double>(x[i]) * x[i];

  // B = FFT(x), A = FFT(x[0..w)); c(t) = IFFT(conj(A) B)(t) / size
  auto time = plan.time();
  std::fill(time.begin(), time.end(), 0.0);
  std::copy(x.begin(), x.end(), time.begin());
  plan.forward();
  std::vector<std::complex<double>> whole(plan.spectrum().begin(), plan.spectrum().end());

  std::fill(time.begin(), time.end(), 0.0);
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(w), time.begin());
  plan.forward();
  auto spec = plan.spectrum();
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] = std::conj(spec[k]) * whole[k];
  plan.inverse();

  const double scale = 1.0 / static_cast<double>(size);
  const double head_energy = prefix[w];
  std::vector<double> d(max_lag + 1, 0.0);
  for (std::size_t t = 1; t <= max_lag; ++t) {
    const double cross = time[t] * scale;
    const double tail_energy = prefix[t + w] - prefix[t];
    d[t] = std::max(0.0, head_energy + tail_energy - 2.0 * cross);
  }
  return d;
}

DetectorResult PitchDetector::yin(const AudioFrame& frame, const DetectorConfig& cfg, bool spectral) {
  const auto band = cfg.lag_band(frame.sample_rate());
  // one lag past the band so the edge can still be refined
  const std::size_t top = std::min(band.max_lag + 1, frame.size() / 2);
  auto d = spectral ? difference_function_spectral(frame.samples(), top)
                    : difference_function(frame.samples(), top);
  normalize_cumulative_mean(d);
  return pick_dip(d, band, frame.sample_rate(), cfg);
}

}  // namespace pitchgate
