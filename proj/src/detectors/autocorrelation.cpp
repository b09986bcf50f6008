/// @file autocorrelation.cpp
/// @brief Classic and normalized autocorrelation detectors.

#include <algorithm>
#include <vector>

#include "detail.hpp"
#include "pitchgate/detectors/detector.hpp"
#include "pitchgate/detectors/lag_functions.hpp"

namespace pitchgate {

namespace {

// A peak within this fraction of the best normalized score wins if its lag is shorter.
constexpr double kOctaveRatio = 0.9;

}  // namespace

DetectorResult PitchDetector::classic_acf(const AudioFrame& frame, const DetectorConfig& cfg) {
  const auto band = cfg.lag_band(frame.sample_rate());
  const auto r = autocorrelation(frame.samples(), band.max_lag);

  std::size_t start = band.min_lag;
  for (std::size_t t = 1; t <= band.max_lag; ++t) {
    if (r[t] <= 0.0) {
      start = std::max(start, t);
      break;
    }
  }
  std::size_t best = start;
  for (std::size_t t = start; t <= band.max_lag; ++t) {
    if (r[t] > r[best]) best = t;
  }
  return detail::from_lag(static_cast<double>(best), frame.sample_rate(), r[best] / r[0], cfg);
}

DetectorResult PitchDetector::advanced_acf(const AudioFrame& frame, const DetectorConfig& cfg) {
  const auto x = frame.samples();
  const std::size_t n = x.size();
  const auto band = cfg.lag_band(frame.sample_rate());
  const std::size_t hi = std::min(band.max_lag + 1, n - 1);

  std::vector<double> energy(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) energy[i + 1] = energy[i] + static_cast<double>(x[i]) * x[i];

  // normalized ACF: 2 sum x[i] x[i+t] / (sum x[i]^2 + sum x[i+t]^2), i < n - t
  std::vector<double> score(hi + 1, 0.0);
  for (std::size_t t = band.min_lag - 1; t <= hi; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) acc += static_cast<double>(x[i]) * x[i + t];
    const double denom = energy[n - t] + (energy[n] - energy[t]);
    score[t] = denom > 0.0 ? 2.0 * acc / denom : 0.0;
  }

  std::vector<std::size_t> peaks;
  for (std::size_t t = band.min_lag; t <= band.max_lag && t + 1 <= hi; ++t) {
    if (score[t] > score[t - 1] && score[t] >= score[t + 1]) peaks.push_back(t);
  }
  if (peaks.empty()) return DetectorResult::unpitched();

  const double best = score[*std::max_element(
      peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; })];
  const std::size_t chosen = *std::find_if(
      peaks.begin(), peaks.end(), [&](std::size_t t) { return score[t] >= kOctaveRatio * best; });

  if (score[chosen] < cfg.acf_clarity_min) return DetectorResult::unpitched(score[chosen]);
  const double lag = detail::refine_lag(score, chosen, band.min_lag, band.max_lag);
  return detail::from_lag(lag, frame.sample_rate(), score[chosen], cfg);
}

}  // namespace pitchgate
