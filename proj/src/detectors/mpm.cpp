/// @file mpm.cpp
/// @brief McLeod pitch method on the direct NSDF.

#include <algorithm>
#include <vector>

#include "detail.hpp"
#include "pitchgate/detectors/detector.hpp"
#include "pitchgate/detectors/lag_functions.hpp"

namespace pitchgate {

namespace {

/// Highest point of every positive lobe between a positive-going and the next
/// negative-going zero crossing, after skipping the lobe around lag 0.
std::vector<std::size_t> key_maxima(const std::vector<double>& curve) {
  std::vector<std::size_t> out;
  const std::size_t len = curve.size();
  if (len < 3) return out;
  std::size_t pos = 0;
  std::size_t current = 0;
  while (pos < (len - 1) / 3 && curve[pos] > 0.0) ++pos;
  while (pos < len - 1 && curve[pos] <= 0.0) ++pos;
  if (pos == 0) pos = 1;
  while (pos < len - 1) {
    if (curve[pos] > curve[pos - 1] && curve[pos] >= curve[pos + 1]) {
      if (current == 0 || curve[pos] > curve[current]) current = pos;
    }
    ++pos;
    if (pos < len - 1 && curve[pos] <= 0.0) {
      if (current > 0) {
        out.push_back(current);
        current = 0;
      }
      while (pos < len - 1 && curve[pos] <= 0.0) ++pos;
    }
  }
  if (current > 0) out.push_back(current);
  return out;
}

}  // namespace

DetectorResult PitchDetector::mpm(const AudioFrame& frame, const DetectorConfig& cfg) {
  const auto band = cfg.lag_band(frame.sample_rate());
  const auto curve = nsdf(frame.samples());

  std::vector<std::size_t> peaks;
  for (std::size_t t : key_maxima(curve)) {
    if (t >= band.min_lag && t <= band.max_lag) peaks.push_back(t);
  }
  if (peaks.empty()) return DetectorResult::unpitched();

  double highest = 0.0;
  for (std::size_t t : peaks) highest = std::max(highest, curve[t]);
  const double cutoff = cfg.mpm_cutoff * highest;
  const std::size_t chosen =
      *std::find_if(peaks.begin(), peaks.end(), [&](std::size_t t) { return curve[t] >= cutoff; });

  const double clarity = curve[chosen];
  if (clarity < cfg.mpm_clarity_min) return DetectorResult::unpitched(clarity);
  const double lag = detail::refine_lag(curve, chosen, band.min_lag, band.max_lag);
  return detail::from_lag(lag, frame.sample_rate(), clarity, cfg);
}

}  // namespace pitchgate
