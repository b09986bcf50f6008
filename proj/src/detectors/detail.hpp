/// @file detail.hpp
/// @brief Helpers private to the detector implementations.

#pragma once

#include <algorithm>
#include <cstddef>

#include "pitchgate/detectors/algorithm.hpp"
#include "pitchgate/detectors/lag_functions.hpp"

namespace pitchgate::detail {

/// Pitched result at rate / lag, clamped into the configured band.
inline DetectorResult from_lag(double lag, int sample_rate, double clarity,
                               const DetectorConfig& cfg) {
  const double hz = std::clamp(sample_rate / lag, cfg.min_freq_hz, cfg.max_freq_hz);
  return DetectorResult::at(hz, clarity);
}

/// Lag refined by parabolic interpolation on curve[lag-1..lag+1], kept inside [lo, hi].
template <typename Curve>
double refine_lag(const Curve& curve, std::size_t lag, std::size_t lo, std::size_t hi) {
  if (lag == 0 || lag + 1 >= curve.size()) return static_cast<double>(lag);
  const double offset =
      std::clamp(parabolic_interpolate(curve[lag - 1], curve[lag], curve[lag + 1]), -1.0, 1.0);
  return std::clamp(static_cast<double>(lag) + offset, static_cast<double>(lo),
                    static_cast<double>(hi));
}

}  // namespace pitchgate::detail
