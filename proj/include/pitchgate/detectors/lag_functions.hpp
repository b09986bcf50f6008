/// @file lag_functions.hpp
/// @brief Lag-domain scoring curves shared by the time-domain detectors.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pitchgate/signal/audio.hpp"

namespace pitchgate {

/// Vertex offset of the parabola through (-1, left), (0, center), (1, right):
/// (left - right) / (2 (left - 2 center + right)); 0 when the denominator is 0.
double parabolic_interpolate(double y_left, double y_center, double y_right);

/// Raw autocorrelation r(t) = sum_{i < n - t} x[i] x[i + t] for t in [0, max_lag], direct sums.
std::vector<double> autocorrelation(std::span<const float> x, std::size_t max_lag);

/// Difference function d(t) = sum_{j < n/2} (x[j] - x[j + t])^2 for t in [0, max_lag],
/// evaluated term by term. Requires max_lag <= n/2.
std::vector<double> difference_function(std::span<const float> x, std::size_t max_lag);

/// Cumulative-mean normalization in place: d'(0) = 1, d'(t) = d(t) t / sum_{1<=j<=t} d(j).
/// A zero running sum (silence, DC) maps to 1.
void normalize_cumulative_mean(std::span<double> d);

/// Cumulative mean normalized difference for lags [0, max_lag].
/// Throws PreconditionError unless max_lag < n/2 + 1.
std::vector<double> cmndf(const AudioFrame& frame, std::size_t max_lag);

/// Normalized square difference function over lags 0..n/2 by the direct O(n^2) sums:
/// 2 r(t) / m(t), m(t) = sum_{j < n - t} (x[j]^2 + x[j + t]^2). All zeros for a silent frame.
std::vector<double> nsdf(std::span<const float> x);
inline std::vector<double> nsdf(const AudioFrame& frame) { return nsdf(frame.samples()); }

}  // namespace pitchgate
