/// @file lag_functions.cpp

#include "pitchgate/detectors/lag_functions.hpp"

#include <algorithm>
#include <string>

#include "pitchgate/error.hpp"

namespace pitchgate {

double parabolic_interpolate(double y_left, double y_center, double y_right) {
  const double denom = y_left - 2.0 * y_center + y_right;
  if (denom == 0.0) return 0.0;
  return (y_left - y_right) / (2.0 * denom);
}

std::vector<double> autocorrelation(std::span<const float> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  const std::size_t last = std::min(max_lag, n == 0 ? 0 : n - 1);
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t t = 0; t <= last; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) acc += static_cast<double>(x[i]) * x[i + t];
    r[t] = acc;
  }
  return r;
}

std::vector<double> difference_function(std::span<const float> x, std::size_t max_lag) {
  const std::size_t w = x.size() / 2;
  if (max_lag > w) {
    throw PreconditionError("difference_function: max_lag " + std::to_string(max_lag) +
                            " exceeds half the frame (" + std::to_string(w) + ")");
  }
  std::vector<double> d(max_lag + 1, 0.0);
  for (std::size_t t = 1; t <= max_lag; ++t) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w; ++j) {
      const double delta = static_cast<double>(x[j]) - x[j + t];
      acc += delta * delta;
    }
    d[t] = acc;
  }
  return d;
}

void normalize_cumulative_mean(std::span<double> d) {
  if (d.empty()) return;
  d[0] = 1.0;
  double running = 0.0;
  for (std::size_t t = 1; t < d.size(); ++t) {
    running += d[t];
    d[t] = running > 0.0 ? d[t] * static_cast<double>(t) / running : 1.0;
  }
}

std::vector<double> cmndf(const AudioFrame& frame, std::size_t max_lag) {
  const std::size_t n = frame.size();
  if (max_lag >= n / 2 + 1) {
    throw PreconditionError("cmndf: max_lag must be < n/2 + 1 (n = " + std::to_string(n) + ")");
  }
  auto d = difference_function(frame.samples(), max_lag);
  normalize_cumulative_mean(d);
  return d;
}

std::vector<double> nsdf(std::span<const float> x) {
  const std::size_t n = x.size();
  const std::size_t lags = n / 2 + 1;
  std::vector<double> out(lags, 0.0);
  // prefix[k] = sum_{j < k} x[j]^2, so m(t) is two lookups
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + static_cast<double>(x[j]) * x[j];
  if (prefix[n] == 0.0) return out;
  for (std::size_t t = 0; t < lags && t < n; ++t) {
    double r = 0.0;
    for (std::size_t j = 0; j + t < n; ++j) r += static_cast<double>(x[j]) * x[j + t];
    const double m = prefix[n - t] + (prefix[n] - prefix[t]);
    out[t] = m > 0.0 ? std::clamp(2.0 * r / m, -1.0, 1.0) : 0.0;
  }
  return out;
}

}  // namespace pitchgate
