/// @file dynamic_wavelet.cpp
/// @brief Level-based time-domain detector (fast lifting wavelet decimation).
///
/// At each level the signal is searched for the first maximum after every
/// upward zero crossing and the first minimum after every downward one, keeping
/// extrema above 75% of the peak excursion and at least delta samples apart.
/// Distances between each extremum and its next one or two neighbours vote, the
/// mode distance is averaged over its +/-delta neighbourhood, and the signal is
/// halved by pairwise averaging. Two consecutive levels whose mode distances
/// agree (2 * d_next within 2 delta of d_prev) fix the period.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "detail.hpp"
#include "pitchgate/detectors/detector.hpp"

namespace pitchgate {

namespace {

constexpr int kMaxLevels = 6;
constexpr int kDifferenceLevels = 3;
constexpr double kMaximaThresholdRatio = 0.75;
// Minimum extremum spacing is derived from this ceiling, not from the search band.
constexpr double kMaxFrequencyForSpacing = 3000.0;

}  // namespace

DetectorResult PitchDetector::dynamic_wavelet(const AudioFrame& frame, const DetectorConfig& cfg) {
  std::vector<double> sam(frame.samples().begin(), frame.samples().end());
  std::size_t count = sam.size();
  const double rate = frame.sample_rate();

  double mean = 0.0;
  double max_v = sam[0];
  double min_v = sam[0];
  for (double s : sam) {
    mean += s;
    max_v = std::max(max_v, s);
    min_v = std::min(min_v, s);
  }
  mean /= static_cast<double>(count);
  const double amplitude_threshold =
      (max_v - mean > mean - min_v ? max_v - mean : mean - min_v) * kMaximaThresholdRatio;

  std::vector<long> mins;
  std::vector<long> maxs;
  std::vector<int> distances(count, 0);
  double previous_mode = -1.0;

  for (int level = 0; level < kMaxLevels && count >= 2; ++level) {
    const long delta = static_cast<long>(std::floor(rate / (std::ldexp(1.0, level) * kMaxFrequencyForSpacing)));
    mins.clear();
    maxs.clear();
    long last_min = -1'000'000;
    long last_max = -1'000'000;
    bool find_max = false;
    bool find_min = false;
    bool have_previous = false;
    double previous_dv = 0.0;

    for (std::size_t i = 2; i < count; ++i) {
      const double si = sam[i] - mean;
      const double si1 = sam[i - 1] - mean;
      if (si1 <= 0.0 && si > 0.0) find_max = true;
      if (si1 >= 0.0 && si < 0.0) find_min = true;
      const double dv = si - si1;
      const long idx = static_cast<long>(i);
      if (have_previous) {
        if (find_min && previous_dv < 0.0 && dv >= 0.0 && std::fabs(si) >= amplitude_threshold &&
            idx > last_min + delta) {
          mins.push_back(idx);
          last_min = idx;
          find_min = false;
        }
        if (find_max && previous_dv > 0.0 && dv <= 0.0 && std::fabs(si) >= amplitude_threshold &&
            idx > last_max + delta) {
          maxs.push_back(idx);
          last_max = idx;
          find_max = false;
        }
      }
      previous_dv = dv;
      have_previous = true;
    }
    if (mins.empty() && maxs.empty()) break;

    std::fill(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(count), 0);
    std::size_t total_votes = 0;
    auto vote = [&](const std::vector<long>& marks) {
      for (std::size_t i = 0; i < marks.size(); ++i) {
        for (int j = 1; j < kDifferenceLevels; ++j) {
          if (i + static_cast<std::size_t>(j) < marks.size()) {
            const auto d = static_cast<std::size_t>(std::labs(marks[i] - marks[i + static_cast<std::size_t>(j)]));
            if (d < count) {
              ++distances[d];
              ++total_votes;
            }
          }
        }
      }
    };
    vote(mins);
    vote(maxs);

    long best_distance = -1;
    long best_value = -1;
    for (long i = 0; i < static_cast<long>(count); ++i) {
      long summed = 0;
      for (long j = -delta; j <= delta; ++j) {
        if (i + j >= 0 && i + j < static_cast<long>(count)) summed += distances[static_cast<std::size_t>(i + j)];
      }
      if (summed == best_value) {
        if (i == 2 * best_distance) best_distance = i;
      } else if (summed > best_value) {
        best_value = summed;
        best_distance = i;
      }
    }

    double weighted = 0.0;
    double votes = 0.0;
    for (long j = -delta; j <= delta; ++j) {
      const long k = best_distance + j;
      if (k >= 0 && k < static_cast<long>(count) && distances[static_cast<std::size_t>(k)] > 0) {
        votes += distances[static_cast<std::size_t>(k)];
        weighted += static_cast<double>(k) * distances[static_cast<std::size_t>(k)];
      }
    }
    if (votes == 0.0) break;
    const double mode = weighted / votes;

    if (previous_mode > -1.0 && std::fabs(2.0 * mode - previous_mode) <= 2.0 * static_cast<double>(delta)) {
      const double period = std::ldexp(previous_mode, level - 1);
      if (period <= 0.0) break;
      const double hz = rate / period;
      if (hz < cfg.min_freq_hz || hz > cfg.max_freq_hz) break;
      const double clarity = total_votes > 0 ? votes / static_cast<double>(total_votes) : 0.0;
      return DetectorResult::at(hz, clarity);
    }
    previous_mode = mode;

    const std::size_t half = count / 2;
    for (std::size_t i = 0; i < half; ++i) sam[i] = (sam[2 * i] + sam[2 * i + 1]) / 2.0;
    count = half;
  }
  return DetectorResult::unpitched();
}

}  // namespace pitchgate
