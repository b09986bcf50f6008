/// @file algorithm.hpp
/// @brief Algorithm identifiers, detector configuration and per-frame results.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace pitchgate {

enum class AlgorithmId {
  ClassicAutocorrelator,
  AdvancedAutocorrelator,
  DynamicWavelet,
  Yin,
  FastYin,
  Mpm,
  FftPeak,
};

inline constexpr std::array<AlgorithmId, 7> kAllAlgorithms = {
    AlgorithmId::ClassicAutocorrelator, AlgorithmId::AdvancedAutocorrelator,
    AlgorithmId::DynamicWavelet,        AlgorithmId::Yin,
    AlgorithmId::FastYin,               AlgorithmId::Mpm,
    AlgorithmId::FftPeak,
};

/// Stable name used on the command line, in reports and on the wire.
std::string_view to_string(AlgorithmId id);

/// Case-sensitive inverse of to_string. Throws ConfigError for unknown names.
AlgorithmId parse_algorithm(std::string_view name);

/// One detector's verdict on one frame. pitched is true exactly when frequency_hz is set.
struct DetectorResult {
  std::optional<double> frequency_hz;
  double clarity = 0.0;
  bool pitched = false;

  static DetectorResult unpitched(double clarity = 0.0);
  static DetectorResult at(double frequency_hz, double clarity);

  friend bool operator==(const DetectorResult&, const DetectorResult&) = default;
};

/// Integer lag range searched by the time-domain detectors.
struct LagBand {
  std::size_t min_lag = 0;  // ceil(rate / max_freq)
  std::size_t max_lag = 0;  // floor(rate / min_freq)
};

struct DetectorConfig {
  double min_freq_hz = 40.0;
  double max_freq_hz = 2000.0;
  double yin_threshold = 0.15;
  double mpm_cutoff = 0.93;
  double mpm_clarity_min = 0.80;
  double acf_clarity_min = 0.60;

  /// Throws ConfigError unless 0 < min < max < rate/2 and every threshold is in (0, 1).
  void validate(int sample_rate) const;

  LagBand lag_band(int sample_rate) const;

  /// Shortest frame that holds two periods of min_freq_hz.
  std::size_t min_frame_length(int sample_rate) const;

  /// Copy whose min_freq_hz is raised, if needed, so that frames of
  /// @p buffer_size samples satisfy the two-period precondition.
  DetectorConfig fitted_to(std::size_t buffer_size, int sample_rate) const;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

}  // namespace pitchgate
