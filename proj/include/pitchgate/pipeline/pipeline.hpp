/// @file pipeline.hpp
/// @brief Detector result -> monitor record -> mel-band filter -> critical-pitch control.

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "pitchgate/detectors/algorithm.hpp"
#include "pitchgate/signal/audio.hpp"

namespace pitchgate {

/// One row of the live pitch monitor.
///
/// Pitched samples carry frequency, mel, note name and MIDI number; unpitched
/// samples carry only amplitude, position and duration.
struct PitchSample {
  std::optional<double> frequency_hz;
  std::optional<double> mel;
  std::optional<std::string> note_name;
  std::optional<double> midi_number;
  double amplitude_rms = 0.0;
  std::uint64_t sample_index = 0;
  double duration_ms = 0.0;
  bool pitched = false;

  friend bool operator==(const PitchSample&, const PitchSample&) = default;
};

struct PipelineConfig {
  double mel_ceiling = 400.0;
  double critical_mel = 400.0;
  double difficulty_divisor = 1.0;  // 1 = normal, 2 = half, 8 = eight times easier
  int smoothing_window = 1;         // median over the last N pitched frames; 1 = off
  bool mel_filter = true;

  /// Throws ConfigError unless ceiling > 0, divisor >= 1, window in [1, 5]
  /// and 0 < critical / divisor <= ceiling.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct ControlSignal {
  bool above_critical = false;
  double effective_critical_mel = 0.0;
  /// Mel value the threshold was evaluated on (median-smoothed when enabled).
  std::optional<double> control_mel;
  PitchSample source;

  friend bool operator==(const ControlSignal&, const ControlSignal&) = default;
};

PitchSample to_pitch_sample(const DetectorResult& result, const AudioFrame& frame);

/// Demotes a pitched sample whose mel exceeds @p ceiling (strictly) to unpitched,
/// keeping amplitude, position and duration. Throws PreconditionError for ceiling <= 0.
PitchSample mel_band_filter(const PitchSample& sample, double ceiling);

/// critical_mel / difficulty_divisor.
double effective_critical(const PipelineConfig& cfg);

/// Stateless threshold on the sample's own mel: above iff pitched and mel >= effective critical.
/// Loudness never participates.
ControlSignal control(const PitchSample& sample, const PipelineConfig& cfg);

/// Stateful form of the pipeline: filter, optional median smoothing, threshold.
class PitchPipeline {
 public:
  explicit PitchPipeline(PipelineConfig cfg = {});

  const PipelineConfig& config() const noexcept { return cfg_; }

  /// Validates first; on ConfigError the previous configuration stays in force.
  void reconfigure(const PipelineConfig& cfg);

  struct Output {
    PitchSample sample;  // after the mel-band filter
    ControlSignal control;
  };

  Output process(const DetectorResult& result, const AudioFrame& frame);
  Output process(const PitchSample& raw);

 private:
  PipelineConfig cfg_;
  std::deque<double> recent_mel_;
};

}  // namespace pitchgate
