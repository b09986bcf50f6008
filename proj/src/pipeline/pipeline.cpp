/// @file pipeline.cpp

#include "pitchgate/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pitchgate/error.hpp"
#include "pitchgate/signal/note_scale.hpp"

namespace pitchgate {

namespace {

constexpr int kMaxSmoothingWindow = 5;

PitchSample demoted(const PitchSample& s) {
  PitchSample out;
  out.amplitude_rms = s.amplitude_rms;
  out.sample_index = s.sample_index;
  out.duration_ms = s.duration_ms;
  return out;
}

double median(std::deque<double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(mel_ceiling > 0.0) || !std::isfinite(mel_ceiling)) {
    throw ConfigError("pipeline: mel_ceiling must be positive");
  }
  if (!(critical_mel > 0.0) || !std::isfinite(critical_mel)) {
    throw ConfigError("pipeline: critical_mel must be positive");
  }
  if (!(difficulty_divisor >= 1.0) || !std::isfinite(difficulty_divisor)) {
    throw ConfigError("pipeline: difficulty_divisor must be >= 1");
  }
  if (smoothing_window < 1 || smoothing_window > kMaxSmoothingWindow) {
    throw ConfigError("pipeline: smoothing_window must be in [1, 5]");
  }
  if (critical_mel / difficulty_divisor > mel_ceiling) {
    throw ConfigError("pipeline: effective critical mel " +
                      std::to_string(critical_mel / difficulty_divisor) +
                      " exceeds the mel ceiling " + std::to_string(mel_ceiling));
  }
}

PitchSample to_pitch_sample(const DetectorResult& result, const AudioFrame& frame) {
  PitchSample s;
  s.amplitude_rms = rms_amplitude(frame);
  s.sample_index = frame.start_index();
  s.duration_ms = frame.duration_ms();
  if (result.pitched && result.frequency_hz) {
    const double hz = *result.frequency_hz;
    s.frequency_hz = hz;
    s.mel = mel_from_freq(hz);
    s.midi_number = midi_from_freq(hz);
    s.note_name = note_name(*s.midi_number);
    s.pitched = true;
  }
  return s;
}

PitchSample mel_band_filter(const PitchSample& sample, double ceiling) {
  if (!(ceiling > 0.0)) throw PreconditionError("mel_band_filter: ceiling must be positive");
  if (sample.pitched && sample.mel && *sample.mel > ceiling) return demoted(sample);
  return sample;
}

double effective_critical(const PipelineConfig& cfg) {
  return cfg.critical_mel / cfg.difficulty_divisor;
}

ControlSignal control(const PitchSample& sample, const PipelineConfig& cfg) {
  ControlSignal out;
  out.effective_critical_mel = effective_critical(cfg);
  out.source = sample;
  if (sample.pitched && sample.mel) {
    out.control_mel = sample.mel;
    out.above_critical = *sample.mel >= out.effective_critical_mel;
  }
  return out;
}

PitchPipeline::PitchPipeline(PipelineConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void PitchPipeline::reconfigure(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.smoothing_window != cfg_.smoothing_window) recent_mel_.clear();
  cfg_ = cfg;
}

PitchPipeline::Output PitchPipeline::process(const DetectorResult& result, const AudioFrame& frame) {
  return process(to_pitch_sample(result, frame));
}

PitchPipeline::Output PitchPipeline::process(const PitchSample& raw) {
  Output out;
  out.sample = cfg_.mel_filter ? mel_band_filter(raw, cfg_.mel_ceiling) : raw;
  out.control = control(out.sample, cfg_);
  if (cfg_.smoothing_window > 1) {
    if (!out.sample.pitched) {
      // smoothing spans one continuous pitched run
      recent_mel_.clear();
    } else {
      recent_mel_.push_back(*out.sample.mel);
      while (recent_mel_.size() > static_cast<std::size_t>(cfg_.smoothing_window)) {
        recent_mel_.pop_front();
      }
      const double smoothed = median(recent_mel_);
      out.control.control_mel = smoothed;
      out.control.above_critical = smoothed >= out.control.effective_critical_mel;
    }
  }
  return out;
}

}  // namespace pitchgate
