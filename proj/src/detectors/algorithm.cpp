/// @file algorithm.cpp

#include "pitchgate/detectors/algorithm.hpp"

#include <algorithm>
#include <cmath>

#include "pitchgate/error.hpp"

namespace pitchgate {

namespace {

// Slack for lengths computed from ratios that should be exact integers.
constexpr double kLengthSlack = 1e-9;

}  // namespace

std::string_view to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::ClassicAutocorrelator: return "ClassicAutocorrelator";
    case AlgorithmId::AdvancedAutocorrelator: return "AdvancedAutocorrelator";
    case AlgorithmId::DynamicWavelet: return "DynamicWavelet";
    case AlgorithmId::Yin: return "Yin";
    case AlgorithmId::FastYin: return "FastYin";
    case AlgorithmId::Mpm: return "Mpm";
    case AlgorithmId::FftPeak: return "FftPeak";
  }
  return "Unknown";
}

AlgorithmId parse_algorithm(std::string_view name) {
  for (AlgorithmId id : kAllAlgorithms) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

DetectorResult DetectorResult::unpitched(double clarity) {
  return DetectorResult{std::nullopt, std::clamp(clarity, 0.0, 1.0), false};
}

DetectorResult DetectorResult::at(double frequency_hz, double clarity) {
  return DetectorResult{frequency_hz, std::clamp(clarity, 0.0, 1.0), true};
}

void DetectorConfig::validate(int sample_rate) const {
  if (sample_rate <= 0) throw ConfigError("detector config: sample rate must be positive");
  if (!(min_freq_hz > 0.0)) throw ConfigError("detector config: min_freq_hz must be positive");
  if (!(min_freq_hz < max_freq_hz)) {
    throw ConfigError("detector config: min_freq_hz must be below max_freq_hz");
  }
  if (!(max_freq_hz < sample_rate / 2.0)) {
    throw ConfigError("detector config: max_freq_hz must be below Nyquist (" +
                      std::to_string(sample_rate / 2.0) + " Hz)");
  }
  auto unit = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) throw ConfigError(std::string("detector config: ") + name + " must be in (0, 1)");
  };
  unit(yin_threshold, "yin_threshold");
  unit(mpm_cutoff, "mpm_cutoff");
  unit(mpm_clarity_min, "mpm_clarity_min");
  unit(acf_clarity_min, "acf_clarity_min");
}

LagBand DetectorConfig::lag_band(int sample_rate) const {
  const double rate = sample_rate;
  LagBand band;
  band.min_lag = static_cast<std::size_t>(std::ceil(rate / max_freq_hz - kLengthSlack));
  band.max_lag = static_cast<std::size_t>(std::floor(rate / min_freq_hz + kLengthSlack));
  band.min_lag = std::max<std::size_t>(band.min_lag, 2);
  return band;
}

std::size_t DetectorConfig::min_frame_length(int sample_rate) const {
  return static_cast<std::size_t>(std::ceil(2.0 * sample_rate / min_freq_hz - kLengthSlack));
}

DetectorConfig DetectorConfig::fitted_to(std::size_t buffer_size, int sample_rate) const {
  DetectorConfig out = *this;
  if (buffer_size < min_frame_length(sample_rate)) {
    out.min_freq_hz = 2.0 * sample_rate / static_cast<double>(buffer_size);
  }
  return out;
}

}  // namespace pitchgate
