/// @file detector.cpp

#include "pitchgate/detectors/detector.hpp"

#include <string>

#include "pitchgate/error.hpp"

namespace pitchgate {

DetectorResult PitchDetector::detect(AlgorithmId alg, const AudioFrame& frame,
                                     const DetectorConfig& cfg) {
  cfg.validate(frame.sample_rate());
  const std::size_t needed = cfg.min_frame_length(frame.sample_rate());
  if (frame.size() < needed) {
    throw PreconditionError("detect: frame of " + std::to_string(frame.size()) +
                            " samples is too short for min_freq_hz " + std::to_string(cfg.min_freq_hz) +
                            "; at least " + std::to_string(needed) + " samples are required");
  }
  if (frame.is_silent()) return DetectorResult::unpitched();

  switch (alg) {
    case AlgorithmId::ClassicAutocorrelator: return classic_acf(frame, cfg);
    case AlgorithmId::AdvancedAutocorrelator: return advanced_acf(frame, cfg);
    case AlgorithmId::DynamicWavelet: return dynamic_wavelet(frame, cfg);
    case AlgorithmId::Yin: return yin(frame, cfg, false);
    case AlgorithmId::FastYin: return yin(frame, cfg, true);
    case AlgorithmId::Mpm: return mpm(frame, cfg);
    case AlgorithmId::FftPeak: return fft_peak(frame, cfg);
  }
  throw ConfigError("detect: unknown algorithm");
}

RealFft& PitchDetector::fft(std::size_t size) {
  auto it = ffts_.find(size);
  if (it == ffts_.end()) it = ffts_.emplace(size, RealFft(size)).first;
  return it->second;
}

DetectorResult detect(AlgorithmId alg, const AudioFrame& frame, const DetectorConfig& cfg) {
  PitchDetector detector;
  return detector.detect(alg, frame, cfg);
}

}  // namespace pitchgate
