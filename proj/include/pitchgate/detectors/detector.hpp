/// @file detector.hpp
/// @brief The seven pitch detectors behind one frame-in, result-out call.
///
/// Per-algorithm behaviour:
///  - ClassicAutocorrelator: raw ACF over the lag band, global maximum after the
///    ACF's first zero crossing, integer lag. Pitched for every non-silent frame.
///  - AdvancedAutocorrelator: energy-normalized ACF, shortest-lag peak within 0.9
///    of the best (octave guard), parabolic refinement, gated by acf_clarity_min.
///  - DynamicWavelet: Haar-style level decomposition with the mode of max/min
///    crossing distances; pitched when two consecutive levels agree.
///  - Yin / FastYin: cumulative mean normalized difference, first dip below
///    yin_threshold. FastYin evaluates the difference function spectrally.
///  - Mpm: direct O(n^2) NSDF over every lag to n/2, key-maximum picking.
///  - FftPeak: rectangular-window magnitude spectrum, argmax bin in band, no
///    interpolation. Pitched for every non-silent frame.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "pitchgate/detectors/algorithm.hpp"
#include "pitchgate/detectors/spectral.hpp"
#include "pitchgate/signal/audio.hpp"

namespace pitchgate {

/// Holds scratch buffers and transform plans. One instance per thread.
class PitchDetector {
 public:
  PitchDetector() = default;

  /// Throws PreconditionError when the frame is shorter than cfg.min_frame_length(),
  /// ConfigError when cfg is invalid for the frame's sample rate.
  DetectorResult detect(AlgorithmId alg, const AudioFrame& frame, const DetectorConfig& cfg);

  /// Difference function computed through forward/inverse transforms, O(n log n).
  std::vector<double> difference_function_spectral(std::span<const float> x, std::size_t max_lag);

 private:
  DetectorResult classic_acf(const AudioFrame& frame, const DetectorConfig& cfg);
  DetectorResult advanced_acf(const AudioFrame& frame, const DetectorConfig& cfg);
  DetectorResult dynamic_wavelet(const AudioFrame& frame, const DetectorConfig& cfg);
  DetectorResult yin(const AudioFrame& frame, const DetectorConfig& cfg, bool spectral);
  DetectorResult mpm(const AudioFrame& frame, const DetectorConfig& cfg);
  DetectorResult fft_peak(const AudioFrame& frame, const DetectorConfig& cfg);

  RealFft& fft(std::size_t size);

  std::map<std::size_t, RealFft> ffts_;
};

/// One-shot convenience: builds a temporary PitchDetector.
DetectorResult detect(AlgorithmId alg, const AudioFrame& frame, const DetectorConfig& cfg = {});

}  // namespace pitchgate
