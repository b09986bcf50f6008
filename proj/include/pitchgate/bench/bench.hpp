/// @file bench.hpp
/// @brief Accuracy, timing and sensitivity comparisons of the seven detectors.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pitchgate/detectors/algorithm.hpp"
#include "pitchgate/signal/audio.hpp"
#include "pitchgate/signal/synth.hpp"

namespace pitchgate::bench {

inline constexpr std::size_t kDefaultBuffers[] = {1024, 2048, 4096, 8192, 16384};

/// Integer MIDI notes lo..hi inclusive.
std::vector<double> midi_range(int lo, int hi);

/// A note counts as an error when the median estimate is off by this much (wrong nearest note).
inline constexpr double kErrorThresholdMidi = 0.5;

struct BenchmarkRecord {
  AlgorithmId algorithm = AlgorithmId::Yin;
  std::size_t buffer_size = 0;
  double true_midi = 0.0;
  std::optional<double> estimated_midi;
  std::optional<double> abs_error_midi;
  bool pitched = false;

  bool is_error() const { return !abs_error_midi || *abs_error_midi >= kErrorThresholdMidi; }

  friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

struct TimingRecord {
  AlgorithmId algorithm = AlgorithmId::Yin;
  std::size_t buffer_size = 0;
  double mean_ns_per_buffer = 0.0;
  std::size_t frames_measured = 0;

  friend bool operator==(const TimingRecord&, const TimingRecord&) = default;
};

/// Detection statistics of one algorithm on one source. frames_total counts
/// frames with non-zero energy; all-zero frames are tallied in frames_silent.
struct SensitivityRecord {
  AlgorithmId algorithm = AlgorithmId::Yin;
  std::size_t buffer_size = 0;
  std::string source;
  std::size_t frames_total = 0;
  std::size_t frames_pitched = 0;
  std::size_t frames_silent = 0;
  double detection_rate = 0.0;
  std::vector<double> pitched_midi_values;
  std::optional<std::string> error;

  friend bool operator==(const SensitivityRecord&, const SensitivityRecord&) = default;
};

struct SweepOptions {
  int sample_rate = kCanonicalSampleRate;
  double duration_s = 1.0;
  double amplitude = 0.8;
  bool mel_filter = false;
  double mel_ceiling = 400.0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct SweepReport {
  std::vector<BenchmarkRecord> records;
  std::vector<std::string> warnings;  // skipped (Nyquist) triples
};

/// For every (algorithm, buffer, note): synthesize, frame without overlap,
/// record the median MIDI estimate of the pitched frames. Records are ordered
/// algorithm-major, then buffer, then note, and are bit-identical across runs.
/// The detector band is fitted to each buffer size (DetectorConfig::fitted_to).
SweepReport run_sine_sweep(std::span<const AlgorithmId> algorithms,
                           std::span<const std::size_t> buffer_sizes,
                           std::span<const double> midi_notes, const DetectorConfig& cfg,
                           const SweepOptions& options = {});

struct TimingOptions {
  std::size_t iterations = 30;
  std::size_t warmups = 5;
  /// Keep measuring past `iterations` until this much time has been spent.
  double min_measure_ms = 25.0;
  double frequency_hz = 440.0;
  int sample_rate = kCanonicalSampleRate;
};

/// Single-threaded wall-clock mean per buffer on a fixed sine. The lag band is
/// fitted to the smallest buffer in the run and then held constant, so only the
/// buffer length varies. Throws PreconditionError for zero iterations.
std::vector<TimingRecord> run_timing(std::span<const AlgorithmId> algorithms,
                                     std::span<const std::size_t> buffer_sizes,
                                     const DetectorConfig& cfg, const TimingOptions& options = {});

/// t(largest buffer) / t(smallest buffer) for one algorithm in a timing report.
std::optional<double> growth_ratio(std::span<const TimingRecord> records, AlgorithmId alg);

/// Recording or synthetic voice. Text form: "wav:PATH", "synth:SPEC", or a bare path.
struct VoiceSource {
  std::string descriptor;

  static VoiceSource parse(const std::string& text);
  AudioStream load() const;
};

/// Seeded degraded-voice corpus standing in for patient recordings.
std::vector<VoiceSource> default_voice_corpus();

struct VoiceOptions {
  bool mel_filter = false;
  double mel_ceiling = 400.0;
};

struct VoiceReport {
  std::vector<SensitivityRecord> records;
  std::size_t failed_sources = 0;
};

/// Per source and algorithm: fraction of non-silent frames that come out pitched.
/// An unreadable source yields one error record per algorithm and the run continues.
VoiceReport run_voice_bench(std::span<const VoiceSource> sources,
                            std::span<const AlgorithmId> algorithms, std::size_t buffer_size,
                            const DetectorConfig& cfg, const VoiceOptions& options = {});

}  // namespace pitchgate::bench
