/// @file audio.hpp
/// @brief Audio frames, in-memory streams and framing.

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace pitchgate {

/// A fixed-length analysis window of normalized samples.
///
/// Samples are finite and within [-1, 1]; the constructor rejects anything else
/// with PreconditionError. start_index counts samples since the start of the stream.
class AudioFrame {
 public:
  AudioFrame(std::vector<float> samples, int sample_rate, std::uint64_t start_index = 0);

  std::span<const float> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  int sample_rate() const noexcept { return sample_rate_; }
  std::uint64_t start_index() const noexcept { return start_index_; }

  /// Frame length in milliseconds.
  double duration_ms() const noexcept {
    return static_cast<double>(samples_.size()) * 1000.0 / sample_rate_;
  }

  /// Sum of squares is exactly zero.
  bool is_silent() const noexcept;

  /// Copy with every sample multiplied by @p gain (clamped to [-1, 1]).
  AudioFrame scaled(float gain) const;

 private:
  std::vector<float> samples_;
  int sample_rate_;
  std::uint64_t start_index_;
};

/// An in-memory mono stream at a constant sample rate.
class AudioStream {
 public:
  AudioStream() = default;
  AudioStream(std::vector<float> samples, int sample_rate);

  std::span<const float> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  int sample_rate() const noexcept { return sample_rate_; }
  double duration_s() const noexcept {
    return sample_rate_ > 0 ? static_cast<double>(samples_.size()) / sample_rate_ : 0.0;
  }

  friend bool operator==(const AudioStream&, const AudioStream&) = default;

 private:
  std::vector<float> samples_;
  int sample_rate_ = 0;
};

/// Number of whole frames: floor((len - buffer) / hop) + 1 when len >= buffer, else 0.
std::size_t frame_count(std::size_t length, std::size_t buffer_size, std::size_t hop);

/// Frame k covers [k*hop, k*hop + buffer_size); a trailing partial window is dropped.
/// Throws PreconditionError unless buffer_size > 0 and 0 < hop <= buffer_size.
std::vector<AudioFrame> frames(const AudioStream& stream, std::size_t buffer_size,
                               std::size_t hop);

/// Root mean square of the frame's samples; 0 for an empty span.
double rms_amplitude(std::span<const float> samples);
inline double rms_amplitude(const AudioFrame& frame) { return rms_amplitude(frame.samples()); }

/// Incremental framing for sample sources that arrive in arbitrary chunks.
/// Produces exactly the frames that frames() would produce on the concatenation.
class FrameAssembler {
 public:
  FrameAssembler(int sample_rate, std::size_t buffer_size, std::size_t hop);

  void push(std::span<const float> chunk);
  std::optional<AudioFrame> pop();

  std::size_t buffer_size() const noexcept { return buffer_size_; }
  std::size_t hop() const noexcept { return hop_; }

 private:
  int sample_rate_;
  std::size_t buffer_size_;
  std::size_t hop_;
  std::deque<float> pending_;
  std::uint64_t next_start_ = 0;
};

}  // namespace pitchgate
