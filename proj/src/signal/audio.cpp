/// @file audio.cpp

#include "pitchgate/signal/audio.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pitchgate/error.hpp"

namespace pitchgate {

namespace {

void check_samples(std::span<const float> samples, const char* what) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const float s = samples[i];
    if (!std::isfinite(s) || s < -1.0f || s > 1.0f) {
      throw PreconditionError(std::string(what) + ": sample " + std::to_string(i) +
                              " is outside [-1, 1] or not finite");
    }
  }
}

}  // namespace

AudioFrame::AudioFrame(std::vector<float> samples, int sample_rate, std::uint64_t start_index)
    : samples_(std::move(samples)), sample_rate_(sample_rate), start_index_(start_index) {
  if (samples_.empty()) {
    throw PreconditionError("AudioFrame: frame must contain at least one sample");
  }
  if (sample_rate_ <= 0) {
    throw PreconditionError("AudioFrame: sample rate must be positive");
  }
  check_samples(samples_, "AudioFrame");
}

bool AudioFrame::is_silent() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](float s) { return s == 0.0f; });
}

AudioFrame AudioFrame::scaled(float gain) const {
  std::vector<float> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [gain](float s) { return std::clamp(s * gain, -1.0f, 1.0f); });
  return AudioFrame(std::move(out), sample_rate_, start_index_);
}

AudioStream::AudioStream(std::vector<float> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw PreconditionError("AudioStream: sample rate must be positive");
  }
  check_samples(samples_, "AudioStream");
}

std::size_t frame_count(std::size_t length, std::size_t buffer_size, std::size_t hop) {
  if (buffer_size == 0 || hop == 0 || length < buffer_size) return 0;
  return (length - buffer_size) / hop + 1;
}

std::vector<AudioFrame> frames(const AudioStream& stream, std::size_t buffer_size,
                               std::size_t hop) {
  if (buffer_size == 0) throw PreconditionError("frames: buffer size must be positive");
  if (hop == 0 || hop > buffer_size) {
    throw PreconditionError("frames: hop must be in (0, buffer_size]");
  }
  const auto data = stream.samples();
  const std::size_t count = frame_count(data.size(), buffer_size, hop);
  std::vector<AudioFrame> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t start = k * hop;
    out.emplace_back(std::vector<float>(data.begin() + static_cast<std::ptrdiff_t>(start),
                                        data.begin() + static_cast<std::ptrdiff_t>(start + buffer_size)),
                     stream.sample_rate(), start);
  }
  return out;
}

double rms_amplitude(std::span<const float> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

FrameAssembler::FrameAssembler(int sample_rate, std::size_t buffer_size, std::size_t hop)
    : sample_rate_(sample_rate), buffer_size_(buffer_size), hop_(hop) {
  if (buffer_size_ == 0) throw PreconditionError("FrameAssembler: buffer size must be positive");
  if (hop_ == 0 || hop_ > buffer_size_) {
    throw PreconditionError("FrameAssembler: hop must be in (0, buffer_size]");
  }
}

void FrameAssembler::push(std::span<const float> chunk) {
  pending_.insert(pending_.end(), chunk.begin(), chunk.end());
}

std::optional<AudioFrame> FrameAssembler::pop() {
  if (pending_.size() < buffer_size_) return std::nullopt;
  std::vector<float> window(pending_.begin(),
                            pending_.begin() + static_cast<std::ptrdiff_t>(buffer_size_));
  AudioFrame frame(std::move(window), sample_rate_, next_start_);
  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(hop_));
  next_start_ += hop_;
  return frame;
}

}  // namespace pitchgate
