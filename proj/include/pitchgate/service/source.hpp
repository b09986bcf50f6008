/// @file source.hpp
/// @brief Engine inputs: capture devices, WAV files and synthesized signals.
///
/// The only capture device is "stdin": raw signed 16-bit little-endian mono
/// PCM at 44100 Hz on standard input (e.g. piped from `arecord -f S16_LE -r 44100 -c 1`).

#pragma once

#include <cstddef>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "pitchgate/signal/audio.hpp"

namespace pitchgate::service {

struct InputSpec {
  enum class Kind { Device, Wav, Synth };
  Kind kind = Kind::Synth;
  std::string value;

  /// "device:NAME", "wav:PATH" or "synth:SPEC". Throws ConfigError otherwise.
  static InputSpec parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const InputSpec&, const InputSpec&) = default;
};

/// Names accepted by "device:NAME".
std::vector<std::string> list_devices();

enum class ReadStatus { Ok, End, DeviceLost };

/// Pull-style sample source. read() appends up to @p max samples to @p out.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual int sample_rate() const = 0;
  /// True for live capture, which runs at the device's own pace.
  virtual bool is_live() const = 0;
  virtual ReadStatus read(std::vector<float>& out, std::size_t max) = 0;
};

/// Plays back an in-memory stream (WAV or synth).
class StreamSource : public SampleSource {
 public:
  explicit StreamSource(AudioStream stream);
  int sample_rate() const override { return stream_.sample_rate(); }
  bool is_live() const override { return false; }
  ReadStatus read(std::vector<float>& out, std::size_t max) override;

 private:
  AudioStream stream_;
  std::size_t pos_ = 0;
};

/// Raw s16le mono PCM from a FILE*. A read error counts as device loss.
class PcmPipeSource : public SampleSource {
 public:
  PcmPipeSource(std::FILE* in, int sample_rate);
  int sample_rate() const override { return sample_rate_; }
  bool is_live() const override { return true; }
  ReadStatus read(std::vector<float>& out, std::size_t max) override;

 private:
  std::FILE* in_;
  int sample_rate_;
};

/// Opens the input. An unknown device throws ConfigError whose message lists
/// the available devices; unreadable files propagate their IoError/FormatError.
std::unique_ptr<SampleSource> open_source(const InputSpec& spec);

}  // namespace pitchgate::service
