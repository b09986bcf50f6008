/// @file source.cpp

#include "pitchgate/service/source.hpp"

#include <algorithm>
#include <cstdint>

#include "pitchgate/error.hpp"
#include "pitchgate/signal/synth.hpp"
#include "pitchgate/signal/wav.hpp"

namespace pitchgate::service {

namespace {

constexpr int kDeviceSampleRate = 44100;

}  // namespace

InputSpec InputSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("input '" + text + "' must be device:NAME, wav:PATH or synth:SPEC");
  }
  const std::string kind = text.substr(0, colon);
  InputSpec spec;
  spec.value = text.substr(colon + 1);
  if (kind == "device") {
    spec.kind = Kind::Device;
  } else if (kind == "wav") {
    spec.kind = Kind::Wav;
  } else if (kind == "synth") {
    spec.kind = Kind::Synth;
  } else {
    throw ConfigError("input kind '" + kind + "' must be device, wav or synth");
  }
  if (spec.value.empty()) throw ConfigError("input '" + text + "' has an empty value");
  return spec;
}

std::string InputSpec::to_string() const {
  switch (kind) {
    case Kind::Device: return "device:" + value;
    case Kind::Wav: return "wav:" + value;
    case Kind::Synth: return "synth:" + value;
  }
  return value;
}

std::vector<std::string> list_devices() { return {"stdin"}; }

StreamSource::StreamSource(AudioStream stream) : stream_(std::move(stream)) {}

ReadStatus StreamSource::read(std::vector<float>& out, std::size_t max) {
  const auto samples = stream_.samples();
  if (pos_ >= samples.size()) return ReadStatus::End;
  const std::size_t n = std::min(max, samples.size() - pos_);
  out.insert(out.end(), samples.begin() + static_cast<std::ptrdiff_t>(pos_),
             samples.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return ReadStatus::Ok;
}

PcmPipeSource::PcmPipeSource(std::FILE* in, int sample_rate) : in_(in), sample_rate_(sample_rate) {}

ReadStatus PcmPipeSource::read(std::vector<float>& out, std::size_t max) {
  std::vector<std::int16_t> raw(max);
  const std::size_t got = std::fread(raw.data(), sizeof(std::int16_t), max, in_);
  for (std::size_t i = 0; i < got; ++i) out.push_back(static_cast<float>(raw[i]) / 32768.0f);
  if (got > 0) return ReadStatus::Ok;
  return std::ferror(in_) ? ReadStatus::DeviceLost : ReadStatus::End;
}

std::unique_ptr<SampleSource> open_source(const InputSpec& spec) {
  switch (spec.kind) {
    case InputSpec::Kind::Device: {
      const auto devices = list_devices();
      if (std::find(devices.begin(), devices.end(), spec.value) == devices.end()) {
        std::string names;
        for (const auto& d : devices) names += (names.empty() ? "" : ", ") + d;
        throw ConfigError("audio device '" + spec.value + "' is unavailable; available devices: " + names);
      }
      return std::make_unique<PcmPipeSource>(stdin, kDeviceSampleRate);
    }
    case InputSpec::Kind::Wav: return std::make_unique<StreamSource>(load_wav(spec.value));
    case InputSpec::Kind::Synth: return std::make_unique<StreamSource>(parse_synth_spec(spec.value).render());
  }
  throw ConfigError("unsupported input");
}

}  // namespace pitchgate::service
