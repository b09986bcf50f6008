/// @file synth.cpp

#include "pitchgate/signal/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "pitchgate/error.hpp"
#include "pitchgate/signal/note_scale.hpp"
#include "pitchgate/signal/random.hpp"

namespace pitchgate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rosenberg glottal flow: opening phase 40% of the cycle, closing phase 16%.
constexpr double kOpenFraction = 0.40;
constexpr double kCloseFraction = 0.16;

std::size_t sample_count(double duration_s, int sample_rate) {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double rosenberg_flow(double phase) {
  if (phase < kOpenFraction) {
    return 0.5 * (1.0 - std::cos(std::numbers::pi * phase / kOpenFraction));
  }
  if (phase < kOpenFraction + kCloseFraction) {
    return std::cos(std::numbers::pi * (phase - kOpenFraction) / (2.0 * kCloseFraction));
  }
  return 0.0;
}

// Mean of rosenberg_flow over one cycle, so the pulse train has no DC.
constexpr double kFlowMean = 0.5 * kOpenFraction + 2.0 * kCloseFraction / std::numbers::pi;

}  // namespace

AudioStream synth_sine_hz(double hz, double duration_s, int sample_rate, double amplitude) {
  if (!(amplitude > 0.0 && amplitude <= 1.0)) {
    throw PreconditionError("synth_sine: amplitude must be in (0, 1]");
  }
  if (!(duration_s > 0.0)) throw PreconditionError("synth_sine: duration must be positive");
  if (sample_rate <= 0) throw PreconditionError("synth_sine: sample rate must be positive");
  if (!(hz > 0.0)) throw PreconditionError("synth_sine: frequency must be positive");
  if (hz >= sample_rate / 2.0) {
    throw NyquistError("synth_sine: frequency " + std::to_string(hz) + " Hz is at or above Nyquist (" +
                       std::to_string(sample_rate / 2.0) + " Hz)");
  }
  const std::size_t n = sample_count(duration_s, sample_rate);
  std::vector<float> out(n);
  const double w = kTwoPi * hz / sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<float>(amplitude * std::sin(w * static_cast<double>(i)));
  }
  return AudioStream(std::move(out), sample_rate);
}

AudioStream synth_sine(double midi, double duration_s, int sample_rate, double amplitude) {
  return synth_sine_hz(freq_from_midi(midi), duration_s, sample_rate, amplitude);
}

AudioStream synth_white_noise(double amplitude, double duration_s, std::uint64_t seed,
                              int sample_rate) {
  if (!(amplitude > 0.0 && amplitude <= 1.0)) {
    throw PreconditionError("synth_white_noise: amplitude must be in (0, 1]");
  }
  if (!(duration_s > 0.0)) throw PreconditionError("synth_white_noise: duration must be positive");
  DeterministicRng rng(seed);
  std::vector<float> out(sample_count(duration_s, sample_rate));
  for (auto& s : out) {
    s = static_cast<float>(std::clamp(amplitude * rng.gaussian(), -1.0, 1.0));
  }
  return AudioStream(std::move(out), sample_rate);
}

void DysphonicParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("dysphonic synth: " + what); };
  if (!std::isfinite(base_midi)) fail("base_midi must be finite");
  if (!(duration_s > 0.0)) fail("duration_s must be positive");
  if (sample_rate <= 0) fail("sample_rate must be positive");
  if (!(jitter_pct >= 0.0 && jitter_pct <= 50.0)) fail("jitter_pct must be in [0, 50]");
  if (!(shimmer_pct >= 0.0 && shimmer_pct <= 50.0)) fail("shimmer_pct must be in [0, 50]");
  if (!(breath_noise_level >= 0.0 && breath_noise_level <= 1.0)) {
    fail("breath_noise_level must be in [0, 1]");
  }
  if (!(voiced_duty_cycle > 0.0 && voiced_duty_cycle <= 1.0)) {
    fail("voiced_duty_cycle must be in (0, 1]");
  }
  if (!(voice_level > 0.0 && voice_level <= 1.0)) fail("voice_level must be in (0, 1]");
  if (!(burst_period_s > 0.0)) fail("burst_period_s must be positive");
  // worst-case jittered fundamental must stay below Nyquist
  if (freq_from_midi(base_midi) * 1.5 >= sample_rate / 2.0) fail("base_midi too close to Nyquist");
}

std::string DysphonicParams::describe() const {
  std::ostringstream os;
  os << "kind=dysphonic,midi=" << shortest(base_midi) << ",dur=" << shortest(duration_s)
     << ",rate=" << sample_rate << ",jitter=" << shortest(jitter_pct)
     << ",shimmer=" << shortest(shimmer_pct) << ",noise=" << shortest(breath_noise_level)
     << ",duty=" << shortest(voiced_duty_cycle) << ",seed=" << seed
     << ",level=" << shortest(voice_level) << ",burst=" << shortest(burst_period_s);
  return os.str();
}

AudioStream synth_dysphonic(const DysphonicParams& p) {
  p.validate();
  const std::size_t n = sample_count(p.duration_s, p.sample_rate);
  const double base_period = p.sample_rate / freq_from_midi(p.base_midi);
  const double jitter = p.jitter_pct / 100.0;
  const double shimmer = p.shimmer_pct / 100.0;
  const auto burst_len = static_cast<std::size_t>(std::llround(p.burst_period_s * p.sample_rate));
  const auto voiced_len =
      static_cast<std::size_t>(std::llround(p.voiced_duty_cycle * static_cast<double>(burst_len)));

  // Separate generators keep the pulse sequence independent of the noise level.
  DeterministicRng pulse_rng(p.seed);
  DeterministicRng noise_rng(p.seed ^ 0x9E3779B97F4A7C15ull);

  std::vector<float> out(n, 0.0f);
  double cycle_start = 0.0;
  double period = base_period * (1.0 + jitter * pulse_rng.uniform(-1.0, 1.0));
  double gain = 1.0 + shimmer * pulse_rng.uniform(-1.0, 1.0);
  const double peak = 1.0 - kFlowMean;

  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    while (t >= cycle_start + period) {
      cycle_start += period;
      period = base_period * (1.0 + jitter * pulse_rng.uniform(-1.0, 1.0));
      gain = 1.0 + shimmer * pulse_rng.uniform(-1.0, 1.0);
    }
    const double noise = noise_rng.gaussian();
    const bool voiced = burst_len == 0 || (i % burst_len) < voiced_len;
    if (!voiced) continue;
    const double phase = (t - cycle_start) / period;
    const double pulse = (rosenberg_flow(phase) - kFlowMean) / peak;
    const double value = p.voice_level * gain * pulse + p.breath_noise_level * noise;
    out[i] = static_cast<float>(std::clamp(value, -1.0, 1.0));
  }
  return AudioStream(std::move(out), p.sample_rate);
}

AudioStream synth_dysphonic(double base_midi, double duration_s, int sample_rate,
                            double jitter_pct, double shimmer_pct, double breath_noise_level,
                            double voiced_duty_cycle, std::uint64_t seed) {
  DysphonicParams p;
  p.base_midi = base_midi;
  p.duration_s = duration_s;
  p.sample_rate = sample_rate;
  p.jitter_pct = jitter_pct;
  p.shimmer_pct = shimmer_pct;
  p.breath_noise_level = breath_noise_level;
  p.voiced_duty_cycle = voiced_duty_cycle;
  p.seed = seed;
  return synth_dysphonic(p);
}

std::string SynthSpec::describe() const {
  const auto& d = dysphonic;
  switch (kind) {
    case Kind::Dysphonic:
      return d.describe();
    case Kind::Sine:
      return "kind=sine,midi=" + shortest(d.base_midi) + ",dur=" + shortest(d.duration_s) +
             ",rate=" + std::to_string(d.sample_rate) + ",amp=" + shortest(amplitude);
    case Kind::Noise:
      return "kind=noise,dur=" + shortest(d.duration_s) + ",rate=" + std::to_string(d.sample_rate) +
             ",amp=" + shortest(amplitude) + ",seed=" + std::to_string(d.seed);
    case Kind::Silence:
      return "kind=silence,dur=" + shortest(d.duration_s) + ",rate=" + std::to_string(d.sample_rate);
  }
  return {};
}

AudioStream SynthSpec::render() const {
  const auto& d = dysphonic;
  switch (kind) {
    case Kind::Dysphonic:
      return synth_dysphonic(d);
    case Kind::Sine:
      return synth_sine(d.base_midi, d.duration_s, d.sample_rate, amplitude);
    case Kind::Noise:
      return synth_white_noise(amplitude, d.duration_s, d.seed, d.sample_rate);
    case Kind::Silence:
      if (!(d.duration_s > 0.0)) throw ConfigError("silence: dur must be positive");
      return AudioStream(std::vector<float>(sample_count(d.duration_s, d.sample_rate), 0.0f),
                         d.sample_rate);
  }
  throw ConfigError("unknown synth kind");
}

SynthSpec parse_synth_spec(const std::string& text) {
  SynthSpec spec;
  std::istringstream in(text);
  std::string item;
  auto number = [](const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
      throw ConfigError("synth spec: value for '" + key + "' is not a number: '" + value + "'");
    }
    return v;
  };
  auto integer = [](const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
      throw ConfigError("synth spec: value for '" + key + "' is not an integer: '" + value + "'");
    }
    return v;
  };
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("synth spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    auto& d = spec.dysphonic;
    if (key == "kind") {
      if (value == "dysphonic") spec.kind = SynthSpec::Kind::Dysphonic;
      else if (value == "sine") spec.kind = SynthSpec::Kind::Sine;
      else if (value == "noise") spec.kind = SynthSpec::Kind::Noise;
      else if (value == "silence") spec.kind = SynthSpec::Kind::Silence;
      else throw ConfigError("synth spec: unknown kind '" + value + "'");
    } else if (key == "midi") d.base_midi = number(key, value);
    else if (key == "dur") d.duration_s = number(key, value);
    else if (key == "rate") d.sample_rate = static_cast<int>(integer(key, value));
    else if (key == "amp") spec.amplitude = number(key, value);
    else if (key == "jitter") d.jitter_pct = number(key, value);
    else if (key == "shimmer") d.shimmer_pct = number(key, value);
    else if (key == "noise") d.breath_noise_level = number(key, value);
    else if (key == "duty") d.voiced_duty_cycle = number(key, value);
    else if (key == "seed") d.seed = integer(key, value);
    else if (key == "level") d.voice_level = number(key, value);
    else if (key == "burst") d.burst_period_s = number(key, value);
    else throw ConfigError("synth spec: unknown key '" + key + "'");
  }
  if (spec.kind == SynthSpec::Kind::Dysphonic) spec.dysphonic.validate();
  return spec;
}

}  // namespace pitchgate
