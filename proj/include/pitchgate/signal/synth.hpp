/// @file synth.hpp
/// @brief Test signal generators: sine sweeps, white noise and a degraded-voice model.

#pragma once

#include <cstdint>
#include <string>

#include "pitchgate/signal/audio.hpp"

namespace pitchgate {

inline constexpr int kCanonicalSampleRate = 44100;

/// amplitude * sin(2 pi f i / rate) for round(duration_s * rate) samples, f = freq_from_midi(midi).
/// Throws PreconditionError unless 0 < amplitude <= 1 and duration_s > 0;
/// NyquistError when f >= rate / 2.
AudioStream synth_sine(double midi, double duration_s, int sample_rate = kCanonicalSampleRate,
                       double amplitude = 0.8);

/// Same waveform as synth_sine with the frequency given directly in Hz.
AudioStream synth_sine_hz(double hz, double duration_s, int sample_rate = kCanonicalSampleRate,
                          double amplitude = 0.8);

/// Gaussian white noise with standard deviation @p amplitude, clamped to [-1, 1].
AudioStream synth_white_noise(double amplitude, double duration_s, std::uint64_t seed,
                              int sample_rate = kCanonicalSampleRate);

/// Parameters of the degraded-voice generator.
///
/// The voice is a train of glottal-flow pulses (Rosenberg shape, DC removed).
/// Each cycle draws its period from base * (1 + jitter * u) and its amplitude
/// from 1 + shimmer * u, u uniform in [-1, 1]. Gaussian breath noise of standard
/// deviation breath_noise_level is added, and the whole signal is silenced
/// outside bursts that cover voiced_duty_cycle of every burst_period_s.
struct DysphonicParams {
  double base_midi = 48.0;
  double duration_s = 2.0;
  int sample_rate = kCanonicalSampleRate;
  double jitter_pct = 0.0;   // [0, 50]
  double shimmer_pct = 0.0;  // [0, 50]
  double breath_noise_level = 0.0;  // [0, 1]
  double voiced_duty_cycle = 1.0;   // (0, 1]
  std::uint64_t seed = 0;
  double voice_level = 0.5;    // (0, 1]
  double burst_period_s = 0.5;

  /// Throws ConfigError naming the first out-of-range field.
  void validate() const;

  /// "key=value,..." form accepted by parse_synth_spec.
  std::string describe() const;
};

/// Deterministic for fixed params: the same seed yields a bit-identical stream.
AudioStream synth_dysphonic(const DysphonicParams& params);

/// Convenience overload in argument order base_midi, duration, rate, jitter, shimmer, noise, duty, seed.
AudioStream synth_dysphonic(double base_midi, double duration_s, int sample_rate,
                            double jitter_pct, double shimmer_pct, double breath_noise_level,
                            double voiced_duty_cycle, std::uint64_t seed);

/// A synthetic source descriptor.
///
/// Text form: comma-separated key=value pairs. `kind` is one of dysphonic
/// (default), sine, noise, silence. Keys: midi, dur, rate, amp, jitter, shimmer,
/// noise, duty, seed, level, burst.
/// Example: "kind=dysphonic,midi=45,dur=3,jitter=3,shimmer=15,noise=0.1,duty=0.5,seed=7".
struct SynthSpec {
  enum class Kind { Dysphonic, Sine, Noise, Silence };
  Kind kind = Kind::Dysphonic;
  DysphonicParams dysphonic;
  double amplitude = 0.8;  // sine peak, or noise standard deviation

  std::string describe() const;
  AudioStream render() const;
};

/// Throws ConfigError on unknown keys or malformed values.
SynthSpec parse_synth_spec(const std::string& text);

}  // namespace pitchgate
