/// @file note_scale.cpp

#include "pitchgate/signal/note_scale.hpp"

#include <array>
#include <cmath>

#include "pitchgate/error.hpp"

namespace pitchgate {

double midi_from_freq(double hz, double a4_hz) {
  if (!std::isfinite(hz) || hz <= 0.0) {
    throw DomainError("midi_from_freq: frequency must be positive and finite, got " +
                      std::to_string(hz));
  }
  return kA4Midi + 12.0 * std::log2(hz / a4_hz);
}

double freq_from_midi(double midi, double a4_hz) {
  if (!std::isfinite(midi)) {
    throw DomainError("freq_from_midi: MIDI number must be finite");
  }
  return a4_hz * std::exp2((midi - kA4Midi) / 12.0);
}

double mel_from_freq(double hz) {
  if (!std::isfinite(hz) || hz < 0.0) {
    throw DomainError("mel_from_freq: frequency must be non-negative and finite, got " +
                      std::to_string(hz));
  }
  return kMelScale * std::log10(1.0 + hz / kMelBreakHz);
}

double freq_from_mel(double mel) {
  if (!std::isfinite(mel) || mel < 0.0) {
    throw DomainError("freq_from_mel: mel must be non-negative and finite, got " +
                      std::to_string(mel));
  }
  return kMelBreakHz * (std::pow(10.0, mel / kMelScale) - 1.0);
}

std::string note_name(double midi) {
  static constexpr std::array<const char*, 12> kNames = {"C",  "C#", "D",  "D#", "E",  "F",
                                                          "F#", "G",  "G#", "A",  "A#", "B"};
  if (!std::isfinite(midi)) {
    throw DomainError("note_name: MIDI number must be finite");
  }
  const long n = std::lround(midi);
  // floor division so negative notes get the right octave
  const long octave = (n >= 0 ? n / 12 : (n - 11) / 12) - 1;
  const long pc = ((n % 12) + 12) % 12;
  return std::string(kNames[static_cast<std::size_t>(pc)]) + std::to_string(octave);
}

}  // namespace pitchgate
