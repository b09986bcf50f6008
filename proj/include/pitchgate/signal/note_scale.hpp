/// @file note_scale.hpp
/// @brief Frequency, MIDI note number and mel conversions.
///
/// MIDI uses twelve-tone equal temperament anchored at A4 (MIDI 69). The mel
/// scale is the 2595 * log10(1 + f / 700) form, in which the landmark values used
/// throughout the project sit: 50 mel ~ 31.7 Hz, 400 mel ~ 298.2 Hz (just above
/// middle C), 2000 mel ~ 3429 Hz.

#pragma once

#include <string>

namespace pitchgate {

inline constexpr double kA4Hz = 440.0;
inline constexpr double kA4Midi = 69.0;
inline constexpr double kMelScale = 2595.0;
inline constexpr double kMelBreakHz = 700.0;

/// 69 + 12 log2(f / a4). Throws DomainError for non-positive or non-finite @p hz.
double midi_from_freq(double hz, double a4_hz = kA4Hz);

/// a4 * 2^((m - 69) / 12). Throws DomainError for non-finite @p midi.
double freq_from_midi(double midi, double a4_hz = kA4Hz);

/// Throws DomainError for negative or non-finite @p hz.
double mel_from_freq(double hz);

/// Exact inverse of mel_from_freq. Throws DomainError for negative or non-finite @p mel.
double freq_from_mel(double mel);

/// Nearest-integer MIDI note in scientific pitch notation with sharps ("A4", "C#3", "C-1").
std::string note_name(double midi);

}  // namespace pitchgate
