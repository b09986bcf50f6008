/// @file wav.hpp
/// @brief RIFF/WAVE reading and 16-bit writing.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pitchgate/signal/audio.hpp"

namespace pitchgate {

/// Reads PCM (8/16/24/32-bit integer) or IEEE float (32-bit) WAV, mono or stereo.
/// Stereo is averaged to mono; samples are normalized to [-1, 1] by 2^(bits-1).
/// Throws FormatError naming the offending field, or IoError if the file cannot be opened.
AudioStream load_wav(const std::filesystem::path& path);

/// Same as load_wav, from an in-memory file image.
AudioStream decode_wav(std::span<const std::uint8_t> bytes);

/// Encodes mono 16-bit PCM: round(x * 32768) clamped to [-32768, 32767].
std::vector<std::uint8_t> encode_wav16(const AudioStream& stream);

/// Writes encode_wav16 output; throws IoError on failure.
void write_wav16(const AudioStream& stream, const std::filesystem::path& path);

}  // namespace pitchgate
