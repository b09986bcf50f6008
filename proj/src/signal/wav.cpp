/// @file wav.cpp

#include "pitchgate/signal/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

#include "pitchgate/error.hpp"

namespace pitchgate {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool has(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  void seek(std::size_t p) { pos_ = p; }

  std::string_view tag(const char* field) {
    need(4, field);
    std::string_view v(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return v;
  }
  std::uint16_t u16(const char* field) {
    need(2, field);
    const std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 4;
    return v;
  }
  const std::uint8_t* data() const { return bytes_.data() + pos_; }

 private:
  void need(std::size_t n, const char* field) const {
    if (!has(n)) {
      throw FormatError(std::string("WAV truncated while reading ") + field + " at byte " +
                        std::to_string(pos_));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

Format read_fmt(Reader& r, std::uint32_t chunk_size) {
  if (chunk_size < 16) {
    throw FormatError("WAV fmt chunk too small: size " + std::to_string(chunk_size));
  }
  const std::size_t start = r.pos();
  Format f;
  f.tag = r.u16("fmt.audio_format");
  f.channels = r.u16("fmt.num_channels");
  f.sample_rate = r.u32("fmt.sample_rate");
  r.u32("fmt.byte_rate");
  f.block_align = r.u16("fmt.block_align");
  f.bits = r.u16("fmt.bits_per_sample");
  if (f.tag == kFormatExtensible) {
    if (chunk_size < 40) {
      throw FormatError("WAV fmt extensible chunk too small: size " + std::to_string(chunk_size));
    }
    r.u16("fmt.cb_size");
    r.u16("fmt.valid_bits");
    r.u32("fmt.channel_mask");
    f.tag = r.u16("fmt.sub_format");
  }
  r.seek(start + chunk_size);
  return f;
}

void validate(const Format& f) {
  if (f.tag != kFormatPcm && f.tag != kFormatFloat) {
    throw FormatError("WAV fmt.audio_format unsupported: " + std::to_string(f.tag) +
                      " (only PCM=1 and IEEE float=3)");
  }
  if (f.channels != 1 && f.channels != 2) {
    throw FormatError("WAV fmt.num_channels unsupported: " + std::to_string(f.channels));
  }
  if (f.sample_rate == 0 || f.sample_rate > 1'000'000) {
    throw FormatError("WAV fmt.sample_rate invalid: " + std::to_string(f.sample_rate));
  }
  const bool int_ok = f.tag == kFormatPcm &&
                      (f.bits == 8 || f.bits == 16 || f.bits == 24 || f.bits == 32);
  const bool float_ok = f.tag == kFormatFloat && f.bits == 32;
  if (!int_ok && !float_ok) {
    throw FormatError("WAV fmt.bits_per_sample unsupported: " + std::to_string(f.bits) +
                      " for audio_format " + std::to_string(f.tag));
  }
  if (f.block_align != f.channels * (f.bits / 8)) {
    throw FormatError("WAV fmt.block_align inconsistent: " + std::to_string(f.block_align));
  }
}

double decode_one(const std::uint8_t* p, const Format& f) {
  switch (f.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16: {
      const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
      return v / 32768.0;
    }
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default: {
      std::uint32_t u = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                        (static_cast<std::uint32_t>(p[2]) << 16) |
                        (static_cast<std::uint32_t>(p[3]) << 24);
      if (f.tag == kFormatFloat) {
        const float x = std::bit_cast<float>(u);
        if (!std::isfinite(x)) throw FormatError("WAV data contains a non-finite float sample");
        return std::clamp(static_cast<double>(x), -1.0, 1.0);
      }
      return static_cast<std::int32_t>(u) / 2147483648.0;
    }
  }
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioStream decode_wav(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.tag("RIFF header") != "RIFF") throw FormatError("WAV riff.chunk_id is not 'RIFF'");
  r.u32("riff.chunk_size");
  if (r.tag("riff.format") != "WAVE") throw FormatError("WAV riff.format is not 'WAVE'");

  std::optional<Format> fmt;
  while (r.has(8)) {
    const std::string id(r.tag("chunk id"));
    const std::uint32_t size = r.u32("chunk size");
    if (id == "fmt ") {
      if (!r.has(size)) throw FormatError("WAV truncated inside fmt chunk");
      fmt = read_fmt(r, size);
      validate(*fmt);
    } else if (id == "data") {
      if (!fmt) throw FormatError("WAV data chunk precedes fmt chunk");
      const std::size_t available = std::min<std::size_t>(size, r.remaining());
      if (available < size && size != 0xFFFFFFFFu) {
        throw FormatError("WAV data chunk truncated: declared " + std::to_string(size) +
                          " bytes, found " + std::to_string(available));
      }
      const std::size_t frames_n = available / fmt->block_align;
      const std::size_t width = fmt->bits / 8;
      std::vector<float> samples(frames_n);
      const std::uint8_t* p = r.data();
      for (std::size_t i = 0; i < frames_n; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < fmt->channels; ++c) {
          acc += decode_one(p + i * fmt->block_align + c * width, *fmt);
        }
        samples[i] = static_cast<float>(acc / fmt->channels);
      }
      return AudioStream(std::move(samples), static_cast<int>(fmt->sample_rate));
    } else {
      if (!r.has(size)) throw FormatError("WAV truncated inside '" + id + "' chunk");
      r.seek(r.pos() + size + (size & 1u));
    }
  }
  if (!fmt) throw FormatError("WAV has no fmt chunk");
  throw FormatError("WAV has no data chunk");
}

AudioStream load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav16(const AudioStream& stream) {
  const auto samples = stream.samples();
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(stream.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(stream.sample_rate()) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (float s : samples) {
    const double scaled = std::round(static_cast<double>(s) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

void write_wav16(const AudioStream& stream, const std::filesystem::path& path) {
  const auto bytes = encode_wav16(stream);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace pitchgate
