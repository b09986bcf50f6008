#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "pitchgate/error.hpp"
#include "pitchgate/signal/audio.hpp"
#include "pitchgate/signal/note_scale.hpp"
#include "pitchgate/signal/synth.hpp"
#include "pitchgate/signal/wav.hpp"
#include "test_support.hpp"

using namespace pitchgate;
using Catch::Approx;

namespace {

// Independent mel inverse: 700 (e^(m ln10 / 2595) - 1).
double mel_to_hz_oracle(double mel) { return 700.0 * std::expm1(mel * std::log(10.0) / 2595.0); }

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xFF));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& b, const char* t) { b.insert(b.end(), t, t + 4); }

// Hand-built RIFF image of 16-bit PCM.
std::vector<std::uint8_t> wav16(const std::vector<std::int16_t>& samples, std::uint16_t channels, std::uint32_t rate) {
  std::vector<std::uint8_t> b;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  put_tag(b, "RIFF");
  put_u32(b, 36 + data_bytes);
  put_tag(b, "WAVE");
  put_tag(b, "fmt ");
  put_u32(b, 16);
  put_u16(b, 1);
  put_u16(b, channels);
  put_u32(b, rate);
  put_u32(b, rate * channels * 2);
  put_u16(b, static_cast<std::uint16_t>(channels * 2));
  put_u16(b, 16);
  put_tag(b, "data");
  put_u32(b, data_bytes);
  for (auto s : samples) put_u16(b, static_cast<std::uint16_t>(s));
  return b;
}

std::size_t zero_crossings(std::span<const float> x) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if ((x[i - 1] < 0.0f) != (x[i] < 0.0f)) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("midi and frequency conversions", "[signal][note_scale]") {
  CHECK(midi_from_freq(440.0) == Approx(69.0).margin(1e-12));
  CHECK(midi_from_freq(220.0) == Approx(57.0).margin(1e-12));
  CHECK(midi_from_freq(261.6256) == Approx(60.0).margin(1e-6));
  CHECK(freq_from_midi(69.0) == Approx(440.0).epsilon(1e-12));
  CHECK(freq_from_midi(57.0) == Approx(220.0).epsilon(1e-12));
  CHECK(freq_from_midi(60.0) == Approx(440.0 / std::pow(2.0, 0.75)).margin(1e-9));
  CHECK(freq_from_midi(60.0) == Approx(261.6256).margin(1e-4));

  CHECK_THROWS_AS(midi_from_freq(0.0), DomainError);
  CHECK_THROWS_AS(midi_from_freq(-1.0), DomainError);
  CHECK_THROWS_AS(midi_from_freq(std::nan("")), DomainError);
  CHECK_THROWS_AS(freq_from_midi(INFINITY), DomainError);
}

TEST_CASE("mel conversions", "[signal][note_scale]") {
  CHECK(mel_from_freq(0.0) == 0.0);
  CHECK(mel_from_freq(700.0) == Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(mel_from_freq(700.0) == Approx(781.17).margin(0.01));
  CHECK(freq_from_mel(0.0) == 0.0);
  CHECK(freq_from_mel(781.17) == Approx(700.0).margin(0.01));

  SECTION("landmarks against an independent closed form") {
    const double f400 = mel_to_hz_oracle(400.0);
    const double f50 = mel_to_hz_oracle(50.0);
    CHECK(f400 == Approx(298.2).margin(0.1));
    CHECK(f50 == Approx(31.7).margin(0.1));
    CHECK(freq_from_mel(400.0) == Approx(f400).epsilon(1e-12));
    CHECK(freq_from_mel(50.0) == Approx(f50).epsilon(1e-12));
    CHECK(mel_from_freq(f400) == Approx(400.0).margin(0.1));
    CHECK(mel_from_freq(f50) == Approx(50.0).margin(1e-9));
  }

  CHECK_THROWS_AS(mel_from_freq(-1.0), DomainError);
  CHECK_THROWS_AS(freq_from_mel(-1.0), DomainError);
}

TEST_CASE("conversions round trip and increase over the audible band", "[signal][note_scale]") {
  double prev_mel = -1.0;
  double prev_midi = -1e9;
  for (int k = 0; k <= 2000; ++k) {
    // Geometric grid strictly inside (20, 20000).
    const double f = 20.0 * std::pow(1000.0, (k + 0.5) / 2001.0);
    const double back_midi = freq_from_midi(midi_from_freq(f));
    const double back_mel = freq_from_mel(mel_from_freq(f));
    REQUIRE(std::abs(back_midi - f) / f < 1e-9);
    REQUIRE(std::abs(back_mel - f) / f < 1e-9);
    REQUIRE(mel_from_freq(f) > prev_mel);
    REQUIRE(midi_from_freq(f) > prev_midi);
    prev_mel = mel_from_freq(f);
    prev_midi = midi_from_freq(f);
  }
}

TEST_CASE("note names", "[signal][note_scale]") {
  CHECK(note_name(69.0) == "A4");
  CHECK(note_name(60.0) == "C4");
  CHECK(note_name(61.2) == "C#4");
  CHECK(note_name(0.0) == "C-1");
}

TEST_CASE("framing", "[signal][audio]") {
  const AudioStream s4096(std::vector<float>(4096, 0.1f), 44100);
  const AudioStream s4095(std::vector<float>(4095, 0.1f), 44100);
  CHECK(frames(s4096, 1024, 1024).size() == 4);
  CHECK(frames(s4095, 1024, 1024).size() == 3);

  const auto overlapped = frames(s4096, 2048, 1024);
  REQUIRE(overlapped.size() == 3);
  CHECK(overlapped[0].start_index() == 0);
  CHECK(overlapped[1].start_index() == 1024);
  CHECK(overlapped[2].start_index() == 2048);

  SECTION("count formula") {
    for (std::size_t len : {0u, 100u, 1023u, 1024u, 5000u, 44100u}) {
      for (std::size_t hop : {1u, 256u, 1024u}) {
        const std::size_t expected = len >= 1024 ? (len - 1024) / hop + 1 : 0;
        CHECK(frame_count(len, 1024, hop) == expected);
      }
    }
  }

  SECTION("frame content follows the hop") {
    std::vector<float> ramp(5000);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<float>(i) / 5000.0f;
    const auto fs = frames(AudioStream(ramp, 8000), 1000, 300);
    REQUIRE(fs.size() == 14);
    for (std::size_t k = 0; k < fs.size(); ++k) {
      CHECK(fs[k].start_index() == k * 300);
      CHECK(fs[k].samples()[0] == ramp[k * 300]);
      CHECK(fs[k].size() == 1000);
    }
  }

  CHECK_THROWS_AS(frames(s4096, 0, 1), PreconditionError);
  CHECK_THROWS_AS(frames(s4096, 1024, 2048), PreconditionError);
  CHECK_THROWS_AS(frames(s4096, 1024, 0), PreconditionError);
}

TEST_CASE("frame assembler matches offline framing", "[signal][audio]") {
  const auto stream = synth_sine(57.0, 0.5);
  FrameAssembler assembler(stream.sample_rate(), 2048, 512);
  std::vector<AudioFrame> live;
  const auto all = stream.samples();
  for (std::size_t i = 0; i < all.size(); i += 777) {
    assembler.push(all.subspan(i, std::min<std::size_t>(777, all.size() - i)));
    while (auto f = assembler.pop()) live.push_back(*f);
  }
  const auto offline = frames(stream, 2048, 512);
  REQUIRE(live.size() == offline.size());
  for (std::size_t k = 0; k < live.size(); ++k) {
    CHECK(live[k].start_index() == offline[k].start_index());
    CHECK(std::equal(live[k].samples().begin(), live[k].samples().end(), offline[k].samples().begin()));
  }
}

TEST_CASE("rms amplitude", "[signal][audio]") {
  CHECK(rms_amplitude(std::vector<float>(512, 0.0f)) == 0.0);
  CHECK(rms_amplitude(std::vector<float>(512, 1.0f)) == Approx(1.0));
  const auto sine = synth_sine_hz(441.0, 1.0, 44100, 1.0);
  CHECK(rms_amplitude(sine.samples()) == Approx(1.0 / std::sqrt(2.0)).margin(0.01));
}

TEST_CASE("sine synthesis", "[signal][synth]") {
  const auto a4 = synth_sine(69.0, 1.0, 44100, 0.8);
  REQUIRE(a4.size() == 44100);
  const auto crossings = zero_crossings(a4.samples());
  CHECK(crossings >= 878);
  CHECK(crossings <= 882);

  for (float x : a4.samples()) REQUIRE(std::abs(x) <= 0.8f);
  CHECK(a4.samples()[1] == Approx(0.8 * std::sin(2.0 * M_PI * 440.0 / 44100.0)).margin(1e-6));

  CHECK(synth_sine(60.0, 0.25, 8000).size() == 2000);
  CHECK_THROWS_AS(synth_sine(69.0, 1.0, 44100, 0.0), PreconditionError);
  CHECK_THROWS_AS(synth_sine(69.0, 0.0), PreconditionError);

  SECTION("Nyquist boundary") {
    // freq_from_midi(136) ~ 20.9 kHz is below 22050; 137 ~ 22.2 kHz is the first above.
    CHECK(440.0 * std::pow(2.0, (136.0 - 69.0) / 12.0) < 22050.0);
    CHECK(440.0 * std::pow(2.0, (137.0 - 69.0) / 12.0) > 22050.0);
    CHECK_NOTHROW(synth_sine(136.0, 0.01));
    CHECK_THROWS_AS(synth_sine(137.0, 0.01), NyquistError);
  }
}

TEST_CASE("dominant DFT bin of a bin-aligned sine", "[signal][synth]") {
  const std::size_t n = 1024;
  const int rate = 44100;
  const int bin = 37;
  const auto s = synth_sine_hz(static_cast<double>(bin) * rate / n, static_cast<double>(n) / rate, rate);
  REQUIRE(s.size() == n);
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = 2.0 * M_PI * static_cast<double>(k * i) / n;
      re += s.samples()[i] * std::cos(ph);
      im -= s.samples()[i] * std::sin(ph);
    }
    const double mag = re * re + im * im;
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  CHECK(best == static_cast<std::size_t>(bin));
}

TEST_CASE("white noise", "[signal][synth]") {
  const auto a = synth_white_noise(0.1, 0.5, 3);
  const auto b = synth_white_noise(0.1, 0.5, 3);
  const auto c = synth_white_noise(0.1, 0.5, 4);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(rms_amplitude(a.samples()) == Approx(0.1).margin(0.005));
}

TEST_CASE("dysphonic synthesis", "[signal][synth]") {
  DysphonicParams p;
  p.base_midi = 45;
  p.duration_s = 3.0;
  p.jitter_pct = 3;
  p.shimmer_pct = 15;
  p.breath_noise_level = 0.1;
  p.voiced_duty_cycle = 0.3;
  p.seed = 7;

  SECTION("bit-identical for a fixed seed") {
    CHECK(synth_dysphonic(p) == synth_dysphonic(p));
    auto q = p;
    q.seed = 8;
    CHECK_FALSE(synth_dysphonic(p) == synth_dysphonic(q));
  }

  SECTION("voiced fraction follows the duty cycle") {
    const auto s = synth_dysphonic(p);
    REQUIRE(s.size() == 3 * 44100);
    std::size_t voiced = 0;
    for (float x : s.samples()) voiced += x != 0.0f;
    const double fraction = static_cast<double>(voiced) / static_cast<double>(s.size());
    CHECK(fraction == Approx(0.3).margin(0.05));
  }

  SECTION("clean voice is periodic at the base pitch") {
    const auto s = synth_dysphonic(45.0, 1.0, 44100, 0, 0, 0, 1.0, 0);
    const double period = 44100.0 / freq_from_midi(45.0);
    // Period is not an integer number of samples, so compare against a linear interpolation.
    double worst = 0.0;
    for (std::size_t i = 2000; i < 20000; ++i) {
      const double t = static_cast<double>(i) + period;
      const auto j = static_cast<std::size_t>(t);
      const double frac = t - static_cast<double>(j);
      const double shifted = s.samples()[j] * (1.0 - frac) + s.samples()[j + 1] * frac;
      worst = std::max(worst, std::abs(shifted - s.samples()[i]));
    }
    CHECK(worst < 0.05);
  }

  SECTION("range violations") {
    auto bad = p;
    bad.jitter_pct = 51;
    CHECK_THROWS_AS(synth_dysphonic(bad), ConfigError);
    bad = p;
    bad.shimmer_pct = -1;
    CHECK_THROWS_AS(synth_dysphonic(bad), ConfigError);
    bad = p;
    bad.voiced_duty_cycle = 0.0;
    CHECK_THROWS_AS(synth_dysphonic(bad), ConfigError);
    bad = p;
    bad.breath_noise_level = 1.5;
    CHECK_THROWS_AS(synth_dysphonic(bad), ConfigError);
  }
}

TEST_CASE("synth spec parsing", "[signal][synth]") {
  const auto spec = parse_synth_spec("kind=dysphonic,midi=45,dur=3,jitter=3,shimmer=15,noise=0.1,duty=0.5,seed=7");
  CHECK(spec.kind == SynthSpec::Kind::Dysphonic);
  CHECK(spec.dysphonic.base_midi == 45.0);
  CHECK(spec.dysphonic.seed == 7);
  CHECK(parse_synth_spec(spec.describe()).render() == spec.render());
  CHECK(parse_synth_spec("kind=sine,midi=69,dur=1").render() == synth_sine(69.0, 1.0));
  CHECK_THROWS_AS(parse_synth_spec("kind=sine,bogus=1"), ConfigError);
  CHECK_THROWS_AS(parse_synth_spec("kind=sine,midi=abc"), ConfigError);
}

TEST_CASE("wav decoding", "[signal][wav]") {
  SECTION("constant 16384 decodes to one half") {
    const auto s = decode_wav(wav16(std::vector<std::int16_t>(1000, 16384), 1, 44100));
    REQUIRE(s.size() == 1000);
    CHECK(s.sample_rate() == 44100);
    for (float x : s.samples()) REQUIRE(std::abs(x - 0.5f) <= 1.0f / 32768.0f);
  }

  SECTION("one second at 44100 Hz") {
    CHECK(decode_wav(wav16(std::vector<std::int16_t>(44100, 0), 1, 44100)).size() == 44100);
  }

  SECTION("header rate is kept") {
    CHECK(decode_wav(wav16(std::vector<std::int16_t>(10, 0), 1, 22050)).sample_rate() == 22050);
  }

  SECTION("stereo is averaged") {
    const auto s = decode_wav(wav16({16384, 0, -8192, 8192}, 2, 44100));
    REQUIRE(s.size() == 2);
    CHECK(s.samples()[0] == Approx(0.25));
    CHECK(s.samples()[1] == Approx(0.0).margin(1e-9));
  }

  SECTION("truncated header") {
    auto bytes = wav16(std::vector<std::int16_t>(100, 1), 1, 44100);
    bytes.resize(30);
    CHECK_THROWS_AS(decode_wav(bytes), FormatError);
  }

  SECTION("not a RIFF file") {
    auto bytes = wav16(std::vector<std::int16_t>(100, 1), 1, 44100);
    bytes[0] = 'X';
    CHECK_THROWS_AS(decode_wav(bytes), FormatError);
  }

  SECTION("unsupported codec") {
    auto bytes = wav16(std::vector<std::int16_t>(100, 1), 1, 44100);
    bytes[20] = 2;  // ADPCM
    CHECK_THROWS_AS(decode_wav(bytes), FormatError);
  }

  SECTION("missing file") {
    CHECK_THROWS_AS(load_wav("/nonexistent/definitely/missing.wav"), IoError);
  }
}

TEST_CASE("16-bit wav round trip is sample identical", "[signal][wav]") {
  testing::TempDir dir;
  const auto original = synth_dysphonic(50.0, 0.5, 44100, 2, 10, 0.05, 0.7, 11);
  write_wav16(original, dir / "a.wav");
  const auto first = load_wav(dir / "a.wav");
  write_wav16(first, dir / "b.wav");
  const auto second = load_wav(dir / "b.wav");
  CHECK(first == second);
  REQUIRE(first.size() == original.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    REQUIRE(std::abs(first.samples()[i] - original.samples()[i]) <= 1.0f / 32768.0f);
  }
}
