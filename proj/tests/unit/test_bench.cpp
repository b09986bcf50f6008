#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <vector>

#include "pitchgate/bench/bench.hpp"
#include "pitchgate/bench/report.hpp"
#include "pitchgate/error.hpp"
#include "pitchgate/signal/note_scale.hpp"
#include "pitchgate/signal/synth.hpp"
#include "pitchgate/signal/wav.hpp"
#include "test_support.hpp"

using namespace pitchgate;
using namespace pitchgate::bench;
using Catch::Approx;

namespace {

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("midi range helper", "[bench]") {
  const auto r = midi_range(36, 40);
  CHECK(r == std::vector<double>{36, 37, 38, 39, 40});
  CHECK(midi_range(36, 84).size() == 49);
}

TEST_CASE("sine sweep examples", "[bench][sweep]") {
  const std::vector<double> notes = {40.0, 48.0};

  SECTION("Yin at 4096 is within half a note") {
    const AlgorithmId algs[] = {AlgorithmId::Yin};
    const std::size_t bufs[] = {4096};
    const auto report = run_sine_sweep(algs, bufs, notes, DetectorConfig{});
    REQUIRE(report.records.size() == 2);
    const auto& r = report.records[1];
    CHECK(r.true_midi == 48.0);
    REQUIRE(r.pitched);
    CHECK(*r.abs_error_midi < 0.5);
  }

  SECTION("FftPeak at 1024 snaps to the lowest in-band bin") {
    const AlgorithmId algs[] = {AlgorithmId::FftPeak};
    const std::size_t bufs[] = {1024};
    const auto report = run_sine_sweep(algs, bufs, notes, DetectorConfig{});
    REQUIRE(report.records.size() == 2);
    const auto& r = report.records[0];
    REQUIRE(r.pitched);
    // Frames of 1024 samples hold two periods only from 2 * 44100 / 1024 Hz up,
    // which is bin 2 exactly; the 82.4 Hz tone lands there.
    const double bin2 = 2.0 * 44100.0 / 1024.0;
    const double expected = 12.0 * std::log2(bin2 / (440.0 * std::pow(2.0, (40.0 - 69.0) / 12.0)));
    CHECK(*r.abs_error_midi == Approx(expected).margin(1e-9));
    CHECK(*r.abs_error_midi > 0.5);
  }

  SECTION("empty algorithm list") {
    const std::size_t bufs[] = {1024};
    CHECK(run_sine_sweep({}, bufs, notes, DetectorConfig{}).records.empty());
  }
}

TEST_CASE("sweep completeness, invariants and reproducibility", "[bench][sweep]") {
  const AlgorithmId algs[] = {AlgorithmId::ClassicAutocorrelator, AlgorithmId::Yin, AlgorithmId::FftPeak};
  const std::size_t bufs[] = {1024, 4096};
  const std::vector<double> notes = {36, 45, 60, 72, 136, 137, 140};
  SweepOptions opts;
  opts.duration_s = 0.5;
  const auto a = run_sine_sweep(algs, bufs, notes, DetectorConfig{}, opts);
  // 137 and 140 exceed Nyquist for every (alg, buffer).
  CHECK(a.records.size() == 3 * 2 * 5);
  CHECK(a.warnings.size() == 3 * 2 * 2);
  for (const auto& r : a.records) {
    CHECK(r.abs_error_midi.has_value() == r.pitched);
    if (r.pitched) CHECK(*r.abs_error_midi == Approx(std::abs(*r.estimated_midi - r.true_midi)).margin(1e-12));
  }
  opts.threads = 1;
  const auto b = run_sine_sweep(algs, bufs, notes, DetectorConfig{}, opts);
  CHECK(a.records == b.records);
}

TEST_CASE("mel filter demotes high notes in the sweep", "[bench][sweep]") {
  const AlgorithmId algs[] = {AlgorithmId::Yin};
  const std::size_t bufs[] = {4096};
  const auto notes = midi_range(58, 66);
  SweepOptions opts;
  opts.mel_filter = true;
  const auto report = run_sine_sweep(algs, bufs, notes, DetectorConfig{}, opts);
  for (const auto& r : report.records) {
    const bool below = mel_from_freq(freq_from_midi(r.true_midi)) <= 400.0;
    INFO("midi " << r.true_midi);
    if (r.true_midi >= 63) CHECK_FALSE(r.pitched);
    if (r.true_midi <= 61) CHECK(r.pitched);
    CHECK(below == (r.true_midi <= 62));
  }
}

TEST_CASE("timing", "[bench][timing]") {
  const AlgorithmId algs[] = {AlgorithmId::FftPeak, AlgorithmId::Mpm};
  const std::size_t bufs[] = {1024, 4096};
  TimingOptions opts;
  opts.iterations = 30;
  opts.warmups = 5;
  opts.min_measure_ms = 0.0;
  const auto records = run_timing(algs, bufs, DetectorConfig{}, opts);
  REQUIRE(records.size() == 4);
  for (const auto& r : records) {
    CHECK(r.frames_measured >= 30);
    CHECK(r.mean_ns_per_buffer > 0.0);
  }
  const auto ratio = growth_ratio(records, AlgorithmId::Mpm);
  REQUIRE(ratio);
  CHECK(*ratio > 1.0);
  CHECK_FALSE(growth_ratio(records, AlgorithmId::Yin));

  opts.iterations = 0;
  CHECK_THROWS_AS(run_timing(algs, bufs, DetectorConfig{}, opts), PreconditionError);
}

TEST_CASE("voice bench", "[bench][voice]") {
  const auto corpus = default_voice_corpus();
  REQUIRE(corpus.size() == 4);
  const AlgorithmId algs[] = {AlgorithmId::ClassicAutocorrelator, AlgorithmId::FftPeak, AlgorithmId::Yin,
                              AlgorithmId::FastYin};
  const auto report = run_voice_bench(corpus, algs, 4096, DetectorConfig{});
  CHECK(report.failed_sources == 0);
  REQUIRE(report.records.size() == corpus.size() * 4);

  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& classic = report.records[s * 4 + 0];
    const auto& fft = report.records[s * 4 + 1];
    const auto& yin = report.records[s * 4 + 2];
    const auto& fast = report.records[s * 4 + 3];
    INFO(corpus[s].descriptor);
    CHECK(classic.source == corpus[s].descriptor);
    CHECK(classic.frames_total > 0);
    CHECK(classic.detection_rate == 1.0);
    CHECK(fft.detection_rate == 1.0);
    CHECK(yin.detection_rate < classic.detection_rate);
    CHECK(fast.detection_rate < fft.detection_rate);
    for (const auto& r : {classic, fft, yin, fast}) {
      CHECK(r.detection_rate >= 0.0);
      CHECK(r.detection_rate <= 1.0);
      CHECK(r.pitched_midi_values.size() == r.frames_pitched);
      CHECK(r.detection_rate == Approx(static_cast<double>(r.frames_pitched) / r.frames_total));
    }
  }

  SECTION("reproducible") {
    CHECK(run_voice_bench(corpus, algs, 4096, DetectorConfig{}).records == report.records);
  }
}

TEST_CASE("voice bench edge sources", "[bench][voice]") {
  testing::TempDir dir;
  write_wav16(synth_sine(50.0, 1.0), dir / "tone.wav");
  const std::vector<VoiceSource> sources = {
      VoiceSource::parse("synth:kind=silence,dur=1"),
      VoiceSource::parse((dir / "missing.wav").string()),
      VoiceSource::parse("wav:" + (dir / "tone.wav").string()),
  };
  const AlgorithmId algs[] = {AlgorithmId::Yin, AlgorithmId::Mpm};
  const auto report = run_voice_bench(sources, algs, 4096, DetectorConfig{});
  CHECK(report.failed_sources == 1);
  REQUIRE(report.records.size() == 6);
  for (std::size_t a = 0; a < 2; ++a) {
    const auto& silent = report.records[a];
    CHECK(silent.detection_rate == 0.0);
    CHECK(silent.frames_pitched == 0);
    CHECK(silent.frames_silent > 0);
    CHECK_FALSE(silent.error);
    CHECK(report.records[2 + a].error.has_value());
    CHECK(report.records[4 + a].detection_rate == 1.0);
  }
}

TEST_CASE("reports", "[bench][report]") {
  testing::TempDir dir;
  std::vector<BenchmarkRecord> recs(3);
  recs[0] = {AlgorithmId::Yin, 4096, 48.0, 48.01, 0.01, true};
  recs[1] = {AlgorithmId::Mpm, 1024, 36.0, std::nullopt, std::nullopt, false};
  recs[2] = {AlgorithmId::FftPeak, 1024, 40.0, 40.765, 0.765, true};

  SECTION("csv has a header and one row per record") {
    emit_report<BenchmarkRecord>(recs, ReportFormat::Csv, dir / "r.csv");
    const auto text = testing::read_text(dir / "r.csv");
    CHECK(line_count(text) == 4);
    CHECK(text.rfind("algorithm,buffer_size,true_midi,estimated_midi,abs_error_midi,pitched\n", 0) == 0);
  }

  SECTION("jsonl round trips") {
    emit_report<BenchmarkRecord>(recs, ReportFormat::Jsonl, dir / "r.jsonl");
    CHECK(read_jsonl_report<BenchmarkRecord>(dir / "r.jsonl") == recs);

    std::vector<TimingRecord> t = {{AlgorithmId::Mpm, 16384, 1.5e8, 30}};
    emit_report<TimingRecord>(t, ReportFormat::Jsonl, dir / "t.jsonl");
    CHECK(read_jsonl_report<TimingRecord>(dir / "t.jsonl") == t);

    SensitivityRecord s;
    s.algorithm = AlgorithmId::ClassicAutocorrelator;
    s.buffer_size = 4096;
    s.source = "synth:kind=sine";
    s.frames_total = 2;
    s.frames_pitched = 1;
    s.detection_rate = 0.5;
    s.pitched_midi_values = {47.25};
    std::vector<SensitivityRecord> sv = {s};
    emit_report<SensitivityRecord>(sv, ReportFormat::Jsonl, dir / "s.jsonl");
    CHECK(read_jsonl_report<SensitivityRecord>(dir / "s.jsonl") == sv);
  }

  SECTION("unwritable path") {
    CHECK_THROWS_AS(emit_report<BenchmarkRecord>(recs, ReportFormat::Csv, dir / "no" / "such" / "dir.csv"), IoError);
  }

  CHECK(parse_report_format("csv") == ReportFormat::Csv);
  CHECK(parse_report_format("jsonl") == ReportFormat::Jsonl);
  CHECK_THROWS_AS(parse_report_format("xml"), ConfigError);
}
