/// @file bench.cpp

#include "pitchgate/bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "pitchgate/detectors/detector.hpp"
#include "pitchgate/error.hpp"
#include "pitchgate/pipeline/pipeline.hpp"
#include "pitchgate/signal/note_scale.hpp"
#include "pitchgate/signal/wav.hpp"

namespace pitchgate::bench {

namespace {

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

/// Pitched MIDI estimate after the optional mel-band filter.
std::optional<double> estimate_midi(const DetectorResult& r, bool mel_filter, double ceiling) {
  if (!r.pitched || !r.frequency_hz) return std::nullopt;
  if (mel_filter && mel_from_freq(*r.frequency_hz) > ceiling) return std::nullopt;
  return midi_from_freq(*r.frequency_hz);
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs job(i) for i in [0, count) on `workers` threads; rethrows the first failure.
template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job job) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i, 0u);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) job(i, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<double> midi_range(int lo, int hi) {
  std::vector<double> out;
  for (int m = lo; m <= hi; ++m) out.push_back(m);
  return out;
}

SweepReport run_sine_sweep(std::span<const AlgorithmId> algorithms,
                           std::span<const std::size_t> buffer_sizes,
                           std::span<const double> midi_notes, const DetectorConfig& cfg,
                           const SweepOptions& options) {
  SweepReport report;
  if (algorithms.empty() || buffer_sizes.empty() || midi_notes.empty()) return report;

  // Synthesize every note once; Nyquist violations become warnings.
  std::vector<std::optional<AudioStream>> tones(midi_notes.size());
  for (std::size_t i = 0; i < midi_notes.size(); ++i) {
    try {
      tones[i] = synth_sine(midi_notes[i], options.duration_s, options.sample_rate, options.amplitude);
    } catch (const NyquistError& e) {
      for (AlgorithmId alg : algorithms) {
        for (std::size_t buffer : buffer_sizes) {
          report.warnings.push_back("skipped " + std::string(to_string(alg)) + " buffer " +
                                    std::to_string(buffer) + " midi " +
                                    std::to_string(midi_notes[i]) + ": " + e.what());
        }
      }
    }
  }

  struct Job {
    AlgorithmId alg;
    std::size_t buffer;
  };
  std::vector<Job> jobs;
  for (AlgorithmId alg : algorithms) {
    for (std::size_t buffer : buffer_sizes) jobs.push_back({alg, buffer});
  }
  std::vector<std::vector<BenchmarkRecord>> per_job(jobs.size());
  const unsigned workers = worker_count(options.threads, jobs.size());
  std::vector<PitchDetector> detectors(workers);

  parallel_for(jobs.size(), workers, [&](std::size_t j, unsigned w) {
    const auto [alg, buffer] = jobs[j];
    const DetectorConfig fitted = cfg.fitted_to(buffer, options.sample_rate);
    for (std::size_t i = 0; i < midi_notes.size(); ++i) {
      if (!tones[i]) continue;
      std::vector<double> estimates;
      for (const auto& frame : frames(*tones[i], buffer, buffer)) {
        const auto r = detectors[w].detect(alg, frame, fitted);
        if (auto m = estimate_midi(r, options.mel_filter, options.mel_ceiling)) estimates.push_back(*m);
      }
      BenchmarkRecord rec;
      rec.algorithm = alg;
      rec.buffer_size = buffer;
      rec.true_midi = midi_notes[i];
      rec.estimated_midi = median(std::move(estimates));
      rec.pitched = rec.estimated_midi.has_value();
      if (rec.pitched) rec.abs_error_midi = std::fabs(*rec.estimated_midi - rec.true_midi);
      per_job[j].push_back(rec);
    }
  });

  for (auto& recs : per_job) {
    report.records.insert(report.records.end(), recs.begin(), recs.end());
  }
  return report;
}

std::vector<TimingRecord> run_timing(std::span<const AlgorithmId> algorithms,
                                     std::span<const std::size_t> buffer_sizes,
                                     const DetectorConfig& cfg, const TimingOptions& options) {
  if (options.iterations == 0) throw PreconditionError("run_timing: iterations must be positive");
  std::vector<TimingRecord> out;
  if (algorithms.empty() || buffer_sizes.empty()) return out;

  const std::size_t smallest = *std::min_element(buffer_sizes.begin(), buffer_sizes.end());
  const DetectorConfig fitted = cfg.fitted_to(smallest, options.sample_rate);
  using Clock = std::chrono::steady_clock;

  for (AlgorithmId alg : algorithms) {
    PitchDetector detector;
    for (std::size_t buffer : buffer_sizes) {
      const auto tone = synth_sine_hz(options.frequency_hz,
                                      static_cast<double>(buffer) / options.sample_rate + 0.001,
                                      options.sample_rate, 0.8);
      const AudioFrame frame = frames(tone, buffer, buffer).front();
      for (std::size_t i = 0; i < options.warmups; ++i) detector.detect(alg, frame, fitted);

      std::size_t measured = 0;
      const auto start = Clock::now();
      auto elapsed = Clock::duration::zero();
      const auto budget = std::chrono::duration<double, std::milli>(options.min_measure_ms);
      while (measured < options.iterations || elapsed < budget) {
        detector.detect(alg, frame, fitted);
        ++measured;
        elapsed = Clock::now() - start;
      }
      TimingRecord rec;
      rec.algorithm = alg;
      rec.buffer_size = buffer;
      rec.frames_measured = measured;
      rec.mean_ns_per_buffer =
          std::chrono::duration<double, std::nano>(elapsed).count() / static_cast<double>(measured);
      out.push_back(rec);
    }
  }
  return out;
}

std::optional<double> growth_ratio(std::span<const TimingRecord> records, AlgorithmId alg) {
  const TimingRecord* lo = nullptr;
  const TimingRecord* hi = nullptr;
  for (const auto& r : records) {
    if (r.algorithm != alg) continue;
    if (lo == nullptr || r.buffer_size < lo->buffer_size) lo = &r;
    if (hi == nullptr || r.buffer_size > hi->buffer_size) hi = &r;
  }
  if (lo == nullptr || lo == hi || lo->mean_ns_per_buffer <= 0.0) return std::nullopt;
  return hi->mean_ns_per_buffer / lo->mean_ns_per_buffer;
}

VoiceSource VoiceSource::parse(const std::string& text) { return VoiceSource{text}; }

AudioStream VoiceSource::load() const {
  if (descriptor.rfind("synth:", 0) == 0) return parse_synth_spec(descriptor.substr(6)).render();
  if (descriptor.rfind("wav:", 0) == 0) return load_wav(descriptor.substr(4));
  return load_wav(descriptor);
}

std::vector<VoiceSource> default_voice_corpus() {
  // Sustained vowels of decreasing quality: mild hoarseness, rough and
  // breathy, heavily breathy with short bursts, and quiet, fragmented phonation.
  return {
      {"synth:kind=dysphonic,midi=45,dur=4,jitter=1.5,shimmer=8,noise=0.04,duty=0.7,seed=11"},
      {"synth:kind=dysphonic,midi=43,dur=4,jitter=4,shimmer=20,noise=0.15,duty=0.5,seed=12"},
      {"synth:kind=dysphonic,midi=47,dur=4,jitter=3,shimmer=15,noise=0.3,duty=0.2,seed=13"},
      {"synth:kind=dysphonic,midi=50,dur=4,jitter=2,shimmer=10,noise=0.05,duty=0.6,level=0.1,seed=14"},
  };
}

VoiceReport run_voice_bench(std::span<const VoiceSource> sources,
                            std::span<const AlgorithmId> algorithms, std::size_t buffer_size,
                            const DetectorConfig& cfg, const VoiceOptions& options) {
  VoiceReport report;
  PitchDetector detector;
  for (const auto& source : sources) {
    AudioStream stream;
    std::optional<std::string> failure;
    try {
      stream = source.load();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    if (failure) {
      ++report.failed_sources;
      for (AlgorithmId alg : algorithms) {
        SensitivityRecord rec;
        rec.algorithm = alg;
        rec.buffer_size = buffer_size;
        rec.source = source.descriptor;
        rec.error = failure;
        report.records.push_back(rec);
      }
      continue;
    }
    const DetectorConfig fitted = cfg.fitted_to(buffer_size, stream.sample_rate());
    const auto windows = frames(stream, buffer_size, buffer_size);
    for (AlgorithmId alg : algorithms) {
      SensitivityRecord rec;
      rec.algorithm = alg;
      rec.buffer_size = buffer_size;
      rec.source = source.descriptor;
      for (const auto& frame : windows) {
        if (frame.is_silent()) {
          ++rec.frames_silent;
          continue;
        }
        ++rec.frames_total;
        const auto r = detector.detect(alg, frame, fitted);
        if (auto m = estimate_midi(r, options.mel_filter, options.mel_ceiling)) {
          ++rec.frames_pitched;
          rec.pitched_midi_values.push_back(*m);
        }
      }
      rec.detection_rate = rec.frames_total > 0
                               ? static_cast<double>(rec.frames_pitched) / static_cast<double>(rec.frames_total)
                               : 0.0;
      report.records.push_back(rec);
    }
  }
  return report;
}

}  // namespace pitchgate::bench
