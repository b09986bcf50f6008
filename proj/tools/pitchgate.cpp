// pitchgate command line: live engine server, offline pitch tracks, detector benchmarks.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <condition_variable>
#include <pthread.h>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pitchgate/bench/bench.hpp"
#include "pitchgate/bench/report.hpp"
#include "pitchgate/detectors/detector.hpp"
#include "pitchgate/error.hpp"
#include "pitchgate/game/levels.hpp"
#include "pitchgate/pipeline/pipeline.hpp"
#include "pitchgate/service/broadcaster.hpp"
#include "pitchgate/service/budget.hpp"
#include "pitchgate/service/engine.hpp"
#include "pitchgate/service/server.hpp"
#include "pitchgate/signal/wav.hpp"

using namespace pitchgate;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<AlgorithmId> parse_algorithms(const std::string& text) {
  if (text == "all") return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::vector<AlgorithmId> out;
  for (const auto& name : split(text, ',')) out.push_back(parse_algorithm(name));
  if (out.empty()) throw ConfigError("--algorithms is empty");
  return out;
}

std::vector<std::size_t> parse_buffers(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& b : split(text, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(b, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != b.size() || v == 0) throw ConfigError("--buffers: '" + b + "' is not a positive integer");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--buffers is empty");
  return out;
}

/// "36..60" -> integer notes 36 through 60.
std::vector<double> parse_midi_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ConfigError("--midi-range must look like LO..HI");
  int lo = 0;
  int hi = 0;
  try {
    lo = std::stoi(text.substr(0, dots));
    hi = std::stoi(text.substr(dots + 2));
  } catch (const std::exception&) {
    throw ConfigError("--midi-range must look like LO..HI");
  }
  if (lo > hi) throw ConfigError("--midi-range: LO must not exceed HI");
  return bench::midi_range(lo, hi);
}

bool parse_on_off(const std::string& text, const char* flag) {
  if (text == "on") return true;
  if (text == "off") return false;
  throw ConfigError(std::string(flag) + " must be on or off");
}

template <typename Record>
void write_records(const std::vector<Record>& records, const std::string& format, const std::string& out) {
  const auto fmt = bench::parse_report_format(format);
  if (out.empty() || out == "-") {
    std::cout << bench::render_report<Record>(records, fmt);
  } else {
    bench::emit_report<Record>(records, fmt, out);
  }
}

struct BenchArgs {
  std::string algorithms = "all";
  std::string buffers = "1024,2048,4096,8192,16384";
  std::string midi_range = "36..84";
  std::string sources;
  std::string out;
  std::string format = "csv";
  std::string mel_filter = "off";
  unsigned threads = 0;
  std::size_t iterations = 30;
};

void add_common(CLI::App* cmd, BenchArgs& a) {
  cmd->add_option("--algorithms", a.algorithms, "Comma-separated algorithm names, or 'all'")->capture_default_str();
  cmd->add_option("--buffers", a.buffers, "Comma-separated buffer sizes")->capture_default_str();
  cmd->add_option("--out", a.out, "Output file (default: stdout)");
  cmd->add_option("--format", a.format, "csv or jsonl")->capture_default_str();
  cmd->add_option("--mel-filter", a.mel_filter, "Drop estimates above 400 mel: on or off")->capture_default_str();
}

int run_bench_sine(const BenchArgs& a) {
  const auto algs = parse_algorithms(a.algorithms);
  const auto buffers = parse_buffers(a.buffers);
  const auto notes = parse_midi_range(a.midi_range);
  bench::SweepOptions opt;
  opt.mel_filter = parse_on_off(a.mel_filter, "--mel-filter");
  opt.threads = a.threads;
  const auto report = bench::run_sine_sweep(algs, buffers, notes, DetectorConfig{}, opt);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  write_records(report.records, a.format, a.out);
  return 0;
}

int run_bench_timing(const BenchArgs& a) {
  const auto algs = parse_algorithms(a.algorithms);
  const auto buffers = parse_buffers(a.buffers);
  bench::TimingOptions opt;
  opt.iterations = a.iterations;
  const auto records = bench::run_timing(algs, buffers, DetectorConfig{}, opt);
  write_records(records, a.format, a.out);
  return 0;
}

int run_bench_voice(const BenchArgs& a) {
  const auto algs = parse_algorithms(a.algorithms);
  const auto buffers = parse_buffers(a.buffers);
  std::vector<bench::VoiceSource> sources;
  if (a.sources.empty()) {
    sources = bench::default_voice_corpus();
  } else {
    for (const auto& s : split(a.sources, ';')) sources.push_back(bench::VoiceSource::parse(s));
  }
  bench::VoiceOptions opt;
  opt.mel_filter = parse_on_off(a.mel_filter, "--mel-filter");
  std::vector<bench::SensitivityRecord> all;
  std::size_t failed = 0;
  for (std::size_t buffer : buffers) {
    auto report = bench::run_voice_bench(sources, algs, buffer, DetectorConfig{}, opt);
    failed = std::max(failed, report.failed_sources);
    all.insert(all.end(), report.records.begin(), report.records.end());
  }
  for (const auto& r : all) {
    if (r.error && r.algorithm == algs.front()) std::cerr << "error: " << r.source << ": " << *r.error << '\n';
  }
  write_records(all, a.format, a.out);
  return failed > 0 ? 2 : 0;
}

struct AnalyzeArgs {
  std::string in;
  std::string algorithm = "ClassicAutocorrelator";
  std::size_t buffer = 4096;
  std::size_t hop = 0;
  std::string out;
  std::string mel_filter = "off";
};

std::string csv_optional(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream ss;
  ss.precision(17);
  ss << *v;
  return ss.str();
}

int run_analyze(const AnalyzeArgs& a) {
  const AudioStream stream = load_wav(a.in);
  const AlgorithmId alg = parse_algorithm(a.algorithm);
  const std::size_t hop = a.hop == 0 ? a.buffer : a.hop;
  const DetectorConfig cfg = DetectorConfig{}.fitted_to(a.buffer, stream.sample_rate());
  const bool filter = parse_on_off(a.mel_filter, "--mel-filter");
  PitchDetector detector;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!a.out.empty() && a.out != "-") {
    file.open(a.out, std::ios::trunc);
    if (!file) throw IoError("cannot write track: " + a.out);
    out = &file;
  }
  *out << "sample_index,time_s,pitched,frequency_hz,mel,midi_number,note_name,amplitude_rms\n";
  for (const auto& frame : frames(stream, a.buffer, hop)) {
    PitchSample s = to_pitch_sample(detector.detect(alg, frame, cfg), frame);
    if (filter) s = mel_band_filter(s, 400.0);
    *out << s.sample_index << ',' << csv_optional(static_cast<double>(s.sample_index) / stream.sample_rate()) << ','
         << (s.pitched ? "true" : "false") << ',' << csv_optional(s.frequency_hz) << ',' << csv_optional(s.mel) << ','
         << csv_optional(s.midi_number) << ',' << s.note_name.value_or("") << ','
         << csv_optional(s.amplitude_rms) << '\n';
  }
  out->flush();
  if (!*out) throw IoError("write failed: " + a.out);
  return 0;
}

struct ServeArgs {
  std::string config;
  std::string input;
  int port = -1;
  std::string levels;
  std::string static_dir;
  std::string store;
  std::string alias;
  bool flat_out = false;
  bool exit_when_done = false;
  bool skip_budget = false;
};

int run_serve(const ServeArgs& a) {
  // Block termination signals everywhere; one thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const auto presets = a.levels.empty() ? game::LevelPresets::builtin() : game::LevelPresets::load(a.levels);
  service::EngineConfig cfg;
  int port = 8080;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw IoError("cannot read engine config: " + a.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("engine config " + a.config + ": " + e.what());
    }
    cfg = service::engine_config_from_json(j, presets);
    port = j.value("port", port);
  } else {
    cfg.level = presets.levels().front();
  }
  if (const char* env = std::getenv("PITCHGATE_PORT")) port = std::atoi(env);
  if (a.port >= 0) port = a.port;
  if (port < 0 || port > 65535) throw ConfigError("port must be in [0, 65535]");
  if (const char* env = std::getenv("PITCHGATE_STORE")) cfg.store = env;
  if (!a.store.empty()) cfg.store = a.store;
  if (!a.input.empty()) cfg.input = service::InputSpec::parse(a.input);
  if (!a.alias.empty()) cfg.patient_alias = a.alias;
  if (a.flat_out) cfg.paced = false;
  cfg.validate();

  if (!a.skip_budget) {
    std::vector<std::size_t> buffers(service::kEngineBufferSizes.begin(), service::kEngineBufferSizes.end());
    const auto budget = service::measure_frame_budget(kAllAlgorithms, buffers, 2);
    std::cerr << "frame budget (detect + pipeline + game step):\n" << service::format_budget(budget);
  }

  service::Broadcaster broadcaster;
  service::Engine engine(cfg, [&broadcaster](const service::WireMessage& m) { broadcaster.publish(m); }, presets);
  engine.set_logger([](const std::string& line) { std::cerr << line << '\n'; });

  service::ServerConfig scfg;
  scfg.port = static_cast<unsigned short>(port);
  scfg.store = cfg.store;
  if (!a.static_dir.empty()) scfg.static_dir = a.static_dir;
  service::Server server(scfg, broadcaster, engine);
  server.start();
  std::cerr << "listening on port " << server.port() << " (ws /stream), input " << cfg.input.to_string() << '\n';

  std::mutex m;
  std::condition_variable cv;
  bool interrupted = false;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    {
      std::lock_guard lock(m);
      interrupted = true;
    }
    cv.notify_all();
    engine.request_shutdown();
  });
  waiter.detach();

  const auto stats = engine.run();
  std::cerr << "engine finished: " << stats.frames << " frames, " << stats.sessions.size() << " session(s), "
            << stats.dropped_frames << " dropped frames" << (stats.device_lost ? ", device lost" : "") << '\n';
  if (!a.exit_when_done) {
    std::unique_lock lock(m);
    cv.wait(lock, [&] { return interrupted; });
  }
  server.stop();
  return stats.device_lost ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pitchgate: pitch detection for voice rehabilitation games"};
  app.require_subcommand(1);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the live engine with websocket and REST endpoints");
  serve_cmd->add_option("--config", serve.config, "Engine config JSON (e.g. data/engine.json)");
  serve_cmd->add_option("--input", serve.input, "device:NAME, wav:PATH or synth:SPEC (overrides the config)");
  serve_cmd->add_option("--port", serve.port, "Listen port; 0 picks a free one (env PITCHGATE_PORT)");
  serve_cmd->add_option("--levels", serve.levels, "Level presets JSON (default: built-in presets)");
  serve_cmd->add_option("--static-dir", serve.static_dir, "Directory of UI files served over HTTP");
  serve_cmd->add_option("--store", serve.store, "Session store directory (env PITCHGATE_STORE)");
  serve_cmd->add_option("--alias", serve.alias, "Pseudonymous patient alias for stored sessions");
  serve_cmd->add_flag("--flat-out", serve.flat_out, "Process WAV/synth input as fast as possible instead of in real time");
  serve_cmd->add_flag("--exit-when-done", serve.exit_when_done, "Exit once the input ends instead of serving until interrupted");
  serve_cmd->add_flag("--skip-budget", serve.skip_budget, "Skip the startup frame-budget measurement");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Write the pitch track of a WAV file as CSV");
  analyze_cmd->add_option("--in", analyze.in, "Input WAV file")->required();
  analyze_cmd->add_option("--algorithm", analyze.algorithm, "Detector name")->capture_default_str();
  analyze_cmd->add_option("--buffer", analyze.buffer, "Frame length in samples")->capture_default_str();
  analyze_cmd->add_option("--hop", analyze.hop, "Hop in samples (default: buffer)");
  analyze_cmd->add_option("--out", analyze.out, "Output CSV (default: stdout)");
  analyze_cmd->add_option("--mel-filter", analyze.mel_filter, "Drop estimates above 400 mel: on or off")
      ->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Compare the detectors");
  bench_cmd->require_subcommand(1);
  BenchArgs sine;
  auto* sine_cmd = bench_cmd->add_subcommand("sine", "Accuracy on pure tones per MIDI note and buffer size");
  add_common(sine_cmd, sine);
  sine_cmd->add_option("--midi-range", sine.midi_range, "Inclusive MIDI range LO..HI")->capture_default_str();
  sine_cmd->add_option("--threads", sine.threads, "Worker threads (0 = all cores)")->capture_default_str();
  BenchArgs timing;
  auto* timing_cmd = bench_cmd->add_subcommand("timing", "Mean processing time per buffer");
  add_common(timing_cmd, timing);
  timing_cmd->add_option("--iterations", timing.iterations, "Timed iterations per buffer")->capture_default_str();
  BenchArgs voice;
  voice.buffers = "4096";
  auto* voice_cmd = bench_cmd->add_subcommand("voice", "Detection rate on degraded voices");
  add_common(voice_cmd, voice);
  voice_cmd->add_option("--sources", voice.sources,
                        "';'-separated sources: wav:PATH, synth:SPEC or a path (default: built-in corpus)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return run_serve(serve);
    if (*analyze_cmd) return run_analyze(analyze);
    if (*sine_cmd) return run_bench_sine(sine);
    if (*timing_cmd) return run_bench_timing(timing);
    if (*voice_cmd) return run_bench_voice(voice);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
