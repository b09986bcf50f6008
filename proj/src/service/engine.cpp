/// @file engine.cpp

#include "pitchgate/service/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <thread>

#include "pitchgate/detectors/detector.hpp"
#include "pitchgate/error.hpp"
#include "pitchgate/game/serialize.hpp"
#include "pitchgate/pipeline/serialize.hpp"

namespace pitchgate::service {

using Clock = std::chrono::steady_clock;

namespace {

/// Bounded capture queue. Live capture drops the oldest frame when full; file
/// playback blocks the producer instead, so nothing is lost.
class FrameQueue {
 public:
  FrameQueue(std::size_t capacity, bool drop_oldest) : capacity_(capacity), drop_oldest_(drop_oldest) {}

  void push(AudioFrame frame) {
    std::unique_lock lock(mutex_);
    if (drop_oldest_) {
      if (queue_.size() >= capacity_) {
        queue_.pop_front();
        ++dropped_;
      }
    } else {
      space_.wait(lock, [this] { return queue_.size() < capacity_ || closed_; });
    }
    if (closed_) return;
    queue_.push_back(std::move(frame));
    ready_.notify_one();
  }

  /// nullopt on timeout, or when closed and empty.
  std::optional<AudioFrame> pop_until(Clock::time_point deadline) {
    std::unique_lock lock(mutex_);
    ready_.wait_until(lock, deadline, [this] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    AudioFrame f = std::move(queue_.front());
    queue_.pop_front();
    space_.notify_one();
    return f;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    ready_.notify_all();
    space_.notify_all();
  }

  bool drained() const {
    std::lock_guard lock(mutex_);
    return closed_ && queue_.empty();
  }

  std::size_t dropped() const {
    std::lock_guard lock(mutex_);
    return dropped_;
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::condition_variable space_;
  std::deque<AudioFrame> queue_;
  std::size_t capacity_;
  bool drop_oldest_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

struct StopState {
  std::mutex mutex;
  std::condition_variable cv;
  bool requested = false;

  bool get() {
    std::lock_guard lock(mutex);
    return requested;
  }
};

}  // namespace

void EngineConfig::validate() const {
  if (std::find(kEngineBufferSizes.begin(), kEngineBufferSizes.end(), buffer_size) == kEngineBufferSizes.end()) {
    throw ConfigError("buffer_size " + std::to_string(buffer_size) +
                      " must be one of 1024, 2048, 4096, 8192, 16384");
  }
  pipeline.validate();
  level.validate();
  PipelineConfig effective = pipeline;
  effective.critical_mel = level.critical_mel;
  effective.validate();
  if (!(snapshot_hz > 0.0 && snapshot_hz <= 1000.0)) throw ConfigError("snapshot_hz must be in (0, 1000]");
  if (!game::valid_alias(patient_alias)) {
    throw ConfigError("patient_alias must be 1-64 characters of [A-Za-z0-9_-]");
  }
  if (frame_queue_capacity == 0) throw ConfigError("frame_queue_capacity must be positive");
}

EngineConfig engine_config_from_json(const nlohmann::json& j, const game::LevelPresets& presets) {
  if (!j.is_object()) throw ConfigError("engine config: expected a JSON object");
  EngineConfig c;
  try {
    if (j.contains("algorithm")) c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    c.buffer_size = j.value("buffer_size", c.buffer_size);
    if (j.contains("input")) c.input = InputSpec::parse(j.at("input").get<std::string>());
    if (j.contains("pipeline")) c.pipeline = j.at("pipeline").get<PipelineConfig>();
    if (j.contains("level")) {
      const auto& l = j.at("level");
      c.level = l.is_string() ? presets.get(l.get<std::string>()) : l.get<game::LevelConfig>();
    } else {
      c.level = presets.levels().front();
    }
    c.paced = j.value("paced", c.paced);
    c.snapshot_hz = j.value("snapshot_hz", c.snapshot_hz);
    c.autostart = j.value("autostart", c.autostart);
    c.patient_alias = j.value("patient_alias", c.patient_alias);
    if (j.contains("store") && !j.at("store").is_null()) c.store = j.at("store").get<std::string>();
    c.frame_queue_capacity = j.value("frame_queue_capacity", c.frame_queue_capacity);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("engine config: ") + e.what());
  } catch (const NotFoundError& e) {
    throw ConfigError(std::string("engine config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json engine_config_to_json(const EngineConfig& c) {
  return nlohmann::json{{"algorithm", std::string(to_string(c.algorithm))},
                        {"buffer_size", c.buffer_size},
                        {"input", c.input.to_string()},
                        {"pipeline", c.pipeline},
                        {"level", c.level},
                        {"paced", c.paced},
                        {"snapshot_hz", c.snapshot_hz},
                        {"autostart", c.autostart},
                        {"patient_alias", c.patient_alias},
                        {"store", c.store ? nlohmann::json(c.store->string()) : nlohmann::json(nullptr)},
                        {"frame_queue_capacity", c.frame_queue_capacity}};
}

EngineConfig load_engine_config(const std::filesystem::path& path, const game::LevelPresets& presets) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read engine config: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("engine config " + path.string() + ": " + e.what());
  }
  return engine_config_from_json(j, presets);
}

SnapshotBody extrapolate_snapshot(const game::GameState& s, double at_s) {
  const auto& phys = s.level.physics;
  const double dt = std::max(0.0, at_s - s.elapsed_s);
  SnapshotBody b;
  b.avatar_y = std::clamp(s.avatar_y + s.avatar_vy * dt, 0.0, phys.world_height);
  b.avatar_vy = s.avatar_vy;
  b.scroll_x = s.scroll_x + s.level.scroll_speed * dt;
  b.world_height = phys.world_height;
  b.avatar_radius = phys.avatar_radius;
  for (const auto& o : s.obstacles) {
    if (o.x >= b.scroll_x - kViewBehind && o.x <= b.scroll_x + kViewAhead) b.visible_obstacles.push_back(o);
  }
  b.score = s.score;
  b.collisions = s.collisions;
  b.elapsed_s = std::max(at_s, s.elapsed_s);
  b.duration_s = s.level.duration_s;
  return b;
}

class Engine::Impl {
 public:
  Impl(EngineConfig cfg, Sink sink, game::LevelPresets presets)
      : cfg_(std::move(cfg)), sink_(std::move(sink)), presets_(std::move(presets)) {
    cfg_.validate();
    PipelineConfig p = cfg_.pipeline;
    p.critical_mel = cfg_.level.critical_mel;
    pipeline_ = PitchPipeline(p);
    level_ = cfg_.level;
    algorithm_ = cfg_.algorithm;
    pending_id_ = game::new_session_id();
    session_id_ = pending_id_;
    refresh_shared(config_body(true, std::nullopt, std::nullopt));
  }

  EngineStats run();

  void request_shutdown() {
    std::shared_ptr<FrameQueue> q;
    {
      std::lock_guard lock(stop_->mutex);
      stop_->requested = true;
      q = queue_;
    }
    stop_->cv.notify_all();
    if (q) q->close();
  }

  void post(std::optional<ControlBody> control, std::string rejection) {
    std::lock_guard lock(pending_mutex_);
    pending_.push_back({std::move(control), std::move(rejection)});
  }

  ConfigBody shared_config() const {
    std::lock_guard lock(shared_mutex_);
    return shared_;
  }

  void set_logger(Logger logger) { logger_ = std::move(logger); }

 private:
  struct PendingControl {
    std::optional<ControlBody> control;
    std::string rejection;
  };

  bool stopping() { return stop_->get(); }

  void log(const std::string& line) {
    if (logger_) logger_(line);
  }

  void publish(Payload payload) {
    WireMessage m;
    m.seq = ++seq_;
    m.family_seq = ++family_seq_[payload.index()];
    m.session_id = session_id_;
    m.payload = std::move(payload);
    ++stats_.messages;
    sink_(m);
  }

  ConfigBody config_body(bool accepted, std::optional<std::string> reason, std::optional<std::string> control) const {
    ConfigBody b;
    b.pipeline = pipeline_.config();
    b.level = level_;
    b.algorithm = algorithm_;
    b.buffer_size = cfg_.buffer_size;
    b.running = recorder_ != nullptr;
    b.accepted = accepted;
    b.reason = std::move(reason);
    b.control = std::move(control);
    return b;
  }

  void refresh_shared(const ConfigBody& b) {
    std::lock_guard lock(shared_mutex_);
    shared_ = b;
    shared_.reason.reset();
    shared_.control.reset();
    shared_.accepted = true;
  }

  void echo(bool accepted, std::optional<std::string> reason, std::optional<std::string> control) {
    ConfigBody b = config_body(accepted, std::move(reason), std::move(control));
    refresh_shared(b);
    publish(b);
  }

  void start_session() {
    if (recorder_) return;
    std::string id = pending_id_.empty() ? game::new_session_id() : std::exchange(pending_id_, {});
    game::SessionMeta meta{id, cfg_.patient_alias, game::utc_timestamp_now(), std::string(to_string(algorithm_))};
    recorder_ = std::make_unique<game::SessionRecorder>(level_, std::move(meta));
    session_id_ = id;
    tick_index_ = 1;
    session_wall_start_ = origin_ + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(stream_time_s_));
    echo(true, "session " + id + " started", std::nullopt);
  }

  void close_session(const std::string& reason) {
    if (!recorder_) return;
    for (const auto& e : recorder_->fail(reason)) publish(e);
    const game::SessionLog log = recorder_->finish();
    recorder_.reset();
    stats_.sessions.push_back(log.session_id);
    if (cfg_.store) {
      try {
        game::persist_session(log, *cfg_.store);
      } catch (const std::exception& e) {
        log_line("failed to persist session " + log.session_id + ": " + e.what());
      }
    }
    echo(true, "session " + log.session_id + " ended", std::nullopt);
  }

  void log_line(const std::string& s) { log(s); }

  double next_tick_time() const { return static_cast<double>(tick_index_) / cfg_.snapshot_hz; }

  /// Emits every due snapshot tick, never more than one frame past the last step.
  void emit_ticks(bool by_wall) {
    if (!recorder_) return;
    const auto& s = recorder_->state();
    if (s.finished) return;
    double limit = s.elapsed_s + frame_s_;
    if (by_wall) {
      const double wall = std::chrono::duration<double>(Clock::now() - session_wall_start_).count();
      limit = std::min(limit, wall);
    }
    while (next_tick_time() <= limit) {
      publish(extrapolate_snapshot(s, next_tick_time()));
      ++tick_index_;
    }
  }

  void apply_pending() {
    std::deque<PendingControl> batch;
    {
      std::lock_guard lock(pending_mutex_);
      batch.swap(pending_);
    }
    for (auto& p : batch) {
      if (p.control) {
        apply(*p.control);
      } else {
        echo(false, p.rejection, std::nullopt);
      }
    }
  }

  void apply(const ControlBody& c) {
    const std::string op = to_string(c.op);
    auto reject = [&](const std::string& why) { echo(false, why, op); };
    try {
      switch (c.op) {
        case ControlOp::SetCriticalMel: {
          if (!c.value) return reject("set_critical_mel requires a numeric value");
          PipelineConfig p = pipeline_.config();
          p.critical_mel = *c.value;
          game::LevelConfig l = level_;
          l.critical_mel = *c.value;
          l.validate();
          pipeline_.reconfigure(p);
          level_ = l;
          break;
        }
        case ControlOp::SetDifficultyDivisor: {
          if (!c.value) return reject("set_difficulty_divisor requires a numeric value");
          PipelineConfig p = pipeline_.config();
          p.difficulty_divisor = *c.value;
          pipeline_.reconfigure(p);
          break;
        }
        case ControlOp::SetAlgorithm: {
          if (!c.name) return reject("set_algorithm requires a name");
          algorithm_ = parse_algorithm(*c.name);
          break;
        }
        case ControlOp::SetLevel: {
          game::LevelConfig l;
          if (c.level) {
            l = *c.level;
          } else if (c.name) {
            l = presets_.get(*c.name);
          } else {
            return reject("set_level requires a preset name or a level object");
          }
          l.validate();
          PipelineConfig p = pipeline_.config();
          p.critical_mel = l.critical_mel;
          p.validate();
          const bool restart = recorder_ != nullptr;
          if (restart) close_session("level changed");
          pipeline_.reconfigure(p);
          level_ = l;
          if (restart) start_session();
          break;
        }
        case ControlOp::Start:
          if (recorder_) return reject("a session is already running");
          start_session();
          break;
        case ControlOp::Stop:
          if (!recorder_) return reject("no session is running");
          close_session("stopped by the therapist");
          break;
      }
    } catch (const ConfigError& e) {
      return reject(e.what());
    } catch (const NotFoundError& e) {
      return reject(e.what());
    }
    echo(true, std::nullopt, op);
  }

  void process(const AudioFrame& frame) {
    const auto r = detector_.detect(algorithm_, frame, detector_cfg_);
    const auto out = pipeline_.process(r, frame);
    publish(SampleBody{out.sample, algorithm_, out.control.above_critical, out.control.effective_critical_mel});
    if (recorder_) {
      for (const auto& e : recorder_->advance(out.control, frame.duration_ms() / 1000.0)) publish(e);
      if (recorder_->finished()) close_session("");
    }
    ++stats_.frames;
    stream_time_s_ += frame_s_;
  }

  EngineConfig cfg_;
  Sink sink_;
  game::LevelPresets presets_;
  Logger logger_;

  PitchPipeline pipeline_;
  game::LevelConfig level_;
  AlgorithmId algorithm_;
  PitchDetector detector_;
  DetectorConfig detector_cfg_;
  std::unique_ptr<game::SessionRecorder> recorder_;
  std::string pending_id_;
  std::string session_id_;

  std::uint64_t seq_ = 0;
  std::array<std::uint64_t, kMessageTypeCount> family_seq_{};
  EngineStats stats_;

  double frame_s_ = 0.0;
  double stream_time_s_ = 0.0;
  Clock::time_point origin_{};
  Clock::time_point session_wall_start_{};
  std::uint64_t tick_index_ = 1;

  // Shared with the capture thread, which may outlive the engine on a live device.
  std::shared_ptr<StopState> stop_ = std::make_shared<StopState>();
  std::shared_ptr<FrameQueue> queue_;  // guarded by stop_->mutex

  std::mutex pending_mutex_;
  std::deque<PendingControl> pending_;

  mutable std::mutex shared_mutex_;
  ConfigBody shared_;
};

EngineStats Engine::Impl::run() {
  std::shared_ptr<SampleSource> source = open_source(cfg_.input);
  const int rate = source->sample_rate();
  detector_cfg_ = cfg_.detector.fitted_to(cfg_.buffer_size, rate);
  detector_cfg_.validate(rate);
  frame_s_ = static_cast<double>(cfg_.buffer_size) / rate;
  const bool live = source->is_live();
  const bool by_wall = live || cfg_.paced;

  auto queue = std::make_shared<FrameQueue>(cfg_.frame_queue_capacity, live);
  {
    std::lock_guard lock(stop_->mutex);
    queue_ = queue;
    if (stop_->requested) queue->close();
  }
  origin_ = Clock::now();
  stream_time_s_ = 0.0;

  auto device_lost = std::make_shared<std::atomic<bool>>(false);
  const std::size_t buffer = cfg_.buffer_size;
  const bool pace = cfg_.paced && !live;
  const auto origin = origin_;
  const double frame_s = frame_s_;
  std::thread producer([stop = stop_, source, queue, device_lost, buffer, rate, pace, origin, frame_s] {
    FrameAssembler assembler(rate, buffer, buffer);
    std::vector<float> chunk;
    std::uint64_t emitted = 0;
    while (!stop->get()) {
      chunk.clear();
      const ReadStatus st = source->read(chunk, buffer);
      if (st == ReadStatus::DeviceLost) device_lost->store(true);
      if (st != ReadStatus::Ok) break;
      for (auto& x : chunk) x = std::clamp(x, -1.0f, 1.0f);
      assembler.push(chunk);
      while (auto f = assembler.pop()) {
        if (pace) {
          const auto due = origin + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(frame_s * static_cast<double>(emitted + 1)));
          std::unique_lock lock(stop->mutex);
          if (stop->cv.wait_until(lock, due, [&stop] { return stop->requested; })) break;
        }
        queue->push(std::move(*f));
        ++emitted;
      }
    }
    queue->close();
  });

  echo(true, "engine started", std::nullopt);
  if (cfg_.autostart) start_session();

  while (true) {
    auto deadline = Clock::now() + std::chrono::milliseconds(100);
    if (by_wall && recorder_ && next_tick_time() <= recorder_->state().elapsed_s + frame_s_) {
      deadline = std::min(deadline, session_wall_start_ + std::chrono::duration_cast<Clock::duration>(
                                                              std::chrono::duration<double>(next_tick_time())));
    }
    auto frame = queue->pop_until(deadline);
    if (stopping()) break;
    emit_ticks(by_wall);
    if (frame) {
      apply_pending();
      process(*frame);
    } else if (queue->drained()) {
      break;
    }
  }

  const bool shutdown = stopping();
  queue->close();
  if (live) {
    producer.detach();  // a blocking device read cannot be interrupted
  } else {
    producer.join();
  }
  stats_.dropped_frames = queue->dropped();
  stats_.device_lost = device_lost->load();

  apply_pending();
  std::string why;
  if (stats_.device_lost) {
    close_session("audio device lost");
    why = "engine stopped: audio device lost";
  } else if (shutdown) {
    close_session("engine shut down");
    why = "engine stopped: shutdown requested";
  } else {
    close_session("input ended before the level duration");
    why = "engine stopped: input ended";
  }
  echo(true, why, std::nullopt);
  return stats_;
}

Engine::Engine(EngineConfig cfg, Sink sink, game::LevelPresets presets)
    : impl_(std::make_unique<Impl>(std::move(cfg), std::move(sink), std::move(presets))) {}

Engine::~Engine() = default;

EngineStats Engine::run() { return impl_->run(); }
void Engine::request_shutdown() { impl_->request_shutdown(); }
void Engine::post_control(const ControlBody& control) { impl_->post(control, {}); }
void Engine::post_rejection(const std::string& reason) { impl_->post(std::nullopt, reason); }
ConfigBody Engine::current_config() const { return impl_->shared_config(); }
void Engine::set_logger(Logger logger) { impl_->set_logger(std::move(logger)); }

}  // namespace pitchgate::service
