/// @file engine.hpp
/// @brief Capture -> detect -> pipeline -> game -> broadcast loop.
///
/// Roles: a capture thread fills a bounded frame queue; the engine thread (the
/// caller of run()) detects, filters, steps the game, logs and publishes. Control
/// messages queue up and are applied by the engine thread between frames.
///
/// Snapshots are taken on the game clock every 1/snapshot_hz seconds and are
/// extrapolated from the last stepped state with its last vertical velocity, at
/// most one frame ahead. Paced and live runs emit them at their wall-clock time;
/// flat-out runs emit them just before the next frame is processed.

#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pitchgate/detectors/algorithm.hpp"
#include "pitchgate/game/levels.hpp"
#include "pitchgate/game/session.hpp"
#include "pitchgate/pipeline/pipeline.hpp"
#include "pitchgate/service/source.hpp"
#include "pitchgate/service/wire.hpp"

namespace pitchgate::service {

inline constexpr std::array<std::size_t, 5> kEngineBufferSizes = {1024, 2048, 4096, 8192, 16384};

/// Obstacles inside [scroll_x - behind, scroll_x + ahead] appear in snapshots.
inline constexpr double kViewBehind = 20.0;
inline constexpr double kViewAhead = 130.0;

struct EngineConfig {
  AlgorithmId algorithm = AlgorithmId::ClassicAutocorrelator;
  std::size_t buffer_size = 4096;
  InputSpec input{InputSpec::Kind::Device, "stdin"};
  /// critical_mel is replaced by the level's critical pitch when the engine starts.
  PipelineConfig pipeline;
  game::LevelConfig level;
  DetectorConfig detector;
  /// WAV and synth inputs: true plays them in real time, false runs flat out.
  bool paced = true;
  double snapshot_hz = 20.0;
  /// Start a game session as soon as the engine runs.
  bool autostart = true;
  std::string patient_alias = "anonymous";
  /// Completed sessions are appended here when set.
  std::optional<std::filesystem::path> store;
  std::size_t frame_queue_capacity = 64;

  /// Throws ConfigError: buffer size outside the supported set, invalid pipeline
  /// or level, snapshot rate <= 0, bad alias, zero queue capacity.
  void validate() const;
};

/// Level may be given as a preset name or an object; missing keys keep defaults.
EngineConfig engine_config_from_json(const nlohmann::json& j, const game::LevelPresets& presets);
nlohmann::json engine_config_to_json(const EngineConfig& cfg);
EngineConfig load_engine_config(const std::filesystem::path& path, const game::LevelPresets& presets);

struct EngineStats {
  std::size_t frames = 0;
  std::size_t dropped_frames = 0;  // capture queue overflow
  std::size_t messages = 0;
  std::vector<std::string> sessions;  // ids closed during the run, in order
  bool device_lost = false;
};

class Engine {
 public:
  using Sink = std::function<void(const WireMessage&)>;
  using Logger = std::function<void(const std::string&)>;

  Engine(EngineConfig cfg, Sink sink, game::LevelPresets presets = game::LevelPresets::builtin());
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Opens the input (ConfigError/IoError/FormatError at startup) and runs until
  /// the input ends, the device is lost or request_shutdown() is called.
  EngineStats run();

  /// Thread-safe.
  void request_shutdown();
  /// Thread-safe; applied at the next frame boundary, answered by a Config echo.
  void post_control(const ControlBody& control);
  /// Thread-safe; broadcasts a rejected Config echo for an unparsable client message.
  void post_rejection(const std::string& reason);
  /// Thread-safe copy of the settings currently in force.
  ConfigBody current_config() const;
  void set_logger(Logger logger);

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

/// Snapshot of @p s extrapolated to game time @p at_s with its current velocity
/// (no collision checks), limited to the view window.
SnapshotBody extrapolate_snapshot(const game::GameState& s, double at_s);

}  // namespace pitchgate::service
