/// @file wire.hpp
/// @brief Messages exchanged over the `/stream` websocket, one JSON text frame each.
///
/// Envelope: {"type", "seq", "family_seq", "session_id", "payload"}. `seq`
/// increases by one per message the engine publishes; `family_seq` counts
/// within one type. A client only sees gaps where its queue dropped snapshots.
/// Control messages travel client to server and need no sequence fields.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pitchgate/detectors/algorithm.hpp"
#include "pitchgate/game/game.hpp"
#include "pitchgate/pipeline/pipeline.hpp"

namespace pitchgate::service {

enum class MessageType { Sample, Snapshot, Event, Config, Control };
inline constexpr int kMessageTypeCount = 5;

std::string to_string(MessageType t);
MessageType parse_message_type(const std::string& text);

/// Monitor row plus the detector that produced it and the threshold decision.
struct SampleBody {
  PitchSample sample;
  AlgorithmId algorithm = AlgorithmId::ClassicAutocorrelator;
  bool above_critical = false;
  double effective_critical_mel = 0.0;

  friend bool operator==(const SampleBody&, const SampleBody&) = default;
};

/// Game view for the canvas. Obstacles are those within the visible window around the avatar.
struct SnapshotBody {
  double avatar_y = 0.0;
  double avatar_vy = 0.0;
  double scroll_x = 0.0;
  double world_height = 100.0;
  double avatar_radius = 3.0;
  std::vector<game::Obstacle> visible_obstacles;
  int score = 0;
  int collisions = 0;
  double elapsed_s = 0.0;
  double duration_s = 0.0;

  friend bool operator==(const SnapshotBody&, const SnapshotBody&) = default;
};

/// Current settings, broadcast after every control message and on state changes.
struct ConfigBody {
  PipelineConfig pipeline;
  game::LevelConfig level;
  AlgorithmId algorithm = AlgorithmId::ClassicAutocorrelator;
  std::size_t buffer_size = 4096;
  bool running = false;  // a game session is in progress
  bool accepted = true;
  std::optional<std::string> reason;  // why a control was rejected, or a status note
  std::optional<std::string> control;  // op this echo answers

  friend bool operator==(const ConfigBody&, const ConfigBody&) = default;
};

enum class ControlOp { SetCriticalMel, SetDifficultyDivisor, SetAlgorithm, SetLevel, Start, Stop };

std::string to_string(ControlOp op);
ControlOp parse_control_op(const std::string& text);

/// Therapist command. set_critical_mel / set_difficulty_divisor carry `value`;
/// set_algorithm carries `name`; set_level carries a preset `name` or a full `level`.
struct ControlBody {
  ControlOp op = ControlOp::Start;
  std::optional<double> value;
  std::optional<std::string> name;
  std::optional<game::LevelConfig> level;

  friend bool operator==(const ControlBody&, const ControlBody&) = default;
};

using Payload = std::variant<SampleBody, SnapshotBody, game::GameEvent, ConfigBody, ControlBody>;

struct WireMessage {
  std::uint64_t seq = 0;
  std::uint64_t family_seq = 0;
  std::string session_id;
  Payload payload;

  MessageType type() const noexcept { return static_cast<MessageType>(payload.index()); }

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

void to_json(nlohmann::json& j, const SampleBody& b);
void from_json(const nlohmann::json& j, SampleBody& b);
void to_json(nlohmann::json& j, const SnapshotBody& b);
void from_json(const nlohmann::json& j, SnapshotBody& b);
void to_json(nlohmann::json& j, const ConfigBody& b);
void from_json(const nlohmann::json& j, ConfigBody& b);
void to_json(nlohmann::json& j, const ControlBody& b);
void from_json(const nlohmann::json& j, ControlBody& b);
void to_json(nlohmann::json& j, const WireMessage& m);
/// Throws FormatError naming the offending field. Sequence fields default to 0
/// so that bare control messages from clients parse.
void from_json(const nlohmann::json& j, WireMessage& m);

std::string encode(const WireMessage& m);
WireMessage decode(const std::string& text);

}  // namespace pitchgate::service
