/// @file wire.cpp

#include "pitchgate/service/wire.hpp"

#include "pitchgate/error.hpp"
#include "pitchgate/game/serialize.hpp"
#include "pitchgate/nullable_json.hpp"
#include "pitchgate/pipeline/serialize.hpp"

namespace pitchgate::service {

namespace {

constexpr const char* kTypeNames[kMessageTypeCount] = {"sample", "snapshot", "event", "config", "control"};

template <typename T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

std::string to_string(MessageType t) { return kTypeNames[static_cast<int>(t)]; }

MessageType parse_message_type(const std::string& text) {
  for (int i = 0; i < kMessageTypeCount; ++i) {
    if (text == kTypeNames[i]) return static_cast<MessageType>(i);
  }
  throw FormatError("type: unknown message type '" + text + "'");
}

std::string to_string(ControlOp op) {
  switch (op) {
    case ControlOp::SetCriticalMel: return "set_critical_mel";
    case ControlOp::SetDifficultyDivisor: return "set_difficulty_divisor";
    case ControlOp::SetAlgorithm: return "set_algorithm";
    case ControlOp::SetLevel: return "set_level";
    case ControlOp::Start: return "start";
    case ControlOp::Stop: return "stop";
  }
  return "start";
}

ControlOp parse_control_op(const std::string& text) {
  for (auto op : {ControlOp::SetCriticalMel, ControlOp::SetDifficultyDivisor, ControlOp::SetAlgorithm,
                  ControlOp::SetLevel, ControlOp::Start, ControlOp::Stop}) {
    if (to_string(op) == text) return op;
  }
  throw FormatError("payload.op: unknown control '" + text + "'");
}

void to_json(nlohmann::json& j, const SampleBody& b) {
  j = b.sample;
  j["algorithm"] = std::string(pitchgate::to_string(b.algorithm));
  j["above_critical"] = b.above_critical;
  j["effective_critical_mel"] = b.effective_critical_mel;
}

void from_json(const nlohmann::json& j, SampleBody& b) {
  j.get_to(b.sample);
  b.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  j.at("above_critical").get_to(b.above_critical);
  j.at("effective_critical_mel").get_to(b.effective_critical_mel);
}

void to_json(nlohmann::json& j, const SnapshotBody& b) {
  j = nlohmann::json{{"avatar_y", b.avatar_y},
                     {"avatar_vy", b.avatar_vy},
                     {"scroll_x", b.scroll_x},
                     {"world_height", b.world_height},
                     {"avatar_radius", b.avatar_radius},
                     {"visible_obstacles", b.visible_obstacles},
                     {"score", b.score},
                     {"collisions", b.collisions},
                     {"elapsed_s", b.elapsed_s},
                     {"duration_s", b.duration_s}};
}

void from_json(const nlohmann::json& j, SnapshotBody& b) {
  j.at("avatar_y").get_to(b.avatar_y);
  j.at("avatar_vy").get_to(b.avatar_vy);
  j.at("scroll_x").get_to(b.scroll_x);
  j.at("world_height").get_to(b.world_height);
  j.at("avatar_radius").get_to(b.avatar_radius);
  j.at("visible_obstacles").get_to(b.visible_obstacles);
  j.at("score").get_to(b.score);
  j.at("collisions").get_to(b.collisions);
  j.at("elapsed_s").get_to(b.elapsed_s);
  j.at("duration_s").get_to(b.duration_s);
}

void to_json(nlohmann::json& j, const ConfigBody& b) {
  j = nlohmann::json{{"pipeline", b.pipeline},
                     {"level", b.level},
                     {"algorithm", std::string(pitchgate::to_string(b.algorithm))},
                     {"buffer_size", b.buffer_size},
                     {"running", b.running},
                     {"accepted", b.accepted},
                     {"reason", nullable(b.reason)},
                     {"control", nullable(b.control)}};
}

void from_json(const nlohmann::json& j, ConfigBody& b) {
  j.at("pipeline").get_to(b.pipeline);
  j.at("level").get_to(b.level);
  b.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  j.at("buffer_size").get_to(b.buffer_size);
  j.at("running").get_to(b.running);
  j.at("accepted").get_to(b.accepted);
  b.reason = read_nullable<std::string>(j, "reason");
  b.control = read_nullable<std::string>(j, "control");
}

void to_json(nlohmann::json& j, const ControlBody& b) {
  j = nlohmann::json{{"op", to_string(b.op)}};
  if (b.value) j["value"] = *b.value;
  if (b.name) j["name"] = *b.name;
  if (b.level) j["level"] = *b.level;
}

void from_json(const nlohmann::json& j, ControlBody& b) {
  b.op = parse_control_op(j.at("op").get<std::string>());
  b.value = optional_field<double>(j, "value");
  b.name = optional_field<std::string>(j, "name");
  b.level = optional_field<game::LevelConfig>(j, "level");
}

void to_json(nlohmann::json& j, const WireMessage& m) {
  j = nlohmann::json{{"type", to_string(m.type())},
                     {"seq", m.seq},
                     {"family_seq", m.family_seq},
                     {"session_id", m.session_id}};
  std::visit([&j](const auto& body) { j["payload"] = body; }, m.payload);
}

void from_json(const nlohmann::json& j, WireMessage& m) {
  if (!j.is_object()) throw FormatError("message: expected a JSON object");
  if (!j.contains("type") || !j.at("type").is_string()) throw FormatError("type: missing or not a string");
  if (!j.contains("payload") || !j.at("payload").is_object()) {
    throw FormatError("payload: missing or not an object");
  }
  const MessageType type = parse_message_type(j.at("type").get<std::string>());
  try {
    m.seq = j.value("seq", std::uint64_t{0});
    m.family_seq = j.value("family_seq", std::uint64_t{0});
    m.session_id = j.value("session_id", std::string{});
    const auto& p = j.at("payload");
    switch (type) {
      case MessageType::Sample: m.payload = p.get<SampleBody>(); break;
      case MessageType::Snapshot: m.payload = p.get<SnapshotBody>(); break;
      case MessageType::Event: m.payload = p.get<game::GameEvent>(); break;
      case MessageType::Config: m.payload = p.get<ConfigBody>(); break;
      case MessageType::Control: m.payload = p.get<ControlBody>(); break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("payload: " + std::string(e.what()));
  } catch (const ConfigError& e) {
    throw FormatError("payload: " + std::string(e.what()));
  }
}

std::string encode(const WireMessage& m) { return nlohmann::json(m).dump(); }

WireMessage decode(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("message: not valid JSON: " + std::string(e.what()));
  }
  return j.get<WireMessage>();
}

}  // namespace pitchgate::service
