/// @file serialize.cpp

#include "pitchgate/game/serialize.hpp"

#include "pitchgate/error.hpp"
#include "pitchgate/nullable_json.hpp"
#include "pitchgate/pipeline/serialize.hpp"

namespace pitchgate::game {

namespace {

std::string status_name(Obstacle::Status s) {
  switch (s) {
    case Obstacle::Status::Pending: return "pending";
    case Obstacle::Status::Cleared: return "cleared";
    case Obstacle::Status::Collided: return "collided";
  }
  return "pending";
}

Obstacle::Status parse_status(const std::string& text) {
  if (text == "pending") return Obstacle::Status::Pending;
  if (text == "cleared") return Obstacle::Status::Cleared;
  if (text == "collided") return Obstacle::Status::Collided;
  throw ConfigError("unknown obstacle status '" + text + "'");
}

}  // namespace

std::string to_string(ControlMode mode) {
  return mode == ControlMode::Proportional ? "proportional" : "binary";
}

ControlMode parse_control_mode(const std::string& text) {
  if (text == "binary") return ControlMode::Binary;
  if (text == "proportional") return ControlMode::Proportional;
  throw ConfigError("unknown control mode '" + text + "' (expected binary or proportional)");
}

void to_json(nlohmann::json& j, const GamePhysics& p) {
  j = nlohmann::json{{"world_height", p.world_height},
                     {"rise_rate", p.rise_rate},
                     {"fall_rate", p.fall_rate},
                     {"avatar_radius", p.avatar_radius},
                     {"start_y", p.start_y},
                     {"min_obstacle_radius", p.min_obstacle_radius},
                     {"mode", to_string(p.mode)},
                     {"proportional_gain", p.proportional_gain}};
}

void from_json(const nlohmann::json& j, GamePhysics& p) {
  const GamePhysics d;
  p.world_height = j.value("world_height", d.world_height);
  p.rise_rate = j.value("rise_rate", d.rise_rate);
  p.fall_rate = j.value("fall_rate", d.fall_rate);
  p.avatar_radius = j.value("avatar_radius", d.avatar_radius);
  p.start_y = j.value("start_y", d.start_y);
  p.min_obstacle_radius = j.value("min_obstacle_radius", d.min_obstacle_radius);
  p.mode = parse_control_mode(j.value("mode", to_string(d.mode)));
  p.proportional_gain = j.value("proportional_gain", d.proportional_gain);
}

void to_json(nlohmann::json& j, const LevelConfig& c) {
  j = nlohmann::json{{"name", c.name},
                     {"critical_mel", c.critical_mel},
                     {"obstacle_spacing", c.obstacle_spacing},
                     {"obstacle_radius", c.obstacle_radius},
                     {"scroll_speed", c.scroll_speed},
                     {"duration_s", c.duration_s},
                     {"rng_seed", c.rng_seed},
                     {"physics", c.physics}};
}

void from_json(const nlohmann::json& j, LevelConfig& c) {
  const LevelConfig d;
  c.name = j.value("name", d.name);
  c.critical_mel = j.value("critical_mel", d.critical_mel);
  c.obstacle_spacing = j.value("obstacle_spacing", d.obstacle_spacing);
  c.obstacle_radius = j.value("obstacle_radius", d.obstacle_radius);
  c.scroll_speed = j.value("scroll_speed", d.scroll_speed);
  c.duration_s = j.value("duration_s", d.duration_s);
  c.rng_seed = j.value("rng_seed", d.rng_seed);
  c.physics = j.contains("physics") ? j.at("physics").get<GamePhysics>() : d.physics;
}

void to_json(nlohmann::json& j, const Obstacle& o) {
  j = nlohmann::json{{"x", o.x}, {"y", o.y}, {"radius", o.radius}, {"status", status_name(o.status)}};
}

void from_json(const nlohmann::json& j, Obstacle& o) {
  j.at("x").get_to(o.x);
  j.at("y").get_to(o.y);
  j.at("radius").get_to(o.radius);
  o.status = parse_status(j.at("status").get<std::string>());
}

void to_json(nlohmann::json& j, const GameEvent& e) {
  j = nlohmann::json{{"kind", to_string(e.kind)}, {"at_s", e.at_s}, {"context", e.context}};
}

void from_json(const nlohmann::json& j, GameEvent& e) {
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  j.at("at_s").get_to(e.at_s);
  j.at("context").get_to(e.context);
}

void to_json(nlohmann::json& j, const GameState& s) {
  j = nlohmann::json{{"avatar_y", s.avatar_y},   {"avatar_vy", s.avatar_vy},
                     {"scroll_x", s.scroll_x},   {"obstacles", s.obstacles},
                     {"score", s.score},         {"collisions", s.collisions},
                     {"elapsed_s", s.elapsed_s}, {"finished", s.finished},
                     {"level", s.level}};
}

void from_json(const nlohmann::json& j, GameState& s) {
  j.at("avatar_y").get_to(s.avatar_y);
  j.at("avatar_vy").get_to(s.avatar_vy);
  j.at("scroll_x").get_to(s.scroll_x);
  j.at("obstacles").get_to(s.obstacles);
  j.at("score").get_to(s.score);
  j.at("collisions").get_to(s.collisions);
  j.at("elapsed_s").get_to(s.elapsed_s);
  j.at("finished").get_to(s.finished);
  j.at("level").get_to(s.level);
}

// A logged sample is the PitchSample object plus the threshold decision.
void to_json(nlohmann::json& j, const LoggedSample& s) {
  j = s.sample;
  j["above_critical"] = s.above_critical;
  j["effective_critical_mel"] = s.effective_critical_mel;
}

void from_json(const nlohmann::json& j, LoggedSample& s) {
  j.get_to(s.sample);
  j.at("above_critical").get_to(s.above_critical);
  j.at("effective_critical_mel").get_to(s.effective_critical_mel);
}

void to_json(nlohmann::json& j, const SessionSummary& s) {
  j = nlohmann::json{{"frames", s.frames},
                     {"pitched_frames", s.pitched_frames},
                     {"above_critical_frames", s.above_critical_frames},
                     {"max_mel", nullable(s.max_mel)},
                     {"score", s.score},
                     {"collisions", s.collisions}};
}

void from_json(const nlohmann::json& j, SessionSummary& s) {
  j.at("frames").get_to(s.frames);
  j.at("pitched_frames").get_to(s.pitched_frames);
  j.at("above_critical_frames").get_to(s.above_critical_frames);
  s.max_mel = read_nullable<double>(j, "max_mel");
  j.at("score").get_to(s.score);
  j.at("collisions").get_to(s.collisions);
}

void to_json(nlohmann::json& j, const SessionLog& l) {
  j = nlohmann::json{{"session_id", l.session_id},
                     {"patient_alias", l.patient_alias},
                     {"started_at", l.started_at},
                     {"algorithm", l.algorithm},
                     {"level", l.level},
                     {"pitch_samples", l.pitch_samples},
                     {"events", l.events},
                     {"summary", l.summary}};
}

void from_json(const nlohmann::json& j, SessionLog& l) {
  j.at("session_id").get_to(l.session_id);
  j.at("patient_alias").get_to(l.patient_alias);
  j.at("started_at").get_to(l.started_at);
  l.algorithm = j.value("algorithm", std::string{});
  j.at("level").get_to(l.level);
  j.at("pitch_samples").get_to(l.pitch_samples);
  j.at("events").get_to(l.events);
  j.at("summary").get_to(l.summary);
}

void to_json(nlohmann::json& j, const SessionEntry& e) {
  j = nlohmann::json{{"session_id", e.session_id},
                     {"patient_alias", e.patient_alias},
                     {"started_at", e.started_at},
                     {"level", e.level_name},
                     {"summary", e.summary}};
}

void from_json(const nlohmann::json& j, SessionEntry& e) {
  j.at("session_id").get_to(e.session_id);
  j.at("patient_alias").get_to(e.patient_alias);
  j.at("started_at").get_to(e.started_at);
  j.at("level").get_to(e.level_name);
  j.at("summary").get_to(e.summary);
}

}  // namespace pitchgate::game
