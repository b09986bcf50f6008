/// @file serialize.hpp
/// @brief JSON form of game types and session logs.

#pragma once

#include "json.hpp"
#include "pitchgate/game/game.hpp"
#include "pitchgate/game/session.hpp"

namespace pitchgate::game {

std::string to_string(ControlMode mode);
ControlMode parse_control_mode(const std::string& text);

void to_json(nlohmann::json& j, const GamePhysics& p);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, GamePhysics& p);
void to_json(nlohmann::json& j, const LevelConfig& c);
/// Missing keys keep their defaults; does not validate.
void from_json(const nlohmann::json& j, LevelConfig& c);
void to_json(nlohmann::json& j, const Obstacle& o);
void from_json(const nlohmann::json& j, Obstacle& o);
void to_json(nlohmann::json& j, const GameEvent& e);
void from_json(const nlohmann::json& j, GameEvent& e);
void to_json(nlohmann::json& j, const GameState& s);
void from_json(const nlohmann::json& j, GameState& s);
void to_json(nlohmann::json& j, const LoggedSample& s);
void from_json(const nlohmann::json& j, LoggedSample& s);
void to_json(nlohmann::json& j, const SessionSummary& s);
void from_json(const nlohmann::json& j, SessionSummary& s);
void to_json(nlohmann::json& j, const SessionLog& l);
void from_json(const nlohmann::json& j, SessionLog& l);
void to_json(nlohmann::json& j, const SessionEntry& e);
void from_json(const nlohmann::json& j, SessionEntry& e);

}  // namespace pitchgate::game
