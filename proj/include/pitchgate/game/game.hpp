/// @file game.hpp
/// @brief Pitch-controlled avoidance game: the avatar rises while the voice is
/// above the critical pitch and falls otherwise, past a field of obstacles.
///
/// World coordinates: x grows in the scroll direction and the avatar sits at
/// x = scroll_x; y runs from 0 (floor) to world_height (ceiling). Obstacle k
/// (k = 1..N, N = floor(duration * speed / spacing)) is centred at
/// x = k * spacing, with y drawn uniformly from the middle 60% of the world
/// height by SplitMix64 keyed on (rng_seed, x). Keying on position means a
/// level whose spacing divides another's contains all of that level's obstacles.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pitchgate/pipeline/pipeline.hpp"

namespace pitchgate::game {

enum class ControlMode { Binary, Proportional };

struct GamePhysics {
  double world_height = 100.0;
  double rise_rate = 40.0;  // units/s while above critical
  double fall_rate = 30.0;  // units/s otherwise
  double avatar_radius = 3.0;
  double start_y = 50.0;
  double min_obstacle_radius = 1.0;
  ControlMode mode = ControlMode::Binary;
  /// Proportional mode: vertical speed per mel above critical, clamped to [-fall, rise].
  double proportional_gain = 1.0;

  friend bool operator==(const GamePhysics&, const GamePhysics&) = default;
};

struct LevelConfig {
  std::string name = "custom";
  double critical_mel = 50.0;
  double obstacle_spacing = 40.0;
  double obstacle_radius = 5.0;
  double scroll_speed = 20.0;
  double duration_s = 20.0;
  std::uint64_t rng_seed = 0;
  GamePhysics physics;

  /// Throws ConfigError: spacing must exceed 2 * radius, radius >= min radius,
  /// positive speed/duration/critical, and obstacles must leave room to pass.
  void validate() const;

  friend bool operator==(const LevelConfig&, const LevelConfig&) = default;
};

struct Obstacle {
  enum class Status { Pending, Cleared, Collided };
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
  Status status = Status::Pending;

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

struct GameEvent {
  enum class Kind { ObstacleCleared, Collision, LevelComplete, LevelFailed };
  Kind kind = Kind::ObstacleCleared;
  double at_s = 0.0;
  std::string context;

  friend bool operator==(const GameEvent&, const GameEvent&) = default;
};

std::string to_string(GameEvent::Kind kind);
GameEvent::Kind parse_event_kind(const std::string& text);

struct GameState {
  double avatar_y = 0.0;
  double avatar_vy = 0.0;
  double scroll_x = 0.0;
  std::vector<Obstacle> obstacles;  // sorted by x
  int score = 0;
  int collisions = 0;
  double elapsed_s = 0.0;
  bool finished = false;
  LevelConfig level;

  friend bool operator==(const GameState&, const GameState&) = default;
};

/// SplitMix64 output for @p state (one step of the generator).
std::uint64_t splitmix64(std::uint64_t state);

GameState spawn_level(const LevelConfig& cfg);

struct StepResult {
  GameState state;
  std::vector<GameEvent> events;
};

/// Advances the game by @p dt seconds under @p signal. A finished game is returned unchanged.
/// Throws PreconditionError for dt <= 0.
StepResult step(const GameState& state, const ControlSignal& signal, double dt);

/// Vertical speed the physics assigns to a control signal.
double avatar_velocity(const GamePhysics& physics, const ControlSignal& signal, double critical_mel);

}  // namespace pitchgate::game
