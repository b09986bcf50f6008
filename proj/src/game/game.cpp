/// @file game.cpp

#include "pitchgate/game/game.hpp"

#include <algorithm>
#include <cmath>

#include "pitchgate/error.hpp"

namespace pitchgate::game {

namespace {

// Obstacle centres occupy the middle 60% of the world height.
constexpr double kBandLow = 0.2;
constexpr double kBandSpan = 0.6;
// Elapsed-time comparisons tolerate accumulated rounding of dt sums.
constexpr double kTimeSlack = 1e-9;

double obstacle_y(std::uint64_t seed, double x, double world_height) {
  const auto key = static_cast<std::uint64_t>(std::llround(x * 1000.0));
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(key));
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return world_height * (kBandLow + kBandSpan * u);
}

}  // namespace

std::string to_string(GameEvent::Kind kind) {
  switch (kind) {
    case GameEvent::Kind::ObstacleCleared: return "ObstacleCleared";
    case GameEvent::Kind::Collision: return "Collision";
    case GameEvent::Kind::LevelComplete: return "LevelComplete";
    case GameEvent::Kind::LevelFailed: return "LevelFailed";
  }
  return "Unknown";
}

GameEvent::Kind parse_event_kind(const std::string& text) {
  for (auto k : {GameEvent::Kind::ObstacleCleared, GameEvent::Kind::Collision,
                 GameEvent::Kind::LevelComplete, GameEvent::Kind::LevelFailed}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown game event kind '" + text + "'");
}

std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void LevelConfig::validate() const {
  const auto& p = physics;
  auto fail = [this](const std::string& what) {
    throw ConfigError("level '" + name + "': " + what);
  };
  if (!(critical_mel > 0.0)) fail("critical_mel must be positive");
  if (!(scroll_speed > 0.0)) fail("scroll_speed must be positive");
  if (!(duration_s > 0.0)) fail("duration_s must be positive");
  if (!(obstacle_radius >= p.min_obstacle_radius)) fail("obstacle_radius below the minimum radius");
  if (!(obstacle_spacing > 2.0 * obstacle_radius)) {
    fail("obstacle_spacing must exceed twice the obstacle radius");
  }
  if (!(p.world_height > 0.0) || !(p.rise_rate > 0.0) || !(p.fall_rate > 0.0)) {
    fail("physics rates and world height must be positive");
  }
  if (!(p.avatar_radius > 0.0)) fail("avatar_radius must be positive");
  if (!(p.start_y >= 0.0 && p.start_y <= p.world_height)) fail("start_y outside the world");
  // hugging the floor or ceiling must always evade
  if (!(p.world_height * kBandLow > obstacle_radius + p.avatar_radius)) {
    fail("obstacles too large to pass along the floor or ceiling");
  }
}

GameState spawn_level(const LevelConfig& cfg) {
  cfg.validate();
  GameState s;
  s.level = cfg;
  s.avatar_y = cfg.physics.start_y;
  const double distance = cfg.duration_s * cfg.scroll_speed;
  const auto count = static_cast<std::size_t>(std::floor(distance / cfg.obstacle_spacing + kTimeSlack));
  s.obstacles.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    Obstacle o;
    o.x = static_cast<double>(k) * cfg.obstacle_spacing;
    o.y = obstacle_y(cfg.rng_seed, o.x, cfg.physics.world_height);
    o.radius = cfg.obstacle_radius;
    s.obstacles.push_back(o);
  }
  return s;
}

double avatar_velocity(const GamePhysics& physics, const ControlSignal& signal, double critical_mel) {
  if (physics.mode == ControlMode::Proportional) {
    if (!signal.control_mel) return -physics.fall_rate;
    return std::clamp(physics.proportional_gain * (*signal.control_mel - critical_mel),
                      -physics.fall_rate, physics.rise_rate);
  }
  return signal.above_critical ? physics.rise_rate : -physics.fall_rate;
}

StepResult step(const GameState& state, const ControlSignal& signal, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("step: dt must be positive");
  StepResult out{state, {}};
  GameState& s = out.state;
  if (s.finished) return out;

  const auto& phys = s.level.physics;
  s.avatar_vy = avatar_velocity(phys, signal, signal.effective_critical_mel);
  s.avatar_y = std::clamp(s.avatar_y + s.avatar_vy * dt, 0.0, phys.world_height);
  s.scroll_x += s.level.scroll_speed * dt;
  s.elapsed_s += dt;

  for (std::size_t k = 0; k < s.obstacles.size(); ++k) {
    Obstacle& o = s.obstacles[k];
    if (o.status != Obstacle::Status::Pending) continue;
    const double reach = o.radius + phys.avatar_radius;
    if (o.x - reach > s.scroll_x) break;  // sorted: nothing further can touch yet
    const double dx = o.x - s.scroll_x;
    const double dy = o.y - s.avatar_y;
    if (dx * dx + dy * dy < reach * reach) {
      o.status = Obstacle::Status::Collided;
      ++s.collisions;
      out.events.push_back({GameEvent::Kind::Collision, s.elapsed_s, "obstacle " + std::to_string(k + 1)});
    } else if (o.x + reach < s.scroll_x) {
      o.status = Obstacle::Status::Cleared;
      ++s.score;
      out.events.push_back({GameEvent::Kind::ObstacleCleared, s.elapsed_s, "obstacle " + std::to_string(k + 1)});
    }
  }

  if (s.elapsed_s >= s.level.duration_s - kTimeSlack) {
    s.finished = true;
    out.events.push_back({GameEvent::Kind::LevelComplete, s.elapsed_s,
                          "score " + std::to_string(s.score) + ", collisions " + std::to_string(s.collisions)});
  }
  return out;
}

}  // namespace pitchgate::game
