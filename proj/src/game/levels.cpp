/// @file levels.cpp

#include "pitchgate/game/levels.hpp"

#include <fstream>
#include <set>

#include "pitchgate/error.hpp"
#include "pitchgate/game/serialize.hpp"

namespace pitchgate::game {

namespace {

LevelConfig preset(const char* name, double critical, double spacing, double radius, double speed,
                   double duration, std::uint64_t seed) {
  LevelConfig c;
  c.name = name;
  c.critical_mel = critical;
  c.obstacle_spacing = spacing;
  c.obstacle_radius = radius;
  c.scroll_speed = speed;
  c.duration_s = duration;
  c.rng_seed = seed;
  return c;
}

}  // namespace

LevelPresets LevelPresets::builtin() {
  // Difficulty rises through the critical pitch, obstacle size and density.
  LevelPresets p;
  p.levels_ = {
      preset("easiest", kEasiestCriticalMel, 40.0, 5.0, 20.0, 20.0, 1),
      preset("easy", 100.0, 36.0, 6.0, 20.0, 30.0, 2),
      preset("medium", 200.0, 32.0, 7.0, 20.0, 40.0, 3),
      preset("hard", 300.0, 28.0, 8.0, 22.0, 45.0, 4),
      preset("senior", 400.0, 25.0, 9.0, 24.0, 60.0, 5),
  };
  return p;
}

LevelPresets LevelPresets::parse(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("levels") || !j.at("levels").is_array()) {
    throw ConfigError("level presets: expected an object with a \"levels\" array");
  }
  LevelPresets p;
  std::set<std::string> seen;
  for (const auto& item : j.at("levels")) {
    LevelConfig c;
    try {
      c = item.get<LevelConfig>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("level presets: ") + e.what());
    }
    c.validate();
    if (!seen.insert(c.name).second) throw ConfigError("level presets: duplicate level '" + c.name + "'");
    if (c.name == "easiest" && c.critical_mel != kEasiestCriticalMel) {
      throw ConfigError("level presets: the easiest level must use critical_mel 50");
    }
    p.levels_.push_back(c);
  }
  if (p.levels_.empty()) throw ConfigError("level presets: no levels defined");
  return p;
}

LevelPresets LevelPresets::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read level presets: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("level presets " + path.string() + ": " + e.what());
  }
  return parse(j);
}

const LevelConfig& LevelPresets::get(const std::string& name) const {
  for (const auto& l : levels_) {
    if (l.name == name) return l;
  }
  std::string known;
  for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
  throw NotFoundError("unknown level '" + name + "' (known: " + known + ")");
}

std::vector<std::string> LevelPresets::names() const {
  std::vector<std::string> out;
  for (const auto& l : levels_) out.push_back(l.name);
  return out;
}

}  // namespace pitchgate::game
