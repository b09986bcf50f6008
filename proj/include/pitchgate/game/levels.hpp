/// @file levels.hpp
/// @brief Named level presets, easiest to senior.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pitchgate/game/game.hpp"

namespace pitchgate::game {

/// The easiest level always uses the extreme-low critical pitch.
inline constexpr double kEasiestCriticalMel = 50.0;

class LevelPresets {
 public:
  /// Compiled-in presets; identical to data/levels.json.
  static LevelPresets builtin();
  /// Reads {"levels": [LevelConfig, ...]}. Every level is validated, names must
  /// be unique and a level named "easiest" must use critical 50 mel.
  static LevelPresets parse(const nlohmann::json& j);
  static LevelPresets load(const std::filesystem::path& path);

  /// Throws NotFoundError listing the known names.
  const LevelConfig& get(const std::string& name) const;
  std::vector<std::string> names() const;
  const std::vector<LevelConfig>& levels() const noexcept { return levels_; }

 private:
  std::vector<LevelConfig> levels_;
};

}  // namespace pitchgate::game
