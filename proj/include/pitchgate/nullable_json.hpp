/// @file nullable_json.hpp
/// @brief optional<T> <-> JSON null-or-value helpers.

#pragma once

#include <optional>

#include "json.hpp"

namespace pitchgate {

template <typename T>
nlohmann::json nullable(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

/// Reads @p key, which must be present; null becomes nullopt.
template <typename T>
std::optional<T> read_nullable(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace pitchgate
