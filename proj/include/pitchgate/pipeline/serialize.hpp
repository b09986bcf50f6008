/// @file serialize.hpp
/// @brief JSON form of pipeline records. Absent pitch fields serialize as null.

#pragma once

#include "json.hpp"
#include "pitchgate/pipeline/pipeline.hpp"

namespace pitchgate {

void to_json(nlohmann::json& j, const PitchSample& s);
void from_json(const nlohmann::json& j, PitchSample& s);

void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);

void to_json(nlohmann::json& j, const ControlSignal& c);
void from_json(const nlohmann::json& j, ControlSignal& c);

}  // namespace pitchgate
