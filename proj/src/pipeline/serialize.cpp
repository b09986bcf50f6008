/// @file serialize.cpp

#include "pitchgate/pipeline/serialize.hpp"

#include "pitchgate/nullable_json.hpp"

namespace pitchgate {

void to_json(nlohmann::json& j, const PitchSample& s) {
  j = nlohmann::json{{"frequency_hz", nullable(s.frequency_hz)},
                     {"mel", nullable(s.mel)},
                     {"note_name", nullable(s.note_name)},
                     {"midi_number", nullable(s.midi_number)},
                     {"amplitude_rms", s.amplitude_rms},
                     {"sample_index", s.sample_index},
                     {"duration_ms", s.duration_ms},
                     {"pitched", s.pitched}};
}

void from_json(const nlohmann::json& j, PitchSample& s) {
  s.frequency_hz = read_nullable<double>(j, "frequency_hz");
  s.mel = read_nullable<double>(j, "mel");
  s.note_name = read_nullable<std::string>(j, "note_name");
  s.midi_number = read_nullable<double>(j, "midi_number");
  j.at("amplitude_rms").get_to(s.amplitude_rms);
  j.at("sample_index").get_to(s.sample_index);
  j.at("duration_ms").get_to(s.duration_ms);
  j.at("pitched").get_to(s.pitched);
}

void to_json(nlohmann::json& j, const PipelineConfig& c) {
  j = nlohmann::json{{"mel_ceiling", c.mel_ceiling},
                     {"critical_mel", c.critical_mel},
                     {"difficulty_divisor", c.difficulty_divisor},
                     {"smoothing_window", c.smoothing_window},
                     {"mel_filter", c.mel_filter},
                     {"effective_critical_mel", effective_critical(c)}};
}

void from_json(const nlohmann::json& j, PipelineConfig& c) {
  PipelineConfig d;
  c.mel_ceiling = j.value("mel_ceiling", d.mel_ceiling);
  c.critical_mel = j.value("critical_mel", d.critical_mel);
  c.difficulty_divisor = j.value("difficulty_divisor", d.difficulty_divisor);
  c.smoothing_window = j.value("smoothing_window", d.smoothing_window);
  c.mel_filter = j.value("mel_filter", d.mel_filter);
}

void to_json(nlohmann::json& j, const ControlSignal& c) {
  j = nlohmann::json{{"above_critical", c.above_critical},
                     {"effective_critical_mel", c.effective_critical_mel},
                     {"control_mel", nullable(c.control_mel)},
                     {"source", c.source}};
}

void from_json(const nlohmann::json& j, ControlSignal& c) {
  j.at("above_critical").get_to(c.above_critical);
  j.at("effective_critical_mel").get_to(c.effective_critical_mel);
  c.control_mel = read_nullable<double>(j, "control_mel");
  j.at("source").get_to(c.source);
}

}  // namespace pitchgate
