/// @file report.cpp

#include "pitchgate/bench/report.hpp"

#include <charconv>

namespace pitchgate::bench {

namespace {

// Shortest representation that parses back to the same double.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

template <typename T>
nlohmann::json nullable(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> read_nullable(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "jsonl") return ReportFormat::Jsonl;
  throw ConfigError("unknown report format '" + text + "' (expected csv or jsonl)");
}

void to_json(nlohmann::json& j, const BenchmarkRecord& r) {
  j = nlohmann::json{{"algorithm", to_string(r.algorithm)},
                     {"buffer_size", r.buffer_size},
                     {"true_midi", r.true_midi},
                     {"estimated_midi", nullable(r.estimated_midi)},
                     {"abs_error_midi", nullable(r.abs_error_midi)},
                     {"pitched", r.pitched}};
}

void from_json(const nlohmann::json& j, BenchmarkRecord& r) {
  r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  j.at("buffer_size").get_to(r.buffer_size);
  j.at("true_midi").get_to(r.true_midi);
  r.estimated_midi = read_nullable<double>(j, "estimated_midi");
  r.abs_error_midi = read_nullable<double>(j, "abs_error_midi");
  j.at("pitched").get_to(r.pitched);
}

void to_json(nlohmann::json& j, const TimingRecord& r) {
  j = nlohmann::json{{"algorithm", to_string(r.algorithm)},
                     {"buffer_size", r.buffer_size},
                     {"mean_ns_per_buffer", r.mean_ns_per_buffer},
                     {"frames_measured", r.frames_measured}};
}

void from_json(const nlohmann::json& j, TimingRecord& r) {
  r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  j.at("buffer_size").get_to(r.buffer_size);
  j.at("mean_ns_per_buffer").get_to(r.mean_ns_per_buffer);
  j.at("frames_measured").get_to(r.frames_measured);
}

void to_json(nlohmann::json& j, const SensitivityRecord& r) {
  j = nlohmann::json{{"algorithm", to_string(r.algorithm)},
                     {"buffer_size", r.buffer_size},
                     {"source", r.source},
                     {"frames_total", r.frames_total},
                     {"frames_pitched", r.frames_pitched},
                     {"frames_silent", r.frames_silent},
                     {"detection_rate", r.detection_rate},
                     {"pitched_midi_values", r.pitched_midi_values},
                     {"error", nullable(r.error)}};
}

void from_json(const nlohmann::json& j, SensitivityRecord& r) {
  r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  j.at("buffer_size").get_to(r.buffer_size);
  j.at("source").get_to(r.source);
  j.at("frames_total").get_to(r.frames_total);
  j.at("frames_pitched").get_to(r.frames_pitched);
  j.at("frames_silent").get_to(r.frames_silent);
  j.at("detection_rate").get_to(r.detection_rate);
  j.at("pitched_midi_values").get_to(r.pitched_midi_values);
  r.error = read_nullable<std::string>(j, "error");
}

std::string csv_header(const BenchmarkRecord*) {
  return "algorithm,buffer_size,true_midi,estimated_midi,abs_error_midi,pitched";
}

std::string csv_header(const TimingRecord*) {
  return "algorithm,buffer_size,mean_ns_per_buffer,frames_measured";
}

std::string csv_header(const SensitivityRecord*) {
  return "algorithm,buffer_size,source,frames_total,frames_pitched,frames_silent,detection_rate,"
         "pitched_midi_values,error";
}

std::string csv_row(const BenchmarkRecord& r) {
  return std::string(to_string(r.algorithm)) + ',' + std::to_string(r.buffer_size) + ',' +
         num(r.true_midi) + ',' + opt(r.estimated_midi) + ',' + opt(r.abs_error_midi) + ',' +
         (r.pitched ? "true" : "false");
}

std::string csv_row(const TimingRecord& r) {
  return std::string(to_string(r.algorithm)) + ',' + std::to_string(r.buffer_size) + ',' +
         num(r.mean_ns_per_buffer) + ',' + std::to_string(r.frames_measured);
}

std::string csv_row(const SensitivityRecord& r) {
  std::string values;
  for (std::size_t i = 0; i < r.pitched_midi_values.size(); ++i) {
    if (i > 0) values += ';';
    values += num(r.pitched_midi_values[i]);
  }
  return std::string(to_string(r.algorithm)) + ',' + std::to_string(r.buffer_size) + ',' +
         quoted(r.source) + ',' + std::to_string(r.frames_total) + ',' +
         std::to_string(r.frames_pitched) + ',' + std::to_string(r.frames_silent) + ',' +
         num(r.detection_rate) + ',' + values + ',' + (r.error ? quoted(*r.error) : std::string());
}

}  // namespace pitchgate::bench
