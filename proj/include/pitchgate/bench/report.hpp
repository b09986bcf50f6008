/// @file report.hpp
/// @brief CSV and JSON-lines emission of benchmark records.

#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pitchgate/bench/bench.hpp"
#include "pitchgate/error.hpp"

namespace pitchgate::bench {

enum class ReportFormat { Csv, Jsonl };

/// "csv" or "jsonl"; throws ConfigError otherwise.
ReportFormat parse_report_format(const std::string& text);

void to_json(nlohmann::json& j, const BenchmarkRecord& r);
void from_json(const nlohmann::json& j, BenchmarkRecord& r);
void to_json(nlohmann::json& j, const TimingRecord& r);
void from_json(const nlohmann::json& j, TimingRecord& r);
void to_json(nlohmann::json& j, const SensitivityRecord& r);
void from_json(const nlohmann::json& j, SensitivityRecord& r);

std::string csv_header(const BenchmarkRecord*);
std::string csv_header(const TimingRecord*);
std::string csv_header(const SensitivityRecord*);
std::string csv_row(const BenchmarkRecord& r);
std::string csv_row(const TimingRecord& r);
std::string csv_row(const SensitivityRecord& r);

/// Header line (CSV only) then one line per record, in input order.
template <typename Record>
std::string render_report(std::span<const Record> records, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Csv) {
    out += csv_header(static_cast<const Record*>(nullptr));
    out += '\n';
    for (const auto& r : records) {
      out += csv_row(r);
      out += '\n';
    }
  } else {
    for (const auto& r : records) {
      out += nlohmann::json(r).dump();
      out += '\n';
    }
  }
  return out;
}

/// Writes render_report output to @p path; throws IoError naming the path.
template <typename Record>
void emit_report(std::span<const Record> records, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write report: " + path.string());
  out << render_report(records, format);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

/// Parses a JSON-lines report back into records.
template <typename Record>
std::vector<Record> read_jsonl_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read report: " + path.string());
  std::vector<Record> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(nlohmann::json::parse(line).get<Record>());
  }
  return out;
}

}  // namespace pitchgate::bench
