/// @file session.cpp

#include "pitchgate/game/session.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>

#include "pitchgate/error.hpp"
#include "pitchgate/game/serialize.hpp"

namespace pitchgate::game {

namespace fs = std::filesystem;

namespace {

constexpr const char* kIndexFile = "index.jsonl";

// Serializes store access within the process; the engine writes while REST handlers read.
std::mutex& store_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> lines;
  if (!fs::exists(path)) return lines;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void append_line(const fs::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot append to " + path.string());
  out << line << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<SessionEntry> read_index(const fs::path& store) {
  std::vector<SessionEntry> out;
  for (const auto& line : read_lines(store / kIndexFile)) {
    try {
      out.push_back(nlohmann::json::parse(line).get<SessionEntry>());
    } catch (const nlohmann::json::exception& e) {
      throw IntegrityError("corrupt index record in " + (store / kIndexFile).string() + ": " + e.what());
    }
  }
  return out;
}

void verify(const SessionLog& log, const char* when) {
  if (recompute_summary(log) != log.summary) {
    throw IntegrityError(std::string("session ") + log.session_id + ": summary does not match its samples and events (" +
                         when + ")");
  }
}

}  // namespace

SessionSummary recompute_summary(const SessionLog& log) {
  SessionSummary s;
  s.frames = log.pitch_samples.size();
  for (const auto& ls : log.pitch_samples) {
    if (ls.sample.pitched) ++s.pitched_frames;
    if (ls.above_critical) ++s.above_critical_frames;
    if (ls.sample.pitched && ls.sample.mel) {
      s.max_mel = s.max_mel ? std::max(*s.max_mel, *ls.sample.mel) : *ls.sample.mel;
    }
  }
  for (const auto& e : log.events) {
    if (e.kind == GameEvent::Kind::ObstacleCleared) ++s.score;
    if (e.kind == GameEvent::Kind::Collision) ++s.collisions;
  }
  return s;
}

std::string new_session_id() {
  std::random_device rd;
  const std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SessionRecorder::SessionRecorder(const LevelConfig& level, SessionMeta meta) : state_(spawn_level(level)) {
  log_.session_id = std::move(meta.session_id);
  log_.patient_alias = std::move(meta.patient_alias);
  log_.started_at = std::move(meta.started_at);
  log_.algorithm = std::move(meta.algorithm);
  log_.level = level;
}

std::vector<GameEvent> SessionRecorder::advance(const ControlSignal& signal, double dt) {
  if (state_.finished) return {};
  auto result = step(state_, signal, dt);
  log_.pitch_samples.push_back({signal.source, signal.above_critical, signal.effective_critical_mel});
  state_ = std::move(result.state);
  log_.events.insert(log_.events.end(), result.events.begin(), result.events.end());
  return std::move(result.events);
}

std::vector<GameEvent> SessionRecorder::fail(const std::string& reason) {
  if (state_.finished) return {};
  state_.finished = true;
  GameEvent e{GameEvent::Kind::LevelFailed, state_.elapsed_s, reason};
  log_.events.push_back(e);
  return {e};
}

SessionLog SessionRecorder::finish() {
  fail("input ended before the level duration");
  log_.summary = recompute_summary(log_);
  return log_;
}

SessionLog run_scripted(const LevelConfig& level, std::span<const ControlSignal> signals,
                        const SessionMeta& meta) {
  SessionRecorder rec(level, meta);
  for (const auto& s : signals) {
    if (rec.finished()) break;
    rec.advance(s, s.source.duration_ms / 1000.0);
  }
  return rec.finish();
}

bool valid_alias(const std::string& alias) {
  if (alias.empty() || alias.size() > 64) return false;
  return std::all_of(alias.begin(), alias.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

std::string persist_session(const SessionLog& log, const fs::path& store) {
  if (!valid_alias(log.patient_alias)) {
    throw ConfigError("patient alias '" + log.patient_alias + "' must be 1-64 characters of [A-Za-z0-9_-]");
  }
  if (log.session_id.empty()) throw ConfigError("session_id must not be empty");
  verify(log, "on write");

  std::lock_guard lock(store_mutex());
  std::error_code ec;
  fs::create_directories(store, ec);
  if (ec) throw IoError("cannot create session store " + store.string() + ": " + ec.message());
  for (const auto& e : read_index(store)) {
    if (e.session_id == log.session_id) throw ConfigError("session " + log.session_id + " is already stored");
  }
  append_line(store / (log.patient_alias + ".jsonl"), nlohmann::json(log).dump());
  SessionEntry entry{log.session_id, log.patient_alias, log.started_at, log.level.name, log.summary};
  append_line(store / kIndexFile, nlohmann::json(entry).dump());
  return log.session_id;
}

std::vector<SessionEntry> list_sessions(const fs::path& store) {
  std::lock_guard lock(store_mutex());
  return read_index(store);
}

SessionLog get_session(const fs::path& store, const std::string& session_id) {
  std::lock_guard lock(store_mutex());
  std::optional<SessionEntry> entry;
  for (auto& e : read_index(store)) {
    if (e.session_id == session_id) entry = std::move(e);
  }
  if (!entry) throw NotFoundError("session " + session_id + " not found");
  if (!valid_alias(entry->patient_alias)) {
    throw IntegrityError("index names an invalid alias for session " + session_id);
  }

  const fs::path file = store / (entry->patient_alias + ".jsonl");
  for (const auto& line : read_lines(file)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IntegrityError("corrupt session record in " + file.string() + ": " + e.what());
    }
    if (!j.is_object() || j.value("session_id", std::string{}) != session_id) continue;
    SessionLog log;
    try {
      log = j.get<SessionLog>();
    } catch (const std::exception& e) {
      throw IntegrityError("malformed session " + session_id + ": " + e.what());
    }
    verify(log, "on read");
    return log;
  }
  throw IntegrityError("session " + session_id + " is indexed but missing from " + file.string());
}

}  // namespace pitchgate::game
