/// @file session.hpp
/// @brief Session log (the rehabilitation trace), headless replay and the
/// append-only session store.
///
/// Store layout: one `<alias>.jsonl` file per patient alias holding one
/// SessionLog per line, plus `index.jsonl` listing sessions in insertion order.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pitchgate/game/game.hpp"
#include "pitchgate/pipeline/pipeline.hpp"

namespace pitchgate::game {

/// A monitor record together with the threshold decision made on it.
struct LoggedSample {
  PitchSample sample;
  bool above_critical = false;
  double effective_critical_mel = 0.0;

  friend bool operator==(const LoggedSample&, const LoggedSample&) = default;
};

struct SessionSummary {
  std::size_t frames = 0;
  std::size_t pitched_frames = 0;
  std::size_t above_critical_frames = 0;
  std::optional<double> max_mel;
  int score = 0;
  int collisions = 0;

  friend bool operator==(const SessionSummary&, const SessionSummary&) = default;
};

struct SessionLog {
  std::string session_id;
  std::string patient_alias;
  std::string started_at;  // ISO 8601 UTC
  std::string algorithm;   // detector that produced the samples; empty when unknown
  LevelConfig level;
  std::vector<LoggedSample> pitch_samples;
  std::vector<GameEvent> events;
  SessionSummary summary;

  friend bool operator==(const SessionLog&, const SessionLog&) = default;
};

/// Summary as implied by the raw sample and event lists.
SessionSummary recompute_summary(const SessionLog& log);

struct SessionMeta {
  std::string session_id = "scripted";
  std::string patient_alias = "anonymous";
  std::string started_at = "1970-01-01T00:00:00Z";
  std::string algorithm;
};

/// Random 16-hex-digit identifier.
std::string new_session_id();
/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp_now();

/// Owns one game and records everything it consumes and emits. Once the game
/// finishes, further signals are ignored.
class SessionRecorder {
 public:
  SessionRecorder(const LevelConfig& level, SessionMeta meta);

  /// Logs the sample, steps the game by dt and returns the new events.
  std::vector<GameEvent> advance(const ControlSignal& signal, double dt);
  /// Ends an unfinished game with LevelFailed; no-op when already finished.
  std::vector<GameEvent> fail(const std::string& reason);
  /// Closes the log (LevelFailed if the game is still running) and fills the summary.
  SessionLog finish();

  const GameState& state() const noexcept { return state_; }
  bool finished() const noexcept { return state_.finished; }
  const SessionLog& log() const noexcept { return log_; }

 private:
  GameState state_;
  SessionLog log_;
};

/// Fold of step over @p signals, each advancing by its sample's duration.
/// Input that ends before the level duration closes with LevelFailed.
SessionLog run_scripted(const LevelConfig& level, std::span<const ControlSignal> signals,
                        const SessionMeta& meta = {});

/// Listing row from the store index.
struct SessionEntry {
  std::string session_id;
  std::string patient_alias;
  std::string started_at;
  std::string level_name;
  SessionSummary summary;

  friend bool operator==(const SessionEntry&, const SessionEntry&) = default;
};

/// Appends @p log to the store and returns its id. Verifies the summary first
/// (IntegrityError) and rejects an id already present (ConfigError).
std::string persist_session(const SessionLog& log, const std::filesystem::path& store);
/// Sessions in insertion order; an absent store is empty.
std::vector<SessionEntry> list_sessions(const std::filesystem::path& store);
/// Reads one session back, re-verifying its summary. NotFoundError for an
/// unknown id, IntegrityError for unparsable or inconsistent records.
SessionLog get_session(const std::filesystem::path& store, const std::string& session_id);

/// Aliases are pseudonyms of 1-64 characters from [A-Za-z0-9_-].
bool valid_alias(const std::string& alias);

}  // namespace pitchgate::game
