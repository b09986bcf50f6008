#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <vector>

#include "json.hpp"
#include "pitchgate/error.hpp"
#include "pitchgate/game/game.hpp"
#include "pitchgate/game/levels.hpp"
#include "pitchgate/game/serialize.hpp"
#include "pitchgate/game/session.hpp"
#include "scenarios.hpp"
#include "test_support.hpp"

using namespace pitchgate;
using namespace pitchgate::game;
using Catch::Approx;

namespace {

ControlSignal up() {
  ControlSignal s;
  s.above_critical = true;
  s.effective_critical_mel = 50.0;
  return s;
}

ControlSignal down() {
  ControlSignal s;
  s.effective_critical_mel = 50.0;
  return s;
}

// Reference SplitMix64 written from the published algorithm.
std::uint64_t reference_splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<ControlSignal> random_signals(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<ControlSignal> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back((rng() & 1) ? up() : down());
  return out;
}

int collisions_of(const LevelConfig& level, std::span<const ControlSignal> signals, double dt) {
  auto s = spawn_level(level);
  for (const auto& sig : signals) s = step(s, sig, dt).state;
  return s.collisions;
}

constexpr double kDt = 4096.0 / 44100.0;

}  // namespace

TEST_CASE("splitmix64 matches the published generator", "[game][rng]") {
  std::uint64_t state = 1234567;
  const std::uint64_t first = reference_splitmix(state);
  const std::uint64_t second = reference_splitmix(state);
  CHECK(first == 6457827717110365317ull);
  CHECK(second == 3203168211198807973ull);
  CHECK(splitmix64(1234567) == first);
  CHECK(splitmix64(1234567 + 0x9E3779B97F4A7C15ull) == second);
}

TEST_CASE("spawning a level", "[game]") {
  LevelConfig cfg;
  cfg.rng_seed = 42;

  SECTION("deterministic") { CHECK(spawn_level(cfg) == spawn_level(cfg)); }

  SECTION("initial state") {
    const auto s = spawn_level(cfg);
    CHECK(s.avatar_y == cfg.physics.start_y);
    CHECK(s.scroll_x == 0.0);
    CHECK(s.score == 0);
    CHECK(s.collisions == 0);
    CHECK_FALSE(s.finished);
    CHECK(s.level == cfg);
  }

  SECTION("obstacle count and positions") {
    cfg.obstacle_spacing = 10.0;
    cfg.obstacle_radius = 4.0;
    cfg.scroll_speed = 20.0;
    cfg.duration_s = 5.0;
    const auto s = spawn_level(cfg);
    REQUIRE(s.obstacles.size() == 10);
    for (std::size_t k = 0; k < s.obstacles.size(); ++k) {
      const auto& o = s.obstacles[k];
      CHECK(o.x == Approx(10.0 * static_cast<double>(k + 1)));
      CHECK(o.radius == 4.0);
      CHECK(o.status == Obstacle::Status::Pending);
      CHECK(o.y >= 20.0);
      CHECK(o.y < 80.0);
    }
  }

  SECTION("obstacle heights follow the documented placement") {
    const auto s = spawn_level(cfg);
    for (const auto& o : s.obstacles) {
      std::uint64_t key_state = static_cast<std::uint64_t>(std::llround(o.x * 1000.0));
      std::uint64_t mixed = cfg.rng_seed ^ reference_splitmix(key_state);
      const double u = static_cast<double>(reference_splitmix(mixed) >> 11) * 0x1.0p-53;
      CHECK(o.y == 100.0 * (0.2 + 0.6 * u));
    }
  }

  SECTION("seeds change the field") {
    auto other = cfg;
    other.rng_seed = 43;
    CHECK_FALSE(spawn_level(cfg).obstacles == spawn_level(other).obstacles);
  }

  SECTION("invalid geometry") {
    auto bad = cfg;
    bad.obstacle_spacing = 10.0;
    CHECK_THROWS_AS(spawn_level(bad), ConfigError);  // spacing == 2 r
    bad.obstacle_spacing = 9.0;
    CHECK_THROWS_AS(spawn_level(bad), ConfigError);
    bad = cfg;
    bad.obstacle_radius = 0.5;
    CHECK_THROWS_AS(spawn_level(bad), ConfigError);
    bad = cfg;
    bad.scroll_speed = 0.0;
    CHECK_THROWS_AS(spawn_level(bad), ConfigError);
    bad = cfg;
    bad.duration_s = -1.0;
    CHECK_THROWS_AS(spawn_level(bad), ConfigError);
    bad = cfg;
    bad.critical_mel = 0.0;
    CHECK_THROWS_AS(spawn_level(bad), ConfigError);
    bad = cfg;
    bad.obstacle_radius = 18.0;
    bad.obstacle_spacing = 50.0;
    CHECK_THROWS_AS(spawn_level(bad), ConfigError);  // no room to pass at the floor or ceiling
  }
}

TEST_CASE("stepping", "[game]") {
  LevelConfig cfg;
  cfg.duration_s = 2.0;
  cfg.obstacle_spacing = 100.0;  // 2 s at 20/s never reaches the first obstacle
  auto s = spawn_level(cfg);
  REQUIRE(s.obstacles.empty());

  SECTION("rise and fall rates") {
    const auto a = step(s, up(), 0.1).state;
    CHECK(a.avatar_vy == 40.0);
    CHECK(a.avatar_y == Approx(54.0));
    CHECK(a.scroll_x == Approx(2.0));
    CHECK(a.elapsed_s == Approx(0.1));
    const auto b = step(a, down(), 0.1).state;
    CHECK(b.avatar_vy == -30.0);
    CHECK(b.avatar_y == Approx(51.0));
  }

  SECTION("saturates at the ceiling") {
    for (int i = 0; i < 19; ++i) {
      s = step(s, up(), 0.1).state;
      CHECK(s.avatar_y <= 100.0);
    }
    CHECK(s.avatar_y == 100.0);
  }

  SECTION("rests on the floor") {
    for (int i = 0; i < 19; ++i) s = step(s, down(), 0.1).state;
    CHECK(s.avatar_y == 0.0);
  }

  SECTION("level completes at the duration and then freezes") {
    std::vector<GameEvent> events;
    while (!s.finished) {
      auto r = step(s, up(), 0.1);
      events.insert(events.end(), r.events.begin(), r.events.end());
      s = r.state;
    }
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == GameEvent::Kind::LevelComplete);
    CHECK(events[0].at_s == Approx(2.0));
    const auto after = step(s, down(), 0.1);
    CHECK(after.state == s);
    CHECK(after.events.empty());
  }

  SECTION("non-positive dt") {
    CHECK_THROWS_AS(step(s, up(), 0.0), PreconditionError);
    CHECK_THROWS_AS(step(s, up(), -0.1), PreconditionError);
  }

  SECTION("proportional mode") {
    cfg.physics.mode = ControlMode::Proportional;
    cfg.physics.proportional_gain = 0.5;
    auto p = spawn_level(cfg);
    ControlSignal sig = up();
    sig.control_mel = 70.0;
    CHECK(step(p, sig, 0.1).state.avatar_vy == Approx(10.0));
    sig.control_mel = 500.0;
    CHECK(step(p, sig, 0.1).state.avatar_vy == 40.0);
    sig.control_mel.reset();
    CHECK(step(p, sig, 0.1).state.avatar_vy == -30.0);
  }
}

TEST_CASE("collisions and clears", "[game]") {
  LevelConfig cfg;
  cfg.obstacle_spacing = 40.0;
  cfg.duration_s = 20.0;
  const auto start = spawn_level(cfg);

  SECTION("a floor run clears every obstacle") {
    auto s = start;
    std::vector<GameEvent> events;
    while (!s.finished) {
      auto r = step(s, down(), kDt);
      events.insert(events.end(), r.events.begin(), r.events.end());
      s = r.state;
    }
    const auto n = static_cast<int>(s.obstacles.size());
    // The last obstacle sits at the end of the track; it is not passed before the level ends.
    CHECK(s.score + s.collisions <= n);
    CHECK(s.score >= n - 1);
    for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i - 1].at_s <= events[i].at_s);
  }

  SECTION("an obstacle in the path is hit once") {
    auto s = start;
    s.obstacles = {Obstacle{10.0, 50.0, 5.0}};
    s.avatar_y = 50.0;
    std::vector<GameEvent> events;
    for (int i = 0; i < 30; ++i) {
      ControlSignal hold = down();
      auto r = step(s, hold, 0.05);
      r.state.avatar_y = 50.0;
      events.insert(events.end(), r.events.begin(), r.events.end());
      s = r.state;
    }
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == GameEvent::Kind::Collision);
    CHECK(events[0].context == "obstacle 1");
    CHECK(s.collisions == 1);
    CHECK(s.score == 0);
    CHECK(s.obstacles[0].status == Obstacle::Status::Collided);
  }
}

TEST_CASE("game invariants under random input", "[game]") {
  const auto presets = LevelPresets::builtin();
  for (const auto& level : presets.levels()) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto s = spawn_level(level);
      const auto signals = random_signals(seed, 800);
      double last_at = 0.0;
      for (const auto& sig : signals) {
        auto r = step(s, sig, kDt);
        s = r.state;
        REQUIRE(s.avatar_y >= 0.0);
        REQUIRE(s.avatar_y <= level.physics.world_height);
        int resolved = 0;
        for (const auto& o : s.obstacles) resolved += o.status != Obstacle::Status::Pending;
        REQUIRE(s.score + s.collisions == resolved);
        for (const auto& e : r.events) {
          REQUIRE(e.at_s >= last_at);
          last_at = e.at_s;
        }
        for (std::size_t k = 1; k < s.obstacles.size(); ++k) REQUIRE(s.obstacles[k - 1].x < s.obstacles[k].x);
        if (s.finished) break;
      }
      CHECK(s.finished);
    }
  }
}

TEST_CASE("denser nested fields never collide less", "[game]") {
  LevelConfig sparse;
  sparse.obstacle_radius = 4.0;
  sparse.obstacle_spacing = 40.0;
  sparse.duration_s = 30.0;
  auto mid = sparse;
  mid.obstacle_spacing = 20.0;
  auto dense = sparse;
  dense.obstacle_spacing = 10.0;

  int total_dense = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    sparse.rng_seed = mid.rng_seed = dense.rng_seed = seed;
    const auto signals = random_signals(seed * 7919, 400);
    const int a = collisions_of(sparse, signals, kDt);
    const int b = collisions_of(mid, signals, kDt);
    const int c = collisions_of(dense, signals, kDt);
    INFO("seed " << seed);
    CHECK(a <= b);
    CHECK(b <= c);
    total_dense += c;
  }
  CHECK(total_dense > 0);
}

TEST_CASE("presets are flyable", "[game][levels]") {
  const auto presets = LevelPresets::builtin();
  REQUIRE(presets.names() == std::vector<std::string>{"easiest", "easy", "medium", "hard", "senior"});
  CHECK(presets.get("easiest").critical_mel == kEasiestCriticalMel);
  for (const auto& level : presets.levels()) {
    const std::size_t n = static_cast<std::size_t>(level.duration_s / kDt) + 2;
    const std::vector<ControlSignal> high(n, up());
    const std::vector<ControlSignal> low(n, down());
    const int c_high = collisions_of(level, high, kDt);
    const int c_low = collisions_of(level, low, kDt);
    INFO(level.name << " high " << c_high << " low " << c_low);
    CHECK((c_high == 0 || c_low == 0));
  }
  const auto& easiest = presets.get("easiest");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto l = easiest;
    l.rng_seed = seed;
    const std::size_t n = static_cast<std::size_t>(l.duration_s / kDt) + 2;
    CHECK(collisions_of(l, std::vector<ControlSignal>(n, up()), kDt) == 0);
    CHECK(collisions_of(l, std::vector<ControlSignal>(n, down()), kDt) == 0);
  }
}

TEST_CASE("level presets file", "[game][levels]") {
  const auto builtin = LevelPresets::builtin();
  const auto shipped = LevelPresets::load(testing::source_path("data/levels.json"));
  CHECK(shipped.levels() == builtin.levels());
  CHECK_THROWS_AS(builtin.get("impossible"), NotFoundError);

  nlohmann::json j = {{"levels", nlohmann::json::array()}};
  j["levels"].push_back(nlohmann::json(builtin.get("easiest")));
  CHECK_NOTHROW(LevelPresets::parse(j));
  j["levels"].push_back(nlohmann::json(builtin.get("easiest")));
  CHECK_THROWS_AS(LevelPresets::parse(j), ConfigError);  // duplicate name

  auto wrong = builtin.get("easiest");
  wrong.critical_mel = 60.0;
  CHECK_THROWS_AS(LevelPresets::parse({{"levels", {nlohmann::json(wrong)}}}), ConfigError);
  CHECK_THROWS_AS(LevelPresets::load("/nonexistent/levels.json"), IoError);
}

TEST_CASE("scripted sessions", "[game][session]") {
  SECTION("empty input fails the level without other events") {
    const auto log = run_scripted(testing::golden_level(), {});
    REQUIRE(log.events.size() == 1);
    CHECK(log.events[0].kind == GameEvent::Kind::LevelFailed);
    CHECK(log.summary.frames == 0);
    CHECK_FALSE(log.summary.max_mel);
  }

  SECTION("summary is recomputable and replay is identical") {
    const auto signals = testing::golden_signals();
    const auto a = run_scripted(testing::golden_level(), signals);
    CHECK(recompute_summary(a) == a.summary);
    CHECK(a == run_scripted(testing::golden_level(), signals));
    CHECK(a.events.back().kind == GameEvent::Kind::LevelComplete);
    CHECK(a.summary.frames == a.pitch_samples.size());
    CHECK(a.summary.max_mel == Approx(120.0));
  }

  SECTION("short input ends with LevelFailed") {
    auto signals = testing::golden_signals();
    signals.resize(50);
    const auto log = run_scripted(testing::golden_level(), signals);
    CHECK(log.events.back().kind == GameEvent::Kind::LevelFailed);
    CHECK(log.pitch_samples.size() == 50);
  }

  SECTION("signals after the end are ignored") {
    auto signals = testing::golden_signals();
    signals.resize(400, signals.front());
    const auto log = run_scripted(testing::golden_level(), signals);
    CHECK(log.pitch_samples.size() < 400);
    CHECK(log.events.back().kind == GameEvent::Kind::LevelComplete);
  }
}

TEST_CASE("golden scripted session", "[game][golden]") {
  const auto log = run_scripted(testing::golden_level(), testing::golden_signals());
  const auto path = testing::data_path("golden_session.json");
  if (std::getenv("PITCHGATE_UPDATE_GOLDEN")) {
    std::ofstream(path) << nlohmann::json(log).dump(2) << '\n';
  }
  const auto golden_text = testing::read_text(path);
  REQUIRE_FALSE(golden_text.empty());
  const auto golden = nlohmann::json::parse(golden_text).get<SessionLog>();
  CHECK(golden.events == log.events);
  CHECK(golden.summary == log.summary);
  CHECK(golden == log);
  CHECK(nlohmann::json(log).dump(2) + "\n" == golden_text);
}

TEST_CASE("clean 200 mel tone completes the easiest level", "[game]") {
  const auto presets = LevelPresets::builtin();
  const auto level = presets.get("easiest");
  const auto signals = testing::tone_signals(200.0, level.duration_s + 2.0, level.critical_mel);
  for (const auto& s : signals) REQUIRE(s.above_critical);
  const auto log = run_scripted(level, signals);
  REQUIRE_FALSE(log.events.empty());
  CHECK(log.events.back().kind == GameEvent::Kind::LevelComplete);
  CHECK(log.summary.collisions == 0);
  CHECK(log.summary.score > 0);
}

TEST_CASE("session recorder", "[game][session]") {
  SessionMeta meta{"abc", "patient_7", "2024-01-02T03:04:05Z", "Yin"};
  SessionRecorder rec(testing::golden_level(), meta);
  rec.advance(testing::golden_signals()[0], kDt);
  const auto failed = rec.fail("audio device lost");
  REQUIRE(failed.size() == 1);
  CHECK(failed[0].kind == GameEvent::Kind::LevelFailed);
  CHECK(failed[0].context == "audio device lost");
  CHECK(rec.fail("again").empty());
  CHECK(rec.advance(testing::golden_signals()[1], kDt).empty());
  const auto log = rec.finish();
  CHECK(log.session_id == "abc");
  CHECK(log.patient_alias == "patient_7");
  CHECK(log.algorithm == "Yin");
  CHECK(log.pitch_samples.size() == 1);
  CHECK(log.events.size() == 1);

  CHECK(new_session_id().size() == 16);
  CHECK(new_session_id() != new_session_id());
  CHECK(utc_timestamp_now().size() == 20);
}

TEST_CASE("session store", "[game][store]") {
  testing::TempDir store;
  const auto signals = testing::golden_signals();
  auto first = run_scripted(testing::golden_level(), signals, {"s1", "alice", "2024-05-01T10:00:00Z", "Yin"});
  auto second = run_scripted(testing::golden_level(), std::span(signals).first(30),
                             {"s2", "bob", "2024-05-02T10:00:00Z", "Mpm"});

  CHECK(list_sessions(store.path()).empty());
  CHECK(persist_session(first, store.path()) == "s1");
  CHECK(persist_session(second, store.path()) == "s2");

  SECTION("round trip") {
    CHECK(get_session(store.path(), "s1") == first);
    CHECK(get_session(store.path(), "s2") == second);
  }

  SECTION("listing in insertion order") {
    const auto entries = list_sessions(store.path());
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].session_id == "s1");
    CHECK(entries[1].session_id == "s2");
    CHECK(entries[0].level_name == "golden");
    CHECK(entries[1].summary == second.summary);
  }

  SECTION("unknown id") { CHECK_THROWS_AS(get_session(store.path(), "nope"), NotFoundError); }

  SECTION("duplicate id") { CHECK_THROWS_AS(persist_session(first, store.path()), ConfigError); }

  SECTION("summary is verified before writing") {
    auto bad = first;
    bad.session_id = "s3";
    bad.summary.score += 1;
    CHECK_THROWS_AS(persist_session(bad, store.path()), IntegrityError);
  }

  SECTION("tampered summary is detected on read") {
    const auto file = store / "alice.jsonl";
    auto j = nlohmann::json::parse(testing::read_text(file));
    j["summary"]["score"] = j["summary"]["score"].get<int>() + 1;
    std::ofstream(file, std::ios::trunc) << j.dump() << '\n';
    CHECK_THROWS_AS(get_session(store.path(), "s1"), IntegrityError);
    CHECK(get_session(store.path(), "s2") == second);
  }

  SECTION("corrupt record") {
    std::ofstream(store / "bob.jsonl", std::ios::trunc) << "{not json\n";
    CHECK_THROWS_AS(get_session(store.path(), "s2"), IntegrityError);
  }

  SECTION("invalid alias") {
    auto bad = first;
    bad.session_id = "s4";
    bad.patient_alias = "../etc";
    CHECK_THROWS_AS(persist_session(bad, store.path()), ConfigError);
    CHECK(valid_alias("patient_7-b"));
    CHECK_FALSE(valid_alias(""));
    CHECK_FALSE(valid_alias("a b"));
    CHECK_FALSE(valid_alias(std::string(65, 'a')));
  }
}

TEST_CASE("game json round trips", "[game][json]") {
  auto s = spawn_level(LevelPresets::builtin().get("medium"));
  for (int i = 0; i < 40; ++i) s = step(s, i % 3 ? up() : down(), kDt).state;
  const nlohmann::json j = s;
  CHECK(j.get<GameState>() == s);
  CHECK(j["obstacles"][0]["status"].is_string());

  const auto log = run_scripted(testing::golden_level(), testing::golden_signals());
  CHECK(nlohmann::json(log).get<SessionLog>() == log);
  const auto js = nlohmann::json(log.pitch_samples[0]);
  CHECK(js.contains("above_critical"));
  CHECK(js.contains("effective_critical_mel"));
  CHECK(js.contains("note_name"));

  CHECK(nlohmann::json::object().get<LevelConfig>() == LevelConfig{});
  CHECK(parse_event_kind("Collision") == GameEvent::Kind::Collision);
  CHECK_THROWS_AS(parse_event_kind("Explosion"), ConfigError);
}
