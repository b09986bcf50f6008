/// @file budget.cpp

#include "pitchgate/service/budget.hpp"

#include <chrono>
#include <cstdio>

#include "pitchgate/detectors/detector.hpp"
#include "pitchgate/game/game.hpp"
#include "pitchgate/pipeline/pipeline.hpp"
#include "pitchgate/signal/synth.hpp"

namespace pitchgate::service {

std::vector<BudgetEntry> measure_frame_budget(std::span<const AlgorithmId> algorithms,
                                              std::span<const std::size_t> buffer_sizes,
                                              std::size_t iterations, int sample_rate) {
  using Clock = std::chrono::steady_clock;
  std::vector<BudgetEntry> out;
  if (iterations == 0) iterations = 1;
  PitchDetector detector;
  for (std::size_t buffer : buffer_sizes) {
    const auto tone = synth_sine_hz(220.0, static_cast<double>(buffer) / sample_rate + 0.001, sample_rate, 0.8);
    const AudioFrame frame = frames(tone, buffer, buffer).front();
    const DetectorConfig cfg = DetectorConfig{}.fitted_to(buffer, sample_rate);
    for (AlgorithmId alg : algorithms) {
      PitchPipeline pipeline;
      game::GameState state = game::spawn_level(game::LevelConfig{});
      const double dt = frame.duration_ms() / 1000.0;
      auto once = [&] {
        const auto out = pipeline.process(detector.detect(alg, frame, cfg), frame);
        state = game::step(state, out.control, dt).state;
      };
      once();
      const auto start = Clock::now();
      for (std::size_t i = 0; i < iterations; ++i) once();
      const double total_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      out.push_back({alg, buffer, total_ms / static_cast<double>(iterations), frame.duration_ms()});
    }
  }
  return out;
}

std::string format_budget(std::span<const BudgetEntry> entries) {
  std::string out;
  char line[160];
  for (const auto& e : entries) {
    std::snprintf(line, sizeof line, "%-24s buffer %5zu  %9.3f ms / frame %7.2f ms  %s\n",
                  std::string(to_string(e.algorithm)).c_str(), e.buffer_size, e.mean_ms, e.frame_ms,
                  e.within_budget() ? "OK" : "OVER");
    out += line;
  }
  return out;
}

}  // namespace pitchgate::service
