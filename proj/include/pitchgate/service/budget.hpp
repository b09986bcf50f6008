/// @file budget.hpp
/// @brief Per-frame processing cost (detect + pipeline + game step) against the
/// frame duration, measured at startup.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pitchgate/detectors/algorithm.hpp"

namespace pitchgate::service {

struct BudgetEntry {
  AlgorithmId algorithm = AlgorithmId::ClassicAutocorrelator;
  std::size_t buffer_size = 0;
  double mean_ms = 0.0;
  double frame_ms = 0.0;

  bool within_budget() const { return mean_ms <= frame_ms; }
};

/// Times @p iterations frames of a 220 Hz tone per (algorithm, buffer) after one warm-up.
std::vector<BudgetEntry> measure_frame_budget(std::span<const AlgorithmId> algorithms,
                                              std::span<const std::size_t> buffer_sizes,
                                              std::size_t iterations = 3, int sample_rate = 44100);

/// One line per entry: algorithm, buffer, mean and frame milliseconds, OK/OVER.
std::string format_budget(std::span<const BudgetEntry> entries);

}  // namespace pitchgate::service
