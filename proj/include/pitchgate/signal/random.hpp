/// @file random.hpp
/// @brief Seeded generator with platform-independent output.
///
/// std::mt19937_64 is bit-exact across standard libraries; the distribution
/// adaptors in <random> are not, so the mapping to real numbers lives here.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pitchgate {

class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (one value per call, the pair's sine half is discarded).
  double gaussian() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pitchgate
