// SPDX-License-Identifier: MIT
//
// Deterministic, splittable random streams. All randomness flows from one
// 64-bit base seed; per-replication streams are derived by a documented
// mixing of (seed, n-index, replication-index) so replications can run in
// parallel and per-n results do not depend on grid composition. Uniform
// doubles are built from raw 64-bit draws (never from distribution objects
// whose output is implementation-defined), so output is bit-identical across
// standard libraries and thread counts.
#pragma once

#include <cstdint>
#include <random>

namespace haarcov {

// SplitMix64 finalizer: the standard 64-bit avalanche mixer.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// A deterministic stream: mt19937_64 seeded from a SplitMix64-derived
// seed sequence (the engine's output is fully specified by the standard).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    std::uint64_t s = seed;
    std::uint32_t words[8];
    for (int i = 0; i < 4; ++i) {
      s = splitmix64(s);
      words[2 * i] = static_cast<std::uint32_t>(s);
      words[2 * i + 1] = static_cast<std::uint32_t>(s >> 32);
    }
    std::seed_seq seq(words, words + 8);
    engine_.seed(seq);
  }

  // Derivation for replication r of grid point i under purpose tag `purpose`.
  static RngStream derive(std::uint64_t base_seed, std::uint64_t n_index,
                          std::uint64_t replication, std::uint64_t purpose = 0) {
    std::uint64_t s = base_seed;
    s = splitmix64(s ^ (0x9E3779B97F4A7C15ULL * (n_index + 1)));
    s = splitmix64(s ^ (0xC2B2AE3D27D4EB4FULL * (replication + 1)));
    s = splitmix64(s ^ (0x165667B19E3779F9ULL * (purpose + 1)));
    return RngStream(s);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1): 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [-1,1].
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  // Rademacher +/-1 from the top bit.
  double rademacher() {
    return (engine_() >> 63) ? 1.0 : -1.0;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace haarcov
