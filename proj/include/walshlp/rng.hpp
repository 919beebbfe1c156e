#pragma once

#include <cstdint>
#include <random>

namespace walshlp {

// Deterministic random source for the harness.  The engine is std::mt19937_64
// whose output sequence is fixed by the standard, and the distributions are
// implemented here rather than taken from <random>, so identical seeds give
// identical draws on every platform.
//
// Stream splitting: trial t of a run seeded with s draws from a fresh engine
// seeded with derive_stream(s, t) = mix(s + (t + 1) * 0x9E3779B97F4A7C15),
// where mix is the splitmix64 finalizer.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t derive_stream(std::uint64_t base_seed,
                                     std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal via Box-Muller on uniform01 pairs.
  double gaussian();

  // Exactly +1 or -1, each with probability 1/2.
  double sign();

  // Uniform on [0, bound); rejection sampling, unbiased.  bound >= 1.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace walshlp
