#include "walshlp/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace walshlp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t TrialRng::derive_stream(std::uint64_t base_seed,
                                      std::uint64_t stream) {
  return splitmix_finalize(base_seed + (stream + 1) * kGolden);
}

double TrialRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double TrialRng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double TrialRng::sign() { return (next_u64() >> 63) ? -1.0 : 1.0; }

std::uint64_t TrialRng::below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("TrialRng::below: bound must be >= 1");
  }
  // Discard the low residue band so every value in [0, bound) is equally
  // likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace walshlp
