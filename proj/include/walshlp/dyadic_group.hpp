#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace walshlp {

// Integer side of the dyadic group (Z+, xor_add) together with the
// interval-image laws used by the spectral pipeline.  All operations are
// pure.  Intervals are half-open [a, b) throughout the public API.

// Interval endpoint sums in shift_decomposition stay at or below this cap;
// spectral indices in actual use stay below 2^20.
inline constexpr std::uint64_t kIntegerCap = std::uint64_t{1} << 62;

// Exponents of the set binary digits of an integer, strictly descending.
// Empty for zero.
using DyadicExponents = std::vector<int>;

// Half-open integer interval [a, b) with 0 <= a < b.
struct IntervalZ {
  std::uint64_t a = 0;  // inclusive
  std::uint64_t b = 0;  // exclusive

  std::uint64_t size() const { return b - a; }
  bool contains(std::uint64_t n) const { return a <= n && n < b; }
  bool operator==(const IntervalZ&) const = default;
};

// delta_0 = {0} and delta_k = [2^{k-1}, 2^k - 1] for k > 0.  The blocks
// partition Z+ and are the spectral bands of the martingale differences.
struct DeltaBlock {
  int k = 0;

  std::uint64_t lo() const { return k == 0 ? 0 : std::uint64_t{1} << (k - 1); }
  std::uint64_t hi() const {
    return k == 0 ? 0 : (std::uint64_t{1} << k) - 1;
  }
  std::uint64_t size() const {
    return k == 0 ? 1 : std::uint64_t{1} << (k - 1);
  }
  bool contains(std::uint64_t n) const { return lo() <= n && n <= hi(); }
  IntervalZ interval() const { return {lo(), hi() + 1}; }
  bool operator==(const DeltaBlock&) const = default;
};

// Digitwise mod-2 sum of the binary expansions.  Commutative, associative,
// 0 is the identity, and every element is its own inverse.
std::uint64_t xor_add(std::uint64_t a, std::uint64_t b);

DyadicExponents dyadic_exponents(std::uint64_t n);

// First `count` elements of Z+ \ {exponents of n}, ascending.  count >= 1.
std::vector<int> complement_exponents(std::uint64_t n, std::size_t count);

// Validated block constructor; 0 <= k <= 62.
DeltaBlock delta_block(int k);

// {x xor_add n : x in s}, materialized sorted.  Cardinality is preserved.
std::vector<std::uint64_t> xor_translate_set(std::span<const std::uint64_t> s,
                                             std::uint64_t n);
std::vector<std::uint64_t> xor_translate_set(const IntervalZ& s,
                                             std::uint64_t n);

struct ShiftRow {
  IntervalZ source;  // half-open
  DeltaBlock image;  // translating source by n yields exactly this block
};

// Translation-by-n images of [0, n] and of the first tail_count intervals to
// the right of n, one row per interval: for n with digit exponents
// k_1 > ... > k_s these are the s rows
//   [sum_{l<i} 2^{k_l}, sum_{l<=i} 2^{k_l} - 1]  ->  delta_{k_i + 1},
// then {n} -> delta_0, then for the ascending complement exponents
// kappa_1 < kappa_2 < ... the rows
//   [n + sum_{l<j} 2^{kappa_l} + 1, n + sum_{l<=j} 2^{kappa_l}]
//     ->  delta_{kappa_j + 1}.
// The sources left of n tile [0, n - 1].  Requires n >= 1.
std::vector<ShiftRow> shift_decomposition(std::uint64_t n,
                                          std::size_t tail_count);

}  // namespace walshlp
