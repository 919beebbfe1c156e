#include "walshlp/dyadic_group.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace walshlp {

std::uint64_t xor_add(std::uint64_t a, std::uint64_t b) { return a ^ b; }

DyadicExponents dyadic_exponents(std::uint64_t n) {
  DyadicExponents exps;
  while (n != 0) {
    const int k = std::bit_width(n) - 1;
    exps.push_back(k);
    n ^= std::uint64_t{1} << k;
  }
  return exps;
}

std::vector<int> complement_exponents(std::uint64_t n, std::size_t count) {
  if (count == 0) {
    throw std::invalid_argument("complement_exponents: count must be >= 1");
  }
  std::vector<int> out;
  out.reserve(count);
  for (int k = 0; out.size() < count; ++k) {
    const bool set = k < 64 && ((n >> k) & 1u) != 0;
    if (!set) out.push_back(k);
  }
  return out;
}

DeltaBlock delta_block(int k) {
  if (k < 0 || k > 62) {
    throw std::invalid_argument("delta_block: k must lie in [0, 62], got " +
                                std::to_string(k));
  }
  return DeltaBlock{k};
}

std::vector<std::uint64_t> xor_translate_set(std::span<const std::uint64_t> s,
                                             std::uint64_t n) {
  std::vector<std::uint64_t> out(s.begin(), s.end());
  for (std::uint64_t& x : out) x = xor_add(x, n);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> xor_translate_set(const IntervalZ& s,
                                             std::uint64_t n) {
  if (!(s.a < s.b)) {
    throw std::invalid_argument("xor_translate_set: empty interval");
  }
  std::vector<std::uint64_t> out;
  out.reserve(s.size());
  for (std::uint64_t x = s.a; x < s.b; ++x) out.push_back(xor_add(x, n));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ShiftRow> shift_decomposition(std::uint64_t n,
                                          std::size_t tail_count) {
  if (n == 0) {
    throw std::invalid_argument("shift_decomposition: n must be >= 1");
  }
  if (n > kIntegerCap) {
    throw std::overflow_error("shift_decomposition: n exceeds the integer cap");
  }
  const DyadicExponents exps = dyadic_exponents(n);
  std::vector<ShiftRow> rows;
  rows.reserve(exps.size() + 1 + tail_count);

  std::uint64_t prefix = 0;
  for (const int k : exps) {
    const std::uint64_t next = prefix + (std::uint64_t{1} << k);
    rows.push_back({{prefix, next}, delta_block(k + 1)});
    prefix = next;
  }
  rows.push_back({{n, n + 1}, delta_block(0)});

  if (tail_count > 0) {
    const std::vector<int> kappa = complement_exponents(n, tail_count);
    std::uint64_t offset = n;
    for (const int k : kappa) {
      if (k > 61 || offset > kIntegerCap - (std::uint64_t{1} << k)) {
        throw std::overflow_error(
            "shift_decomposition: tail sources exceed the integer cap");
      }
      const std::uint64_t next = offset + (std::uint64_t{1} << k);
      rows.push_back({{offset + 1, next + 1}, delta_block(k + 1)});
      offset = next;
    }
  }
  return rows;
}

}  // namespace walshlp
