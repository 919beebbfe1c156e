#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "walshlp/dyadic_group.hpp"
#include "walshlp/rng.hpp"

using namespace walshlp;

namespace {

// Digit-by-digit mod-2 addition, the defining form of the group law.
std::uint64_t xor_oracle(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  for (int bit = 0; bit < 64; ++bit) {
    const std::uint64_t da = (a >> bit) & 1u;
    const std::uint64_t db = (b >> bit) & 1u;
    out |= ((da + db) % 2) << bit;
  }
  return out;
}

// Binary digits of n by repeated halving, descending.
std::vector<int> exponents_oracle(std::uint64_t n) {
  std::vector<int> exps;
  for (int bit = 0; n != 0; ++bit, n >>= 1) {
    if (n & 1u) exps.push_back(bit);
  }
  std::reverse(exps.begin(), exps.end());
  return exps;
}

std::vector<int> complement_oracle(std::uint64_t n, std::size_t count) {
  std::vector<int> clear_bits;
  for (int bit = 0; bit < 64 && clear_bits.size() < count; ++bit) {
    if (((n >> bit) & 1u) == 0) clear_bits.push_back(bit);
  }
  return clear_bits;
}

std::vector<std::uint64_t> translate_oracle(const IntervalZ& interval,
                                            std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = interval.a; x < interval.b; ++x) {
    out.push_back(x ^ n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("group law matches the digitwise oracle") {
  for (std::uint64_t a = 0; a < 64; ++a) {
    for (std::uint64_t b = 0; b < 64; ++b) {
      REQUIRE(xor_add(a, b) == xor_oracle(a, b));
    }
  }
  TrialRng rng(7);
  for (int t = 0; t < 1000; ++t) {
    const std::uint64_t a = rng.next_u64() % kIntegerCap;
    const std::uint64_t b = rng.next_u64() % kIntegerCap;
    REQUIRE(xor_add(a, b) == xor_oracle(a, b));
  }
  CHECK(xor_add(5, 3) == 6);
}

TEST_CASE("exponents match the halving oracle and reassemble n") {
  for (std::uint64_t n = 0; n < 4096; ++n) {
    const DyadicExponents exps = dyadic_exponents(n);
    REQUIRE(exps == exponents_oracle(n));
    std::uint64_t back = 0;
    for (const int k : exps) {
      REQUIRE(k >= 0);
      back += std::uint64_t{1} << k;
    }
    REQUIRE(back == n);
    CHECK(std::is_sorted(exps.rbegin(), exps.rend()));
  }
  CHECK(dyadic_exponents(0).empty());
  CHECK(dyadic_exponents(6) == DyadicExponents{2, 1});
}

TEST_CASE("complement exponents enumerate clear digits ascending") {
  for (std::uint64_t n = 0; n < 512; ++n) {
    for (std::size_t count = 1; count <= 8; ++count) {
      REQUIRE(complement_exponents(n, count) == complement_oracle(n, count));
    }
  }
  CHECK(complement_exponents(6, 2) == std::vector<int>{0, 3});
  CHECK(complement_exponents(0, 3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("delta blocks partition the nonnegative integers") {
  CHECK(delta_block(0).lo() == 0);
  CHECK(delta_block(0).hi() == 0);
  CHECK(delta_block(1).lo() == 1);
  CHECK(delta_block(1).hi() == 1);
  CHECK(delta_block(2).lo() == 2);
  CHECK(delta_block(2).hi() == 3);
  CHECK(delta_block(3).lo() == 4);
  CHECK(delta_block(3).hi() == 7);
  CHECK(delta_block(3).size() == 4);

  // Every integer below 2^10 lies in exactly one block.
  for (std::uint64_t n = 0; n < 1024; ++n) {
    int hits = 0;
    for (int k = 0; k <= 10; ++k) {
      if (delta_block(k).contains(n)) ++hits;
    }
    REQUIRE(hits == 1);
  }
  CHECK_THROWS_AS(delta_block(-1), std::invalid_argument);
  CHECK_THROWS_AS(delta_block(63), std::invalid_argument);
}

TEST_CASE("set translation matches brute force and is sorted") {
  TrialRng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t a = rng.below(512);
    const std::uint64_t len = 1 + rng.below(64);
    const std::uint64_t n = rng.below(1024);
    const IntervalZ interval{a, a + len};
    const std::vector<std::uint64_t> got = xor_translate_set(interval, n);
    REQUIRE(got == translate_oracle(interval, n));
    CHECK(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("shift rows for small n match the worked examples") {
  {
    const std::vector<ShiftRow> rows = shift_decomposition(1, 0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].source == IntervalZ{0, 1});
    CHECK(rows[0].image == delta_block(1));
    CHECK(rows[1].source == IntervalZ{1, 2});
    CHECK(rows[1].image == delta_block(0));
  }
  {
    const std::vector<ShiftRow> rows = shift_decomposition(6, 1);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].source == IntervalZ{0, 4});
    CHECK(rows[0].image == delta_block(3));
    CHECK(rows[1].source == IntervalZ{4, 6});
    CHECK(rows[1].image == delta_block(2));
    CHECK(rows[2].source == IntervalZ{6, 7});
    CHECK(rows[2].image == delta_block(0));
    CHECK(rows[3].source == IntervalZ{7, 8});
    CHECK(rows[3].image == delta_block(1));
  }
}

TEST_CASE("every shift row translates exactly onto its block") {
  for (std::uint64_t n = 1; n < 128; ++n) {
    for (std::size_t tails = 0; tails <= 3; ++tails) {
      const std::vector<ShiftRow> rows = shift_decomposition(n, tails);
      REQUIRE(rows.size() == dyadic_exponents(n).size() + 1 + tails);
      for (const ShiftRow& row : rows) {
        const std::vector<std::uint64_t> image =
            translate_oracle(row.source, n);
        REQUIRE(image.size() == row.image.size());
        REQUIRE(image.front() == row.image.lo());
        REQUIRE(image.back() == row.image.hi());
        for (std::size_t i = 0; i < image.size(); ++i) {
          REQUIRE(image[i] == row.image.lo() + i);
        }
      }
    }
  }
}

TEST_CASE("shift rows reject n = 0 and overflowing tails") {
  CHECK_THROWS_AS(shift_decomposition(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(shift_decomposition(3, 64), std::overflow_error);
  // Near the cap even one tail row overflows.
  CHECK_THROWS_AS(shift_decomposition(kIntegerCap - 1, 3),
                  std::overflow_error);
}
