#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "walshlp/dyadic_group.hpp"
#include "walshlp/rng.hpp"
#include "walshlp/walsh_transform.hpp"

using namespace walshlp;

namespace {

// Rademacher function r_k(x) = sign(sin(2^k pi x)) evaluated at the midpoint
// of cell i; never zero there, so the sign is well defined.
double rademacher_oracle(int k, std::uint64_t cell, int resolution) {
  const double x = (static_cast<double>(cell) + 0.5) /
                   static_cast<double>(std::uint64_t{1} << resolution);
  const double s = std::sin(std::ldexp(1.0, k) * std::numbers::pi * x);
  return s > 0 ? 1.0 : -1.0;
}

// w_n as the product of the Rademacher functions picked by the digits of n.
double walsh_oracle(std::uint64_t n, std::uint64_t cell, int resolution) {
  double value = 1.0;
  for (const int k : dyadic_exponents(n)) {
    value *= rademacher_oracle(k + 1, cell, resolution);
  }
  return value;
}

DyadicFunction random_f(TrialRng& rng, int resolution) {
  DyadicFunction f = DyadicFunction::zero(resolution);
  for (double& v : f.values) v = rng.gaussian();
  return f;
}

}  // namespace

TEST_CASE("walsh functions match the sine-product oracle") {
  const int resolution = 6;
  const std::uint64_t cells = std::uint64_t{1} << resolution;
  for (std::uint64_t n = 0; n < cells; ++n) {
    const DyadicFunction w = walsh_function(n, resolution);
    for (std::uint64_t i = 0; i < cells; ++i) {
      REQUIRE(w.values[i] == walsh_oracle(n, i, resolution));
    }
  }
}

TEST_CASE("small walsh functions take the classical values") {
  CHECK(walsh_function(0, 1).values == std::vector<double>{1, 1});
  CHECK(walsh_function(1, 1).values == std::vector<double>{1, -1});
  CHECK(walsh_function(1, 2).values == std::vector<double>{1, 1, -1, -1});
  CHECK(walsh_function(2, 2).values == std::vector<double>{1, -1, 1, -1});
  CHECK(walsh_function(3, 2).values == std::vector<double>{1, -1, -1, 1});
}

TEST_CASE("analysis matches the naive inner-product transform") {
  const int resolution = 7;
  const std::uint64_t cells = std::uint64_t{1} << resolution;
  TrialRng rng(3);
  for (int t = 0; t < 5; ++t) {
    const DyadicFunction f = random_f(rng, resolution);
    const WalshSpectrum spectrum = fwht_analyze(f);
    for (std::uint64_t n = 0; n < cells; ++n) {
      double inner = 0.0;
      for (std::uint64_t i = 0; i < cells; ++i) {
        inner += f.values[i] * walsh_oracle(n, i, resolution);
      }
      inner /= static_cast<double>(cells);
      REQUIRE(std::abs(spectrum.coeffs[n] - inner) <= 1e-12);
    }
  }
}

TEST_CASE("synthesis matches the naive expansion") {
  const int resolution = 7;
  const std::uint64_t cells = std::uint64_t{1} << resolution;
  TrialRng rng(4);
  WalshSpectrum spectrum = WalshSpectrum::zero(resolution);
  for (double& c : spectrum.coeffs) c = rng.gaussian();
  const DyadicFunction f = fwht_synthesize(spectrum);
  for (std::uint64_t i = 0; i < cells; ++i) {
    double sum = 0.0;
    for (std::uint64_t n = 0; n < cells; ++n) {
      sum += spectrum.coeffs[n] * walsh_oracle(n, i, resolution);
    }
    REQUIRE(std::abs(f.values[i] - sum) <= 1e-12 * std::max(1.0, std::abs(sum)));
  }
}

TEST_CASE("round trips and Parseval hold at a large resolution") {
  const int resolution = 14;
  TrialRng rng(5);
  const DyadicFunction f = random_f(rng, resolution);
  const WalshSpectrum spectrum = fwht_analyze(f);

  double energy = 0.0;
  for (const double c : spectrum.coeffs) energy += c * c;
  const double norm = lp_norm(f, 2.0);
  CHECK(std::abs(energy - norm * norm) <= 1e-12 * std::max(1.0, norm * norm));

  const DyadicFunction back = fwht_synthesize(spectrum);
  CHECK(max_abs_diff(back, f) <= 1e-12 * std::max(1.0, max_abs(f)));
}

TEST_CASE("pointwise products realize the character identity") {
  const int resolution = 5;
  const std::uint64_t cells = std::uint64_t{1} << resolution;
  for (std::uint64_t a = 0; a < cells; ++a) {
    for (std::uint64_t b = 0; b < cells; ++b) {
      const DyadicFunction product = multiply_pointwise(
          walsh_function(a, resolution), walsh_function(b, resolution));
      REQUIRE(product.values ==
              walsh_function(xor_add(a, b), resolution).values);
    }
  }
}

TEST_CASE("spectral projection keeps exactly the requested band") {
  const int resolution = 6;
  DyadicFunction f = walsh_function(5, resolution);
  add_in_place(f, walsh_function(9, resolution));
  const DyadicFunction inside =
      project_spectrum(f, IntervalZ{4, 8});
  CHECK(max_abs_diff(inside, walsh_function(5, resolution)) <= 1e-12);
  const DyadicFunction outside =
      project_spectrum(f, IntervalZ{8, 16});
  CHECK(max_abs_diff(outside, walsh_function(9, resolution)) <= 1e-12);
  CHECK_THROWS_AS(project_spectrum(f, IntervalZ{60, 65}),
                  std::invalid_argument);
}

TEST_CASE("norms agree with closed forms") {
  const int resolution = 4;
  const DyadicFunction c = DyadicFunction::constant(resolution, -2.5);
  for (const double p : {1.0, 1.3, 2.0, 3.0}) {
    CHECK(lp_norm(c, p) == doctest::Approx(2.5).epsilon(1e-12));
  }

  // Single component: the vector norm collapses to the scalar one.
  TrialRng rng(6);
  const DyadicFunction f = random_f(rng, resolution);
  VecFunction v;
  v.components.push_back(f);
  for (const double p : {1.0, 1.5, 2.0}) {
    double abs_norm = 0.0;
    for (const double x : f.values) abs_norm += std::pow(std::abs(x), p);
    abs_norm = std::pow(abs_norm / f.values.size(), 1.0 / p);
    CHECK(lp_l2_norm(v, p) == doctest::Approx(abs_norm).epsilon(1e-12));
  }

  // Two components: pointwise Pythagoras.
  VecFunction pair;
  pair.components.push_back(DyadicFunction::constant(resolution, 3.0));
  pair.components.push_back(DyadicFunction::constant(resolution, 4.0));
  for (const double p : {1.0, 1.7, 2.0}) {
    CHECK(lp_l2_norm(pair, p) == doctest::Approx(5.0).epsilon(1e-12));
  }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(walsh_function(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(walsh_function(0, -1), std::invalid_argument);
  CHECK_THROWS_AS(walsh_function(0, 21), std::invalid_argument);
  CHECK_THROWS_AS(lp_norm(DyadicFunction::constant(2, 1.0), 0.5),
                  std::invalid_argument);

  DyadicFunction bad = DyadicFunction::constant(3, 1.0);
  bad.values.pop_back();
  CHECK_THROWS_AS(fwht_analyze(bad), std::invalid_argument);

  const DyadicFunction f2 = DyadicFunction::constant(2, 1.0);
  const DyadicFunction f3 = DyadicFunction::constant(3, 1.0);
  CHECK_THROWS_AS(multiply_pointwise(f2, f3), std::invalid_argument);
}
