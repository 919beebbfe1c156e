#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "walshlp/dyadic_group.hpp"

namespace walshlp {

// Step functions on [0, 1] with dyadic cells, their Walsh-Paley spectra, and
// the fast Walsh-Hadamard transform connecting the two.  Resolution K means
// 2^K cells; the transform is O(K 2^K).

inline constexpr int kMaxResolution = 20;

// Real step function, constant on the half-open cells [i 2^-K, (i+1) 2^-K).
struct DyadicFunction {
  int resolution = 0;
  std::vector<double> values;  // 2^resolution entries, cell order

  static DyadicFunction zero(int resolution);
  static DyadicFunction constant(int resolution, double value);
  std::size_t cells() const { return values.size(); }
};

// Walsh coefficients (f, w_n) for 0 <= n < 2^K, in Walsh-Paley order.
struct WalshSpectrum {
  int resolution = 0;
  std::vector<double> coeffs;

  static WalshSpectrum zero(int resolution);
};

// Ordered finite family of step functions sharing one resolution; the value
// at a point is read as an l^2 sequence.
struct VecFunction {
  std::vector<DyadicFunction> components;

  int resolution() const;
};

// w_n in Walsh-Paley order: w_0 = 1 and, for n > 0, the product of the
// Rademacher functions r_{k+1} over the set binary digits k of n.  Values
// are exactly +-1.  Requires n < 2^resolution.
DyadicFunction walsh_function(std::uint64_t n, int resolution);

// coeffs[n] = integral of f * w_n over [0, 1].
WalshSpectrum fwht_analyze(const DyadicFunction& f);

// Pointwise sum of coeffs[n] * w_n; inverse of fwht_analyze.
DyadicFunction fwht_synthesize(const WalshSpectrum& s);

// Zeroes every Walsh coefficient outside `s`.  Idempotent, linear, and a
// contraction in L^2.  Every element of `s` must be < 2^resolution.
DyadicFunction project_spectrum(const DyadicFunction& f,
                                std::span<const std::uint64_t> s);
DyadicFunction project_spectrum(const DyadicFunction& f, const IntervalZ& s);

DyadicFunction multiply_pointwise(const DyadicFunction& f,
                                  const DyadicFunction& g);

// Exact L^p([0, 1]) norm of the step function, 1 <= p < infinity.
double lp_norm(const DyadicFunction& f, double p);

// L^p(l^2) norm: (2^-K sum_i (sum_m v_m[i]^2)^{p/2})^{1/p}.
double lp_l2_norm(const VecFunction& v, double p);

// Value-semantics helpers used throughout the pipeline.
DyadicFunction add(const DyadicFunction& f, const DyadicFunction& g);
DyadicFunction subtract(const DyadicFunction& f, const DyadicFunction& g);
void add_in_place(DyadicFunction& f, const DyadicFunction& g);
double max_abs(const DyadicFunction& f);
double max_abs_diff(const DyadicFunction& f, const DyadicFunction& g);

}  // namespace walshlp
