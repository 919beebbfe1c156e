#include "walshlp/walsh_transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace walshlp {

namespace {

void check_resolution(int resolution, const char* what) {
  if (resolution < 0 || resolution > kMaxResolution) {
    throw std::invalid_argument(std::string(what) +
                                ": resolution must lie in [0, " +
                                std::to_string(kMaxResolution) + "], got " +
                                std::to_string(resolution));
  }
}

void check_function(const DyadicFunction& f, const char* what) {
  check_resolution(f.resolution, what);
  if (f.values.size() != (std::size_t{1} << f.resolution)) {
    throw std::invalid_argument(std::string(what) +
                                ": cell count does not match resolution");
  }
}

void check_spectrum(const WalshSpectrum& s, const char* what) {
  check_resolution(s.resolution, what);
  if (s.coeffs.size() != (std::size_t{1} << s.resolution)) {
    throw std::invalid_argument(
        std::string(what) + ": coefficient count does not match resolution");
  }
}

void check_same_resolution(const DyadicFunction& f, const DyadicFunction& g,
                           const char* what) {
  check_function(f, what);
  check_function(g, what);
  if (f.resolution != g.resolution) {
    throw std::invalid_argument(std::string(what) + ": resolution mismatch (" +
                                std::to_string(f.resolution) + " vs " +
                                std::to_string(g.resolution) + ")");
  }
}

// In-place Walsh-Hadamard butterflies in natural (Hadamard) order:
// out[m] = sum_i (-1)^{popcount(m & i)} in[i].  The stages commute, so any
// stage order computes the same transform.
void wht_in_place(std::vector<double>& x) {
  const std::size_t n = x.size();
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t block = 0; block < n; block += half << 1) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double u = x[i];
        const double v = x[i + half];
        x[i] = u + v;
        x[i + half] = u - v;
      }
    }
  }
}

// rev[i] = the `bits`-bit reversal of i.  Composing the natural-order
// transform with this permutation of the cell index yields the Walsh-Paley
// order: w_n(cell i) = (-1)^{popcount(n & rev(i))}.
std::vector<std::uint32_t> reversal_table(int bits) {
  std::vector<std::uint32_t> rev(std::size_t{1} << bits, 0);
  for (std::size_t i = 1; i < rev.size(); ++i) {
    rev[i] = (rev[i >> 1] >> 1) |
             static_cast<std::uint32_t>((i & 1u) << (bits - 1));
  }
  return rev;
}

}  // namespace

DyadicFunction DyadicFunction::zero(int resolution) {
  check_resolution(resolution, "DyadicFunction::zero");
  return {resolution, std::vector<double>(std::size_t{1} << resolution, 0.0)};
}

DyadicFunction DyadicFunction::constant(int resolution, double value) {
  check_resolution(resolution, "DyadicFunction::constant");
  return {resolution,
          std::vector<double>(std::size_t{1} << resolution, value)};
}

WalshSpectrum WalshSpectrum::zero(int resolution) {
  check_resolution(resolution, "WalshSpectrum::zero");
  return {resolution, std::vector<double>(std::size_t{1} << resolution, 0.0)};
}

int VecFunction::resolution() const {
  if (components.empty()) {
    throw std::invalid_argument("VecFunction: empty family");
  }
  return components.front().resolution;
}

DyadicFunction walsh_function(std::uint64_t n, int resolution) {
  check_resolution(resolution, "walsh_function");
  const std::uint64_t cells = std::uint64_t{1} << resolution;
  if (n >= cells) {
    throw std::invalid_argument("walsh_function: index " + std::to_string(n) +
                                " is outside [0, 2^" +
                                std::to_string(resolution) + ")");
  }
  DyadicFunction w = DyadicFunction::constant(resolution, 1.0);
  for (const int k : dyadic_exponents(n)) {
    // r_{k+1} is -1 exactly on cells whose address bit (resolution - k - 1)
    // is set.
    const int bit = resolution - k - 1;
    for (std::uint64_t i = 0; i < cells; ++i) {
      if ((i >> bit) & 1u) w.values[i] = -w.values[i];
    }
  }
  return w;
}

WalshSpectrum fwht_analyze(const DyadicFunction& f) {
  check_function(f, "fwht_analyze");
  const std::vector<std::uint32_t> rev = reversal_table(f.resolution);
  WalshSpectrum s;
  s.resolution = f.resolution;
  s.coeffs.resize(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    s.coeffs[i] = f.values[rev[i]];
  }
  wht_in_place(s.coeffs);
  const double scale = 1.0 / static_cast<double>(f.values.size());
  for (double& c : s.coeffs) c *= scale;
  return s;
}

DyadicFunction fwht_synthesize(const WalshSpectrum& s) {
  check_spectrum(s, "fwht_synthesize");
  std::vector<double> work = s.coeffs;
  wht_in_place(work);
  const std::vector<std::uint32_t> rev = reversal_table(s.resolution);
  DyadicFunction f;
  f.resolution = s.resolution;
  f.values.resize(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    f.values[i] = work[rev[i]];
  }
  return f;
}

DyadicFunction project_spectrum(const DyadicFunction& f,
                                std::span<const std::uint64_t> s) {
  check_function(f, "project_spectrum");
  WalshSpectrum spec = fwht_analyze(f);
  std::vector<char> keep(spec.coeffs.size(), 0);
  for (const std::uint64_t n : s) {
    if (n >= spec.coeffs.size()) {
      throw std::invalid_argument("project_spectrum: index " +
                                  std::to_string(n) + " is outside [0, 2^" +
                                  std::to_string(f.resolution) + ")");
    }
    keep[n] = 1;
  }
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    if (!keep[i]) spec.coeffs[i] = 0.0;
  }
  return fwht_synthesize(spec);
}

DyadicFunction project_spectrum(const DyadicFunction& f, const IntervalZ& s) {
  check_function(f, "project_spectrum");
  if (!(s.a < s.b)) {
    throw std::invalid_argument("project_spectrum: empty interval");
  }
  if (s.b > (std::uint64_t{1} << f.resolution)) {
    throw std::invalid_argument("project_spectrum: interval [" +
                                std::to_string(s.a) + ", " +
                                std::to_string(s.b) + ") is outside [0, 2^" +
                                std::to_string(f.resolution) + ")");
  }
  WalshSpectrum spec = fwht_analyze(f);
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    if (!s.contains(i)) spec.coeffs[i] = 0.0;
  }
  return fwht_synthesize(spec);
}

DyadicFunction multiply_pointwise(const DyadicFunction& f,
                                  const DyadicFunction& g) {
  check_same_resolution(f, g, "multiply_pointwise");
  DyadicFunction out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] *= g.values[i];
  }
  return out;
}

double lp_norm(const DyadicFunction& f, double p) {
  check_function(f, "lp_norm");
  if (!(p >= 1.0)) {
    throw std::invalid_argument("lp_norm: p must be >= 1");
  }
  double acc = 0.0;
  for (const double v : f.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc / static_cast<double>(f.values.size()), 1.0 / p);
}

double lp_l2_norm(const VecFunction& v, double p) {
  if (v.components.empty()) {
    throw std::invalid_argument("lp_l2_norm: empty family");
  }
  if (!(p >= 1.0)) {
    throw std::invalid_argument("lp_l2_norm: p must be >= 1");
  }
  const int resolution = v.components.front().resolution;
  std::vector<double> sumsq(std::size_t{1} << resolution, 0.0);
  for (const DyadicFunction& c : v.components) {
    check_function(c, "lp_l2_norm");
    if (c.resolution != resolution) {
      throw std::invalid_argument("lp_l2_norm: resolution mismatch");
    }
    for (std::size_t i = 0; i < sumsq.size(); ++i) {
      sumsq[i] += c.values[i] * c.values[i];
    }
  }
  double acc = 0.0;
  for (const double s : sumsq) acc += std::pow(s, 0.5 * p);
  return std::pow(acc / static_cast<double>(sumsq.size()), 1.0 / p);
}

DyadicFunction add(const DyadicFunction& f, const DyadicFunction& g) {
  check_same_resolution(f, g, "add");
  DyadicFunction out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] += g.values[i];
  }
  return out;
}

DyadicFunction subtract(const DyadicFunction& f, const DyadicFunction& g) {
  check_same_resolution(f, g, "subtract");
  DyadicFunction out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] -= g.values[i];
  }
  return out;
}

void add_in_place(DyadicFunction& f, const DyadicFunction& g) {
  check_same_resolution(f, g, "add_in_place");
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.values[i] += g.values[i];
  }
}

double max_abs(const DyadicFunction& f) {
  check_function(f, "max_abs");
  double m = 0.0;
  for (const double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const DyadicFunction& f, const DyadicFunction& g) {
  check_same_resolution(f, g, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    m = std::max(m, std::abs(f.values[i] - g.values[i]));
  }
  return m;
}

}  // namespace walshlp
