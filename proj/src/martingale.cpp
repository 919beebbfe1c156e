#include "walshlp/martingale.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "walshlp/dyadic_group.hpp"

namespace walshlp {

namespace {

void check_level(const DyadicFunction& f, int level, const char* what) {
  if (f.values.size() != (std::size_t{1} << f.resolution)) {
    throw std::invalid_argument(std::string(what) +
                                ": cell count does not match resolution");
  }
  if (level < 0 || level > f.resolution) {
    throw std::invalid_argument(std::string(what) + ": level " +
                                std::to_string(level) +
                                " is outside [0, resolution]");
  }
}

// Cell averages of f at every level: pyramid[k] has 2^k entries, the means
// of f over the cells of length 2^-k.
std::vector<std::vector<double>> average_pyramid(const DyadicFunction& f) {
  std::vector<std::vector<double>> pyramid(f.resolution + 1);
  pyramid[f.resolution] = f.values;
  for (int k = f.resolution; k > 0; --k) {
    const std::vector<double>& src = pyramid[k];
    std::vector<double>& dst = pyramid[k - 1];
    dst.resize(src.size() / 2);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst[i] = 0.5 * (src[2 * i] + src[2 * i + 1]);
    }
  }
  return pyramid;
}

// Adds sum_{k=0}^{K} |D_k f|^2, evaluated per cell, onto acc.
void accumulate_difference_squares(const DyadicFunction& f,
                                   std::vector<double>& acc) {
  const int K = f.resolution;
  const std::vector<std::vector<double>> pyramid = average_pyramid(f);
  const double base = pyramid[0][0];
  for (std::size_t i = 0; i < acc.size(); ++i) {
    double cell = base * base;
    for (int k = 1; k <= K; ++k) {
      const double d =
          pyramid[k][i >> (K - k)] - pyramid[k - 1][i >> (K - k + 1)];
      cell += d * d;
    }
    acc[i] += cell;
  }
}

}  // namespace

DyadicFunction conditional_expectation(const DyadicFunction& f, int level) {
  check_level(f, level, "conditional_expectation");
  if (level == f.resolution) return f;
  const std::size_t block = std::size_t{1} << (f.resolution - level);
  DyadicFunction out = f;
  for (std::size_t start = 0; start < out.values.size(); start += block) {
    double sum = 0.0;
    for (std::size_t i = 0; i < block; ++i) sum += f.values[start + i];
    const double mean = sum / static_cast<double>(block);
    for (std::size_t i = 0; i < block; ++i) out.values[start + i] = mean;
  }
  return out;
}

DyadicFunction martingale_difference(const DyadicFunction& f, int level) {
  check_level(f, level, "martingale_difference");
  if (level == 0) return conditional_expectation(f, 0);
  return subtract(conditional_expectation(f, level),
                  conditional_expectation(f, level - 1));
}

DyadicFunction square_function(const DyadicFunction& f) {
  check_level(f, 0, "square_function");
  std::vector<double> acc(f.values.size(), 0.0);
  accumulate_difference_squares(f, acc);
  DyadicFunction out = DyadicFunction::zero(f.resolution);
  for (std::size_t i = 0; i < acc.size(); ++i) out.values[i] = std::sqrt(acc[i]);
  return out;
}

DyadicFunction square_function_vec(const VecFunction& v) {
  const int resolution = v.resolution();
  std::vector<double> acc(std::size_t{1} << resolution, 0.0);
  for (const DyadicFunction& c : v.components) {
    if (c.resolution != resolution) {
      throw std::invalid_argument("square_function_vec: resolution mismatch");
    }
    accumulate_difference_squares(c, acc);
  }
  DyadicFunction out = DyadicFunction::zero(resolution);
  for (std::size_t i = 0; i < acc.size(); ++i) out.values[i] = std::sqrt(acc[i]);
  return out;
}

DyadicFunction relocation_operator(const IndexedFamily& h,
                                   const RelocationAssignment& shifts) {
  if (h.entries.empty()) {
    throw std::invalid_argument("relocation_operator: empty family");
  }
  if (h.entries.size() != shifts.shifts.size()) {
    throw std::invalid_argument(
        "relocation_operator: family and assignment index sets differ");
  }
  const int resolution = h.entries.begin()->second.resolution;
  const std::uint64_t cells = std::uint64_t{1} << resolution;

  // Admissibility: shared index set, one resolution, relocated blocks
  // pairwise disjoint inside [0, 2^K).
  std::vector<char> used(cells, 0);
  auto shift_it = shifts.shifts.begin();
  for (auto entry_it = h.entries.begin(); entry_it != h.entries.end();
       ++entry_it, ++shift_it) {
    const MultiIndex& idx = entry_it->first;
    if (shift_it->first != idx) {
      throw std::invalid_argument(
          "relocation_operator: family and assignment index sets differ");
    }
    if (entry_it->second.resolution != resolution) {
      throw std::invalid_argument("relocation_operator: resolution mismatch");
    }
    if (idx.k < 0 || idx.k > resolution) {
      throw std::invalid_argument(
          "relocation_operator: level " + std::to_string(idx.k) +
          " relocates outside the spectral range [0, 2^" +
          std::to_string(resolution) + ")");
    }
    const std::uint64_t shift = shift_it->second;
    if (shift >= cells) {
      throw std::invalid_argument(
          "relocation_operator: shift " + std::to_string(shift) +
          " relocates outside the spectral range [0, 2^" +
          std::to_string(resolution) + ")");
    }
    const DeltaBlock block = delta_block(idx.k);
    for (std::uint64_t x = block.lo(); x <= block.hi(); ++x) {
      const std::uint64_t y = xor_add(x, shift);
      if (used[y]) {
        throw std::invalid_argument(
            "relocation_operator: relocated blocks overlap at index " +
            std::to_string(y));
      }
      used[y] = 1;
    }
  }

  DyadicFunction out = DyadicFunction::zero(resolution);
  for (const auto& [idx, fn] : h.entries) {
    const DyadicFunction term = multiply_pointwise(
        walsh_function(shifts.shifts.at(idx), resolution),
        martingale_difference(fn, idx.k));
    add_in_place(out, term);
  }
  return out;
}

double distribution_tail(const DyadicFunction& f, double lambda) {
  check_level(f, 0, "distribution_tail");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("distribution_tail: lambda must be positive");
  }
  std::size_t count = 0;
  for (const double v : f.values) {
    if (std::abs(v) > lambda) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(f.values.size());
}

}  // namespace walshlp
