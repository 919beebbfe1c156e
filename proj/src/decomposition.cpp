#include "walshlp/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>

#include "walshlp/errors.hpp"

namespace walshlp {

namespace {

constexpr double kIdentityTol = 1e-12;

std::string interval_text(const IntervalZ& interval) {
  return "[" + std::to_string(interval.a) + ", " + std::to_string(interval.b) +
         ")";
}

double norm_from_square_sums(const std::vector<double>& sumsq, double p) {
  double acc = 0.0;
  for (const double s : sumsq) acc += std::pow(s, 0.5 * p);
  return std::pow(acc / static_cast<double>(sumsq.size()), 1.0 / p);
}

void accumulate_squares(const DyadicFunction& f, std::vector<double>& acc) {
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc[i] += f.values[i] * f.values[i];
  }
}

}  // namespace

IntervalPartition partition_interval(const IntervalZ& interval) {
  if (!(interval.a < interval.b)) {
    throw std::invalid_argument("partition_interval: empty interval " +
                                interval_text(interval));
  }
  if (interval.b > kIntegerCap) {
    throw std::overflow_error(
        "partition_interval: endpoint exceeds the integer cap");
  }
  const std::uint64_t a = interval.a;
  const std::uint64_t b = interval.b;

  IntervalPartition part;
  part.interval = interval;
  part.singleton = a;
  part.ktilde = dyadic_exponents(b);
  part.r = part.ktilde.size();

  // Highest digit where a and b differ.  Since a < b it is a set digit of b
  // and a clear digit of a, and above it the digits agree; this pins the
  // split position uniquely.
  const int top_diff = std::bit_width(a ^ b) - 1;
  part.rho = 0;
  for (std::size_t i = 0; i < part.r; ++i) {
    if (part.ktilde[i] == top_diff) {
      part.rho = i + 1;
      break;
    }
  }
  if (part.rho == 0) {
    throw std::logic_error("partition_interval: split digit not found");
  }

  // Left pieces fill the clear digits of a strictly below the split digit.
  const std::uint64_t mask =
      top_diff == 0 ? 0 : (std::uint64_t{1} << top_diff) - 1;
  const std::size_t zeros_below =
      static_cast<std::size_t>(top_diff) -
      static_cast<std::size_t>(std::popcount(a & mask));
  part.q = zeros_below + 1;
  if (zeros_below > 0) {
    part.kappa = complement_exponents(a, zeros_below);
  }
  std::uint64_t end = a;
  for (const int k : part.kappa) {
    const std::uint64_t next = end + (std::uint64_t{1} << k);
    part.left_pieces.push_back({end + 1, next + 1});
    end = next;
  }

  // The left pieces stop exactly where the digit prefix of b begins.
  std::uint64_t tail_lo = 0;
  for (std::size_t l = 0; l < part.rho; ++l) {
    tail_lo += std::uint64_t{1} << part.ktilde[l];
  }
  if (end + 1 != tail_lo) {
    throw std::logic_error("partition_interval: boundary identity violated");
  }

  std::uint64_t lo = tail_lo;
  for (std::size_t i = part.rho; i < part.r; ++i) {
    const std::uint64_t next = lo + (std::uint64_t{1} << part.ktilde[i]);
    part.tail_pieces.push_back({lo, next});
    lo = next;
  }
  if (lo != b) {
    throw std::logic_error("partition_interval: tail does not reach b");
  }
  return part;
}

IntervalZ left_interval(std::uint64_t a, std::size_t j) {
  if (j == 0) {
    throw std::invalid_argument("left_interval: j must be >= 1");
  }
  const std::vector<int> kappa = complement_exponents(a, j);
  std::uint64_t end = a;
  for (const int k : kappa) {
    if (k > 61 || end > kIntegerCap - (std::uint64_t{1} << k)) {
      throw std::overflow_error("left_interval: exceeds the integer cap");
    }
    end += std::uint64_t{1} << k;
  }
  const std::uint64_t start = end - (std::uint64_t{1} << kappa.back()) + 1;
  return {start, end + 1};
}

DecomposedFunction decompose_function(const DyadicFunction& f,
                                      const IntervalZ& interval) {
  const std::uint64_t cells = std::uint64_t{1} << f.resolution;
  if (f.values.size() != cells) {
    throw std::invalid_argument(
        "decompose_function: cell count does not match resolution");
  }
  if (!(interval.a < interval.b)) {
    throw std::invalid_argument("decompose_function: empty interval " +
                                interval_text(interval));
  }
  if (interval.b > cells) {
    throw std::invalid_argument(
        "decompose_function: interval " + interval_text(interval) +
        " exceeds the spectral range [0, 2^" + std::to_string(f.resolution) +
        "]");
  }

  const WalshSpectrum spectrum = fwht_analyze(f);
  const double scale = std::max(1.0, max_abs(f));
  for (std::size_t n = 0; n < spectrum.coeffs.size(); ++n) {
    if (!interval.contains(n) &&
        std::abs(spectrum.coeffs[n]) > kIdentityTol * scale) {
      throw std::invalid_argument("decompose_function: spectrum escapes " +
                                  interval_text(interval) + " at index " +
                                  std::to_string(n));
    }
  }

  DecomposedFunction d;
  d.partition = partition_interval(interval);

  const auto restricted = [&](std::uint64_t lo, std::uint64_t hi) {
    WalshSpectrum s = WalshSpectrum::zero(f.resolution);
    for (std::uint64_t n = lo; n < hi; ++n) s.coeffs[n] = spectrum.coeffs[n];
    return fwht_synthesize(s);
  };

  d.piece0 = restricted(interval.a, interval.a + 1);
  for (const IntervalZ& piece : d.partition.left_pieces) {
    d.left.push_back(restricted(piece.a, piece.b));
  }
  for (const IntervalZ& piece : d.partition.tail_pieces) {
    d.tail.push_back(restricted(piece.a, piece.b));
  }

  const DyadicFunction wa = walsh_function(interval.a, f.resolution);
  d.g0 = multiply_pointwise(wa, d.piece0);
  for (const DyadicFunction& piece : d.left) {
    d.g_left.push_back(multiply_pointwise(wa, piece));
  }
  if (!d.tail.empty()) {
    // A nonempty tail forces b to have a digit below the split digit, hence
    // at least two digits, hence b < 2^K and w_b exists at this resolution.
    const DyadicFunction wb = walsh_function(interval.b, f.resolution);
    for (const DyadicFunction& piece : d.tail) {
      d.g_tail.push_back(multiply_pointwise(wb, piece));
    }
  }
  d.g_merged =
      multiply_pointwise(wa, restricted(d.partition.tail_begin(), interval.b));
  return d;
}

void validate_instance(const Instance& instance) {
  if (instance.empty()) {
    throw std::invalid_argument(
        "instance must contain at least one interval");
  }
  const int resolution = instance.front().f.resolution;
  const std::uint64_t cells = std::uint64_t{1} << resolution;
  for (const IntervalFunction& member : instance) {
    if (member.f.resolution != resolution) {
      throw std::invalid_argument("instance: resolution mismatch at interval " +
                                  interval_text(member.interval));
    }
    if (!(member.interval.a < member.interval.b)) {
      throw std::invalid_argument("instance: empty interval " +
                                  interval_text(member.interval));
    }
    if (member.interval.b > cells) {
      throw std::invalid_argument(
          "instance: interval " + interval_text(member.interval) +
          " exceeds the spectral range [0, 2^" + std::to_string(resolution) +
          "]");
    }
  }
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return instance[x].interval.a < instance[y].interval.a;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const IntervalZ& prev = instance[order[i - 1]].interval;
    const IntervalZ& next = instance[order[i]].interval;
    if (next.a < prev.b) {
      throw std::invalid_argument("instance: intervals " +
                                  interval_text(prev) + " and " +
                                  interval_text(next) + " overlap");
    }
  }
}

DecomposedInstance decompose_instance(const Instance& instance) {
  validate_instance(instance);
  DecomposedInstance out;
  out.resolution = instance.front().f.resolution;
  out.members = instance;
  out.parts.reserve(instance.size());
  for (const IntervalFunction& member : instance) {
    out.parts.push_back(decompose_function(member.f, member.interval));
  }
  return out;
}

ChainReport chain_report(const DecomposedInstance& decomposed, double p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw std::invalid_argument("chain_report: p must lie in (1, 2]");
  }
  if (decomposed.members.empty()) {
    throw std::invalid_argument("chain_report: empty instance");
  }
  const int K = decomposed.resolution;
  const std::size_t cells = std::size_t{1} << K;

  DyadicFunction total = DyadicFunction::zero(K);
  std::vector<double> left_sq(cells, 0.0);      // g0 and the left pieces
  std::vector<double> tail_sq(cells, 0.0);      // individual tail pieces
  std::vector<double> tail_sum_sq(cells, 0.0);  // per-interval tail sums
  std::vector<double> merged_sq(cells, 0.0);    // merged tail pieces
  std::vector<double> delta_sq(cells, 0.0);     // differences of w_a * f_m
  std::vector<double> f_sq(cells, 0.0);
  std::vector<double> g_sq(cells, 0.0);

  for (std::size_t m = 0; m < decomposed.members.size(); ++m) {
    const IntervalFunction& member = decomposed.members[m];
    const DecomposedFunction& part = decomposed.parts[m];

    add_in_place(total, member.f);
    accumulate_squares(member.f, f_sq);

    accumulate_squares(part.g0, left_sq);
    for (const DyadicFunction& piece : part.g_left) {
      accumulate_squares(piece, left_sq);
    }
    for (const DyadicFunction& piece : part.g_tail) {
      accumulate_squares(piece, tail_sq);
    }
    DyadicFunction tail_sum = DyadicFunction::zero(K);
    for (const DyadicFunction& piece : part.g_tail) {
      add_in_place(tail_sum, piece);
    }
    accumulate_squares(tail_sum, tail_sum_sq);
    accumulate_squares(part.g_merged, merged_sq);

    const DyadicFunction g_m = multiply_pointwise(
        walsh_function(member.interval.a, K), member.f);
    accumulate_squares(g_m, g_sq);
    {
      // sum_k |D_k g_m|^2 added pointwise
      VecFunction single;
      single.components.push_back(g_m);
      const DyadicFunction s = square_function_vec(single);
      for (std::size_t i = 0; i < cells; ++i) {
        delta_sq[i] += s.values[i] * s.values[i];
      }
    }
  }

  ChainReport report;
  report.sum_norm = lp_norm(total, p);
  {
    std::vector<double> both(cells);
    for (std::size_t i = 0; i < cells; ++i) both[i] = left_sq[i] + tail_sq[i];
    report.relocated_family_norm = norm_from_square_sums(both, p);
  }
  report.left_family_norm = norm_from_square_sums(left_sq, p);
  report.tail_sum_family_norm = norm_from_square_sums(tail_sum_sq, p);
  {
    std::vector<double> merged(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      merged[i] = left_sq[i] + merged_sq[i];
    }
    report.merged_family_norm = norm_from_square_sums(merged, p);
  }
  report.merged_delta_norm = norm_from_square_sums(delta_sq, p);
  report.family_norm = norm_from_square_sums(f_sq, p);
  const double modulated_family_norm = norm_from_square_sums(g_sq, p);

  const double d_scale = std::max(
      {1.0, report.merged_family_norm, report.merged_delta_norm});
  if (std::abs(report.merged_family_norm - report.merged_delta_norm) >
      kIdentityTol * d_scale) {
    throw VerificationError(
        "chain_report: merged-piece norm disagrees with the martingale "
        "difference form");
  }
  const double e_scale =
      std::max({1.0, report.family_norm, modulated_family_norm});
  if (std::abs(report.family_norm - modulated_family_norm) >
      kIdentityTol * e_scale) {
    throw VerificationError(
        "chain_report: modulation changed the family norm");
  }

  report.ratio =
      report.family_norm > 0.0 ? report.sum_norm / report.family_norm : 0.0;
  return report;
}

ChainReport theorem_chain(const Instance& instance, double p) {
  return chain_report(decompose_instance(instance), p);
}

std::pair<IndexedFamily, RelocationAssignment> relocation_for_instance(
    const Instance& instance) {
  const DecomposedInstance decomposed = decompose_instance(instance);
  IndexedFamily family;
  RelocationAssignment assignment;
  std::uint64_t slot = 0;

  for (std::size_t m = 0; m < decomposed.members.size(); ++m) {
    const IntervalFunction& member = decomposed.members[m];
    const DecomposedFunction& part = decomposed.parts[m];

    family.entries.emplace(MultiIndex{slot, 0}, part.g0);
    assignment.shifts.emplace(MultiIndex{slot, 0}, member.interval.a);
    ++slot;

    for (std::size_t j = 0; j < part.g_left.size(); ++j) {
      const MultiIndex idx{slot, part.partition.kappa[j] + 1};
      family.entries.emplace(idx, part.g_left[j]);
      assignment.shifts.emplace(idx, member.interval.a);
      ++slot;
    }
    for (std::size_t i = 0; i < part.g_tail.size(); ++i) {
      const MultiIndex idx{
          slot, part.partition.ktilde[part.partition.rho + i] + 1};
      family.entries.emplace(idx, part.g_tail[i]);
      assignment.shifts.emplace(idx, member.interval.b);
      ++slot;
    }
  }
  return {std::move(family), std::move(assignment)};
}

}  // namespace walshlp
