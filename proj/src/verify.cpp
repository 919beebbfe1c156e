#include "walshlp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "walshlp/decomposition.hpp"
#include "walshlp/dyadic_group.hpp"
#include "walshlp/martingale.hpp"
#include "walshlp/rng.hpp"
#include "walshlp/walsh_transform.hpp"

namespace walshlp::checks {

namespace {

constexpr double kIdentityTol = 1e-12;

[[noreturn]] void fail(const std::string& message) {
  throw VerificationError(message);
}

bool equals_block(const std::vector<std::uint64_t>& sorted,
                  const DeltaBlock& block) {
  if (sorted.size() != block.size()) return false;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != block.lo() + i) return false;
  }
  return true;
}

DyadicFunction random_function(TrialRng& rng, int resolution) {
  DyadicFunction f = DyadicFunction::zero(resolution);
  for (double& v : f.values) v = rng.gaussian();
  return f;
}

// Largest spectral coefficient outside the block, for localization checks.
double block_leakage(const DyadicFunction& piece, const DeltaBlock& block) {
  const WalshSpectrum spectrum = fwht_analyze(piece);
  double leak = 0.0;
  for (std::size_t n = 0; n < spectrum.coeffs.size(); ++n) {
    if (!block.contains(n)) {
      leak = std::max(leak, std::abs(spectrum.coeffs[n]));
    }
  }
  return leak;
}

std::string count_text(std::uint64_t n) { return std::to_string(n); }

std::string fixed6(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

InstanceSpec derived_trial_spec(const InstanceSpec& spec, std::size_t trial) {
  InstanceSpec out = spec;
  out.seed = TrialRng::derive_stream(spec.seed, trial);
  const bool cycles = spec.family == IntervalFamily::RandomDisjoint ||
                      spec.family == IntervalFamily::Singletons;
  if (cycles && spec.max_intervals > 2) {
    out.max_intervals = 2 + trial % (spec.max_intervals - 1);
  }
  return out;
}

}  // namespace

std::string group_axioms(std::uint64_t max_n) {
  if (max_n == 0) {
    throw std::invalid_argument("group_axioms: max_n must be >= 1");
  }
  for (std::uint64_t a = 0; a < max_n; ++a) {
    if (xor_add(a, 0) != a) {
      fail("group axioms: identity fails at a = " + count_text(a));
    }
    if (xor_add(a, a) != 0) {
      fail("group axioms: self-inverse fails at a = " + count_text(a));
    }
  }
  for (std::uint64_t a = 0; a < max_n; ++a) {
    for (std::uint64_t b = 0; b < max_n; ++b) {
      if (xor_add(a, b) != xor_add(b, a)) {
        fail("group axioms: commutativity fails at (" + count_text(a) + ", " +
             count_text(b) + ")");
      }
      for (std::uint64_t c = 0; c < max_n; ++c) {
        if (xor_add(xor_add(a, b), c) != xor_add(a, xor_add(b, c))) {
          fail("group axioms: associativity fails at (" + count_text(a) +
               ", " + count_text(b) + ", " + count_text(c) + ")");
        }
      }
    }
  }
  return "identity, self-inverse, commutativity, associativity for all "
         "a, b, c < " +
         count_text(max_n);
}

std::string shift_rows(std::uint64_t max_n, std::size_t tail_rows) {
  if (max_n < 2) {
    throw std::invalid_argument("shift_rows: max_n must be >= 2");
  }
  for (std::uint64_t n = 1; n < max_n; ++n) {
    const std::vector<ShiftRow> rows = shift_decomposition(n, tail_rows);
    const DyadicExponents exps = dyadic_exponents(n);

    // Every row translates exactly onto its block.
    for (const ShiftRow& row : rows) {
      if (!equals_block(xor_translate_set(row.source, n), row.image)) {
        fail("shift rows: source [" + count_text(row.source.a) + ", " +
             count_text(row.source.b) + ") does not map onto its block at "
             "n = " + count_text(n));
      }
    }

    // The digit rows tile [0, n - 1] and their images union to the
    // translate of [0, n).
    std::uint64_t expect_start = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (rows[i].source.a != expect_start) {
        fail("shift rows: digit sources do not tile [0, n) at n = " +
             count_text(n));
      }
      expect_start = rows[i].source.b;
    }
    if (expect_start != n) {
      fail("shift rows: digit sources stop short of n at n = " +
           count_text(n));
    }
    {
      std::vector<std::uint64_t> image_union;
      for (std::size_t i = exps.size(); i-- > 0;) {
        const DeltaBlock block = rows[i].image;
        for (std::uint64_t x = block.lo(); x <= block.hi(); ++x) {
          image_union.push_back(x);
        }
      }
      if (xor_translate_set(IntervalZ{0, n}, n) != image_union) {
        fail("shift rows: translate of [0, n) misses the block union at "
             "n = " + count_text(n));
      }
    }

    // {n} lands on delta_0, and the tail prefix unions to {0} plus its
    // blocks.
    const std::size_t mid = exps.size();
    if (rows[mid].source.a != n || rows[mid].image.k != 0) {
      fail("shift rows: the singleton row is malformed at n = " +
           count_text(n));
    }
    if (tail_rows > 0) {
      std::vector<std::uint64_t> image_union = {0};
      for (std::size_t j = 0; j < tail_rows; ++j) {
        const DeltaBlock block = rows[mid + 1 + j].image;
        for (std::uint64_t x = block.lo(); x <= block.hi(); ++x) {
          image_union.push_back(x);
        }
      }
      const std::uint64_t end = rows.back().source.b;
      if (xor_translate_set(IntervalZ{n, end}, n) != image_union) {
        fail("shift rows: the tail prefix union identity fails at n = " +
             count_text(n));
      }
    }
  }
  return "all rows vs brute-force translation for 1 <= n < " +
         count_text(max_n) + " with " + count_text(tail_rows) + " tail rows";
}

std::string partitions(std::uint64_t max_b) {
  if (max_b == 0) {
    throw std::invalid_argument("partitions: max_b must be >= 1");
  }
  std::uint64_t checked = 0;
  for (std::uint64_t b = 1; b <= max_b; ++b) {
    for (std::uint64_t a = 0; a < b; ++a) {
      const IntervalZ interval{a, b};
      const IntervalPartition part = partition_interval(interval);
      const std::string where =
          " for [" + count_text(a) + ", " + count_text(b) + ")";

      // Disjoint exact cover of [a, b).
      std::vector<char> hit(b - a, 0);
      const auto mark = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t x = lo; x < hi; ++x) {
          if (x < a || x >= b) fail("partition piece leaves the interval" + where);
          if (hit[x - a]) fail("partition pieces overlap" + where);
          hit[x - a] = 1;
        }
      };
      mark(part.singleton, part.singleton + 1);
      for (const IntervalZ& piece : part.left_pieces) mark(piece.a, piece.b);
      for (const IntervalZ& piece : part.tail_pieces) mark(piece.a, piece.b);
      for (const char h : hit) {
        if (!h) fail("partition pieces do not cover the interval" + where);
      }

      // Boundary identity between the left pieces and the tail.
      std::uint64_t left_sum = 0;
      for (const int k : part.kappa) left_sum += std::uint64_t{1} << k;
      std::uint64_t prefix = 0;
      for (std::size_t l = 0; l < part.rho; ++l) {
        prefix += std::uint64_t{1} << part.ktilde[l];
      }
      if (a + left_sum + 1 != prefix) {
        fail("partition boundary identity fails" + where);
      }

      // Digit conditions at the split.
      const int top = part.ktilde[part.rho - 1];
      if ((a >> top) & 1u) fail("split digit of a is set" + where);
      if ((a >> (top + 1)) != (b >> (top + 1))) {
        fail("digits above the split disagree" + where);
      }

      // Every piece translates onto its block.
      if (xor_translate_set(IntervalZ{a, a + 1}, a) !=
          std::vector<std::uint64_t>{0}) {
        fail("singleton does not translate to zero" + where);
      }
      for (std::size_t j = 0; j < part.left_pieces.size(); ++j) {
        if (!equals_block(xor_translate_set(part.left_pieces[j], a),
                          delta_block(part.kappa[j] + 1))) {
          fail("left piece " + count_text(j + 1) +
               " misses its block" + where);
        }
      }
      for (std::size_t i = 0; i < part.tail_pieces.size(); ++i) {
        if (!equals_block(xor_translate_set(part.tail_pieces[i], b),
                          delta_block(part.ktilde[part.rho + i] + 1))) {
          fail("tail piece " + count_text(i + 1) +
               " misses its block" + where);
        }
      }

      // Characterization of the left piece count when a tail exists: piece
      // q still meets [a, b), exactly on the tail range, and piece q + 1
      // does not.
      if (part.rho < part.r) {
        const IntervalZ jq = left_interval(a, part.q);
        const IntervalZ jq1 = left_interval(a, part.q + 1);
        const std::uint64_t lo = std::max(jq.a, a);
        const std::uint64_t hi = std::min(jq.b, b);
        if (!(lo < hi) || lo != part.tail_begin() || hi != b) {
          fail("left piece q does not meet the interval on the tail range" +
               where);
        }
        if (std::max(jq1.a, a) < std::min(jq1.b, b)) {
          fail("left piece q + 1 still meets the interval" + where);
        }
      }
      ++checked;
    }
  }
  return "cover, boundary, digit, block, and piece-count conditions on " +
         count_text(checked) + " intervals with b <= " + count_text(max_b);
}

std::string transform_identities(int exact_resolution, int random_resolution,
                                 std::size_t trials, std::uint64_t seed) {
  // Exact part: orthonormality and the character identity.  Inner products
  // of +-1 step functions are dyadic rationals, so both must hold exactly.
  const std::uint64_t cells = std::uint64_t{1} << exact_resolution;
  std::vector<DyadicFunction> w;
  w.reserve(cells);
  for (std::uint64_t n = 0; n < cells; ++n) {
    w.push_back(walsh_function(n, exact_resolution));
  }
  for (std::uint64_t a = 0; a < cells; ++a) {
    for (std::uint64_t b = 0; b < cells; ++b) {
      double sum = 0.0;
      for (std::uint64_t i = 0; i < cells; ++i) {
        sum += w[a].values[i] * w[b].values[i];
      }
      const double inner = sum / static_cast<double>(cells);
      const double expected = a == b ? 1.0 : 0.0;
      if (inner != expected) {
        fail("orthonormality fails at (" + count_text(a) + ", " +
             count_text(b) + ")");
      }
      const DyadicFunction product = multiply_pointwise(w[a], w[b]);
      if (product.values != w[xor_add(a, b)].values) {
        fail("character identity fails at (" + count_text(a) + ", " +
             count_text(b) + ")");
      }
    }
  }

  // Random part: Parseval and both round trips.
  TrialRng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const DyadicFunction f = random_function(rng, random_resolution);
    const WalshSpectrum spectrum = fwht_analyze(f);

    double coeff_energy = 0.0;
    for (const double c : spectrum.coeffs) coeff_energy += c * c;
    const double norm2 = lp_norm(f, 2.0);
    const double energy = norm2 * norm2;
    if (std::abs(coeff_energy - energy) >
        kIdentityTol * std::max(1.0, energy)) {
      fail("Parseval fails on trial " + count_text(t));
    }

    const DyadicFunction back = fwht_synthesize(spectrum);
    if (max_abs_diff(back, f) > kIdentityTol * std::max(1.0, max_abs(f))) {
      fail("analysis-synthesis round trip fails on trial " + count_text(t));
    }

    WalshSpectrum s = WalshSpectrum::zero(random_resolution);
    for (double& c : s.coeffs) c = rng.gaussian();
    const WalshSpectrum again = fwht_analyze(fwht_synthesize(s));
    double worst = 0.0;
    double scale = 1.0;
    for (std::size_t n = 0; n < s.coeffs.size(); ++n) {
      worst = std::max(worst, std::abs(again.coeffs[n] - s.coeffs[n]));
      scale = std::max(scale, std::abs(s.coeffs[n]));
    }
    if (worst > kIdentityTol * scale) {
      fail("synthesis-analysis round trip fails on trial " + count_text(t));
    }
  }
  return "orthonormality and characters exact at K = " +
         std::to_string(exact_resolution) + "; Parseval and round trips on " +
         count_text(trials) + " random functions at K = " +
         std::to_string(random_resolution);
}

std::string martingale_identities(int resolution, std::size_t trials,
                                  std::uint64_t seed) {
  TrialRng rng(seed);
  const std::uint64_t cells = std::uint64_t{1} << resolution;

  for (std::size_t t = 0; t < trials; ++t) {
    const DyadicFunction f = random_function(rng, resolution);
    const double scale = std::max(1.0, max_abs(f));

    DyadicFunction telescoped = DyadicFunction::zero(resolution);
    for (int k = 0; k <= resolution; ++k) {
      const DyadicFunction averaged = conditional_expectation(f, k);
      const DyadicFunction projected =
          project_spectrum(f, IntervalZ{0, std::uint64_t{1} << k});
      if (max_abs_diff(averaged, projected) > kIdentityTol * scale) {
        fail("conditional expectation disagrees with the spectral projection "
             "at level " + std::to_string(k));
      }
      add_in_place(telescoped, martingale_difference(f, k));
    }
    if (max_abs_diff(telescoped, f) > kIdentityTol * scale) {
      fail("martingale differences do not telescope on trial " +
           count_text(t));
    }

    const double f_norm = lp_norm(f, 2.0);
    const double s_norm = lp_norm(square_function(f), 2.0);
    if (std::abs(f_norm - s_norm) > kIdentityTol * std::max(1.0, f_norm)) {
      fail("square function is not an L2 isometry on trial " + count_text(t));
    }
  }

  // The square function of any single character is identically 1.
  for (std::uint64_t n = 0; n < std::min<std::uint64_t>(cells, 64); ++n) {
    const DyadicFunction s = square_function(walsh_function(n, resolution));
    for (const double v : s.values) {
      if (std::abs(v - 1.0) > kIdentityTol) {
        fail("square function of character " + count_text(n) + " is not 1");
      }
    }
  }
  for (std::size_t t = 0; t < 16; ++t) {
    const std::uint64_t n = rng.below(cells);
    const DyadicFunction s = square_function(walsh_function(n, resolution));
    for (const double v : s.values) {
      if (std::abs(v - 1.0) > kIdentityTol) {
        fail("square function of character " + count_text(n) + " is not 1");
      }
    }
  }
  return "projection form, telescoping, isometry on " + count_text(trials) +
         " random functions and unit square function on characters at K = " +
         std::to_string(resolution);
}

std::string relocation_l2(int resolution, std::size_t assignments,
                          std::uint64_t seed) {
  TrialRng rng(seed);
  const std::uint64_t cells = std::uint64_t{1} << resolution;

  for (std::size_t trial = 0; trial < assignments; ++trial) {
    std::vector<char> used(cells, 0);
    IndexedFamily family;
    RelocationAssignment assignment;
    const std::size_t target_terms = 4 + rng.below(9);
    std::uint64_t slot = 0;
    for (std::size_t attempt = 0;
         attempt < 200 && slot < target_terms; ++attempt) {
      const int k = static_cast<int>(rng.below(resolution + 1));
      const std::uint64_t shift = rng.below(cells);
      const DeltaBlock block = delta_block(k);
      bool free = true;
      for (std::uint64_t x = block.lo(); x <= block.hi() && free; ++x) {
        free = !used[xor_add(x, shift)];
      }
      if (!free) continue;
      for (std::uint64_t x = block.lo(); x <= block.hi(); ++x) {
        used[xor_add(x, shift)] = 1;
      }
      const MultiIndex idx{slot, k};
      family.entries.emplace(idx, random_function(rng, resolution));
      assignment.shifts.emplace(idx, shift);
      ++slot;
    }

    const DyadicFunction g = relocation_operator(family, assignment);
    const double out_norm = lp_norm(g, 2.0);
    const double lhs = out_norm * out_norm;
    double rhs = 0.0;
    for (const auto& [idx, fn] : family.entries) {
      const double term = lp_norm(martingale_difference(fn, idx.k), 2.0);
      rhs += term * term;
    }
    if (std::abs(lhs - rhs) > kIdentityTol * std::max(1.0, rhs)) {
      fail("relocation operator breaks the L2 identity on assignment " +
           count_text(trial));
    }
  }

  // The validator must reject two entries relocating onto the same block.
  {
    IndexedFamily family;
    RelocationAssignment assignment;
    TrialRng overlap_rng(seed ^ 0x5bd1e995u);
    family.entries.emplace(MultiIndex{0, 2},
                           random_function(overlap_rng, resolution));
    family.entries.emplace(MultiIndex{1, 2},
                           random_function(overlap_rng, resolution));
    assignment.shifts.emplace(MultiIndex{0, 2}, 0);
    assignment.shifts.emplace(MultiIndex{1, 2}, 0);
    bool rejected = false;
    try {
      relocation_operator(family, assignment);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    if (!rejected) {
      fail("relocation operator accepted overlapping blocks");
    }
  }
  return "L2 identity on " + count_text(assignments) +
         " random admissible assignments at K = " +
         std::to_string(resolution) + " and overlap rejection";
}

std::string decomposition_chain(const InstanceSpec& spec, std::size_t trials) {
  if (trials == 0) {
    throw std::invalid_argument("decomposition_chain: trials must be >= 1");
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const InstanceSpec trial_spec = derived_trial_spec(spec, t);
    const Instance instance = generate_instance(trial_spec);
    const DecomposedInstance decomposed = decompose_instance(instance);
    const std::string where = " (trial " + count_text(t) + ")";

    for (std::size_t m = 0; m < decomposed.members.size(); ++m) {
      const IntervalFunction& member = decomposed.members[m];
      const DecomposedFunction& part = decomposed.parts[m];
      const double scale = std::max(1.0, max_abs(member.f));

      DyadicFunction reconstructed = part.piece0;
      for (const DyadicFunction& piece : part.left) {
        add_in_place(reconstructed, piece);
      }
      for (const DyadicFunction& piece : part.tail) {
        add_in_place(reconstructed, piece);
      }
      if (max_abs_diff(reconstructed, member.f) > kIdentityTol * scale) {
        fail("pieces do not reconstruct the function" + where);
      }

      if (block_leakage(part.g0, delta_block(0)) > kIdentityTol * scale) {
        fail("modulated singleton leaks outside delta_0" + where);
      }
      for (std::size_t j = 0; j < part.g_left.size(); ++j) {
        if (block_leakage(part.g_left[j],
                          delta_block(part.partition.kappa[j] + 1)) >
            kIdentityTol * scale) {
          fail("modulated left piece leaks outside its block" + where);
        }
      }
      for (std::size_t i = 0; i < part.g_tail.size(); ++i) {
        if (block_leakage(
                part.g_tail[i],
                delta_block(part.partition.ktilde[part.partition.rho + i] +
                            1)) > kIdentityTol * scale) {
          fail("modulated tail piece leaks outside its block" + where);
        }
      }
      if (block_leakage(
              part.g_merged,
              delta_block(part.partition.ktilde[part.partition.rho - 1] +
                          1)) > kIdentityTol * scale) {
        fail("merged piece leaks outside its block" + where);
      }

      // Merged-tail identity: the merged piece equals w_a w_b times the sum
      // of the modulated tail pieces (zero when the tail is empty).
      DyadicFunction alternative =
          DyadicFunction::zero(member.f.resolution);
      if (!part.g_tail.empty()) {
        for (const DyadicFunction& piece : part.g_tail) {
          add_in_place(alternative, piece);
        }
        alternative = multiply_pointwise(
            alternative, walsh_function(member.interval.a,
                                        member.f.resolution));
        alternative = multiply_pointwise(
            alternative, walsh_function(member.interval.b,
                                        member.f.resolution));
      }
      if (max_abs_diff(part.g_merged, alternative) > kIdentityTol * scale) {
        fail("merged-tail identity fails" + where);
      }
    }

    // The chain's own internal equalities at a mid p and at the anchor.
    chain_report(decomposed, 1.25);
    chain_report(decomposed, 2.0);
  }
  return "reconstruction, localization, merged tail, and chain equalities "
         "on " + count_text(trials) + " random instances";
}

std::string orthogonality_anchor(int resolution,
                                 std::size_t trials_per_family,
                                 std::uint64_t seed) {
  if (trials_per_family == 0) {
    throw std::invalid_argument(
        "orthogonality_anchor: trials_per_family must be >= 1");
  }
  const IntervalFamily families[] = {
      IntervalFamily::RandomDisjoint, IntervalFamily::DyadicBlocks,
      IntervalFamily::Singletons, IntervalFamily::FullRange,
      IntervalFamily::Explicit};
  const CoefficientLaw laws[] = {CoefficientLaw::Gaussian,
                                 CoefficientLaw::RademacherSigns,
                                 CoefficientLaw::AllOnes};
  std::size_t stream = 0;
  std::size_t checked = 0;
  for (const IntervalFamily family : families) {
    for (std::size_t t = 0; t < trials_per_family; ++t) {
      InstanceSpec spec;
      spec.resolution = resolution;
      spec.family = family;
      spec.law = laws[t % 3];
      spec.max_intervals = 16;
      spec.seed = TrialRng::derive_stream(seed, stream++);
      if (family == IntervalFamily::Explicit) {
        spec.explicit_intervals = {{3, 7}, {9, 10}, {32, 57}, {100, 228}};
      }
      const ChainReport report = theorem_chain(generate_instance(spec), 2.0);
      if (report.family_norm > 0.0 &&
          std::abs(report.ratio - 1.0) > 1e-9) {
        fail("p = 2 ratio deviates from 1 beyond 1e-9 (family " +
             std::to_string(static_cast<int>(family)) + ", trial " +
             count_text(t) + ")");
      }
      ++checked;
    }
  }
  return "p = 2 ratio equals 1 within 1e-9 on " + count_text(checked) +
         " instances across all five interval families";
}

std::string merge_bound(int resolution, std::size_t pairs,
                        std::span<const double> p_values, std::uint64_t seed) {
  if (pairs == 0) {
    throw std::invalid_argument("merge_bound: pairs must be >= 1");
  }
  TrialRng rng(seed);
  const double root2 = std::sqrt(2.0);
  for (std::size_t trial = 0; trial < pairs; ++trial) {
    VecFunction first, second, combined;
    const std::size_t first_count = 1 + rng.below(4);
    const std::size_t second_count = 1 + rng.below(4);
    for (std::size_t i = 0; i < first_count; ++i) {
      first.components.push_back(random_function(rng, resolution));
    }
    for (std::size_t i = 0; i < second_count; ++i) {
      second.components.push_back(random_function(rng, resolution));
    }
    combined.components = first.components;
    combined.components.insert(combined.components.end(),
                               second.components.begin(),
                               second.components.end());
    for (const double p : p_values) {
      const double lhs = lp_l2_norm(first, p) + lp_l2_norm(second, p);
      const double rhs = lp_l2_norm(combined, p);
      if (lhs > root2 * rhs * (1.0 + kIdentityTol)) {
        fail("family merge bound fails at p = " + fixed6(p) + " on pair " +
             count_text(trial));
      }
    }
  }
  return "sum of family norms within sqrt(2) of the merged norm on " +
         count_text(pairs) + " random pairs";
}

SweepResult boundedness_sweep(const InstanceSpec& spec,
                              std::span<const double> p_values,
                              std::size_t trials) {
  const EstimateSummary summary = estimate_constants(spec, p_values, trials);
  SweepResult result;
  std::string table;
  for (const EstimateRow& row : summary.rows) {
    table += "p=" + fixed6(row.p) + " max=" + fixed6(row.max_ratio) +
             " nonincreasing-with-M=" +
             (row.max_nonincreasing_with_intervals ? "yes" : "no") + "\n";
    for (const EstimateCell& cell : row.by_interval_count) {
      table += "  M=" + count_text(cell.intervals) +
               " trials=" + count_text(cell.trials) +
               " max=" + fixed6(cell.max_ratio) +
               " median=" + fixed6(cell.median_ratio) +
               " mean=" + fixed6(cell.mean_ratio) + "\n";
    }
    result.max_ratio = std::max(result.max_ratio, row.max_ratio);
  }
  table += "overall max ratio=" + fixed6(result.max_ratio) + "\n";
  result.table = std::move(table);
  return result;
}

}  // namespace walshlp::checks
