#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "walshlp/errors.hpp"
#include "walshlp/harness.hpp"

namespace walshlp::checks {

// Verification suites shared by the command line tool and the acceptance
// tests.  Each function throws VerificationError naming the first violated
// invariant and otherwise returns a one-line summary of what was covered.

// Exhaustive group axioms of xor_add for all a, b, c < max_n: identity,
// self-inverse, commutativity, associativity.  Exact.
std::string group_axioms(std::uint64_t max_n);

// For every 1 <= n < max_n, every row of shift_decomposition(n, tail_rows)
// is compared with the brute-force translate of its source, and the union
// identities for [0, n - 1] and for the tail prefix are checked.  Exact.
std::string shift_rows(std::uint64_t max_n, std::size_t tail_rows);

// For every 0 <= a < b <= max_b: the partition is a disjoint exact cover,
// the boundary identity holds, every piece translates onto its delta block,
// and when rho < r the count of left pieces matches the first piece index
// whose intersection with [a, b) is empty.  Exact integer arithmetic.
std::string partitions(std::uint64_t max_b);

// Orthonormality and the character identity, exact at exact_resolution, and
// Parseval plus round trips within 1e-12 on random functions at
// random_resolution.
std::string transform_identities(int exact_resolution, int random_resolution,
                                 std::size_t trials, std::uint64_t seed);

// Spectral form of the conditional expectation, telescoping differences,
// the square function of a Walsh character, and the L^2 isometry, all
// within 1e-12 on random functions.
std::string martingale_identities(int resolution, std::size_t trials,
                                  std::uint64_t seed);

// Randomized admissible relocation assignments: the squared L^2 norm of the
// output matches the sum over entries within 1e-12, and a deliberately
// overlapping assignment is rejected.
std::string relocation_l2(int resolution, std::size_t assignments,
                          std::uint64_t seed);

// Random instances: reconstruction, delta-block localization of every
// modulated piece, the merged-tail identity, and the chain's internal
// equalities, all within 1e-12 (relative).
std::string decomposition_chain(const InstanceSpec& spec, std::size_t trials);

// p = 2 anchor: the chain ratio equals 1 within 1e-9 on every instance of
// every interval family.
std::string orthogonality_anchor(int resolution, std::size_t trials_per_family,
                                 std::uint64_t seed);

// Random family pairs: the sum of the two L^p(l^2) norms never exceeds
// sqrt(2) times the norm of the union, within 1e-12 slack.
std::string merge_bound(int resolution, std::size_t pairs,
                        std::span<const double> p_values, std::uint64_t seed);

struct SweepResult {
  std::string table;  // max ratio per (p, interval count), fixed formatting
  double max_ratio = 0;
};

// Ratio sweep over the p grid; asserts finiteness of every record and
// returns the max-ratio table.  Identical specs give identical tables.
SweepResult boundedness_sweep(const InstanceSpec& spec,
                              std::span<const double> p_values,
                              std::size_t trials);

}  // namespace walshlp::checks
