#pragma once

#include <cstdint>
#include <map>

#include "walshlp/walsh_transform.hpp"

namespace walshlp {

// Dyadic martingale structure of step functions: conditional expectations on
// the dyadic filtration, martingale differences, the square function, and
// the block-relocation operator built from Walsh modulations.

// Multi-index (j, k); k is the martingale level, j disambiguates entries
// sharing a level.
struct MultiIndex {
  std::uint64_t j = 0;
  int k = 0;

  auto operator<=>(const MultiIndex&) const = default;
};

// Finite map from multi-indices to step functions of one shared resolution.
struct IndexedFamily {
  std::map<MultiIndex, DyadicFunction> entries;
};

// Shift n_{j,k} per multi-index; admissible for relocation_operator when the
// translated blocks n_{j,k} xor_add delta_k are pairwise disjoint and stay
// inside [0, 2^K).
struct RelocationAssignment {
  std::map<MultiIndex, std::uint64_t> shifts;
};

// E_level f: the average of f over each cell of length 2^-level.  Equals the
// spectral projection onto [0, 2^level).
DyadicFunction conditional_expectation(const DyadicFunction& f, int level);

// D_0 f = E_0 f and D_level f = E_level f - E_{level-1} f; the spectral
// projection onto delta_level.
DyadicFunction martingale_difference(const DyadicFunction& f, int level);

// (sum_{k=0}^{K} |D_k f|^2)^{1/2}; an isometry on L^2.
DyadicFunction square_function(const DyadicFunction& f);

// Same with the sum extended over all components of the family.
DyadicFunction square_function_vec(const VecFunction& v);

// sum over (j, k) of w_{n_{j,k}} * D_k h_{j,k}.  Validates eagerly that the
// family and the assignment share the index set and that the relocated
// blocks are pairwise disjoint inside [0, 2^K); in that case the squared L^2
// norm of the result is the sum of the squared norms of the D_k h_{j,k}.
DyadicFunction relocation_operator(const IndexedFamily& h,
                                   const RelocationAssignment& shifts);

// Lebesgue measure of {x : |f(x)| > lambda}; lambda > 0.
double distribution_tail(const DyadicFunction& f, double lambda);

}  // namespace walshlp
