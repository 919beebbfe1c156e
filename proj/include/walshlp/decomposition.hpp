#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "walshlp/martingale.hpp"
#include "walshlp/walsh_transform.hpp"

namespace walshlp {

// Constructive decomposition of an integer interval I = [a, b) into the
// singleton {a}, left pieces that fill the clear binary digits of a below
// the highest digit where a and b differ, and tail pieces carved from the
// digits of b.  Translating a left piece by a, or a tail piece by b, lands
// exactly on one delta block; this is what lets a function with spectrum in
// I be rewritten as a sum of modulated martingale differences.

struct IntervalPartition {
  IntervalZ interval;       // [a, b)
  std::uint64_t singleton;  // = a
  std::size_t q = 1;        // 1 + number of left pieces
  std::size_t rho = 1;      // split position among the digits of b, 1-based
  std::size_t r = 1;        // number of set digits of b
  std::vector<int> kappa;   // ascending clear digits of a used by the left
                            // pieces; q - 1 entries, all below ktilde[rho-1]
  std::vector<int> ktilde;  // descending set digits of b; r entries
  std::vector<IntervalZ> left_pieces;  // piece j translates by a onto
                                       // delta_{kappa[j] + 1}
  std::vector<IntervalZ> tail_pieces;  // piece i translates by b onto
                                       // delta_{ktilde[rho + i] + 1}

  // First spectral index right of the left pieces; equals b when the tail
  // is empty.
  std::uint64_t tail_begin() const {
    return tail_pieces.empty() ? interval.b : tail_pieces.front().a;
  }
};

// Splits [a, b); the singleton, the left pieces, and the tail pieces are
// pairwise disjoint and cover [a, b) exactly.
IntervalPartition partition_interval(const IntervalZ& interval);

// The j-th (1-based) left piece for the base point a, independent of any b:
// [a + sum_{l<j} 2^{kappa_l} + 1, a + sum_{l<=j} 2^{kappa_l}] as a half-open
// interval, where kappa enumerates the clear digits of a ascending.
IntervalZ left_interval(std::uint64_t a, std::size_t j);

// All spectral pieces of one function with spectrum in [a, b), together with
// their Walsh modulations.  Modulating piece j by w_a (or tail piece i by
// w_b) localizes its spectrum to a single delta block.
struct DecomposedFunction {
  IntervalPartition partition;
  DyadicFunction piece0;              // spectrum {a}
  std::vector<DyadicFunction> left;   // spectrum left_pieces[j]
  std::vector<DyadicFunction> tail;   // spectrum tail_pieces[i]
  DyadicFunction g0;                  // w_a * piece0, spectrum delta_0
  std::vector<DyadicFunction> g_left;  // w_a * left[j]
  std::vector<DyadicFunction> g_tail;  // w_b * tail[i]
  // w_a * (projection of f onto [tail_begin, b)); coincides with
  // w_a * w_b * sum_i g_tail[i] and has spectrum in one delta block.
  DyadicFunction g_merged;
};

// Requires b <= 2^K and the Walsh spectrum of f inside [a, b) up to 1e-12
// relative leakage.  piece0 + sum(left) + sum(tail) reconstructs f.
DecomposedFunction decompose_function(const DyadicFunction& f,
                                      const IntervalZ& interval);

struct IntervalFunction {
  IntervalZ interval;
  DyadicFunction f;
};

// Functions with spectra in pairwise disjoint intervals, one resolution.
using Instance = std::vector<IntervalFunction>;

// Throws std::invalid_argument naming the offending interval on overlap,
// resolution mismatch, spectral leakage, or out-of-range endpoints.
void validate_instance(const Instance& instance);

struct DecomposedInstance {
  int resolution = 0;
  std::vector<IntervalFunction> members;
  std::vector<DecomposedFunction> parts;
};

DecomposedInstance decompose_instance(const Instance& instance);

// Norm quantities linking |sum_m f_m| to the square-function side, plus the
// headline ratio.  Serialized under the single-letter keys A, B, C1, C2,
// D1, D2, E in reports.
struct ChainReport {
  double sum_norm = 0;             // A:  || sum_m f_m ||_p
  double relocated_family_norm = 0;  // B:  all modulated pieces, tail split
  double left_family_norm = 0;     // C1: modulated left pieces only
  double tail_sum_family_norm = 0;  // C2: per-interval sums of tail pieces
  double merged_family_norm = 0;   // D1: left pieces plus the merged tail
  double merged_delta_norm = 0;    // D2: same via martingale differences
  double family_norm = 0;          // E:  || {f_m} ||_{L^p(l^2)}
  double ratio = 0;                // A / E, or 0 when E = 0
};

// p in (1, 2].  Asserts D1 = D2 and the invariance of E under modulation
// within 1e-12 (relative), throwing VerificationError otherwise.
ChainReport chain_report(const DecomposedInstance& decomposed, double p);
ChainReport theorem_chain(const Instance& instance, double p);

// The instance rewritten as an admissible relocation family: one entry per
// spectral piece, modulated so its spectrum sits in delta_k, with the shift
// that translates it back.  Feeding the result to relocation_operator
// reproduces sum_m f_m.
std::pair<IndexedFamily, RelocationAssignment> relocation_for_instance(
    const Instance& instance);

}  // namespace walshlp
