#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "walshlp/decomposition.hpp"
#include "walshlp/rng.hpp"

namespace walshlp {

// Statistical harness: randomized instance generation, the empirical
// constant sweep, weak-type probes, and report emission.  Everything is
// deterministic given the seed; trial t draws from the derived stream
// TrialRng::derive_stream(seed, t).

enum class IntervalFamily {
  RandomDisjoint,  // pair up 2M distinct breakpoints drawn from [0, 2^K]
  DyadicBlocks,    // delta_1 .. delta_min(K, max_intervals)
  Singletons,      // max_intervals distinct single-point intervals
  FullRange,       // the single interval [0, 2^K)
  Explicit,        // caller-provided intervals
};

enum class CoefficientLaw {
  Gaussian,         // i.i.d. standard normal coefficients
  RademacherSigns,  // i.i.d. +-1 coefficients
  AllOnes,          // every coefficient 1
};

struct InstanceSpec {
  int resolution = 12;
  IntervalFamily family = IntervalFamily::RandomDisjoint;
  CoefficientLaw law = CoefficientLaw::Gaussian;
  std::size_t max_intervals = 16;
  std::uint64_t seed = 0;
  std::vector<IntervalZ> explicit_intervals;  // used by Explicit only
};

// Intervals in ascending order (caller order for Explicit), coefficients
// drawn interval by interval, index ascending.
Instance generate_instance(const InstanceSpec& spec);

struct TrialRecord {
  std::uint64_t seed = 0;     // per-trial derived seed
  double p = 0;
  int resolution = 0;         // K
  std::size_t intervals = 0;  // M
  double lhs = 0;             // || sum_m f_m ||_p
  double rhs = 0;             // || {f_m} ||_{L^p(l^2)}
  double ratio = 0;           // lhs / rhs, or 0 when rhs = 0
  ChainReport chain;
};

struct EstimateCell {
  std::size_t intervals = 0;
  std::size_t trials = 0;
  double max_ratio = 0;
  double median_ratio = 0;
  double mean_ratio = 0;
};

struct EstimateRow {
  double p = 0;
  std::vector<EstimateCell> by_interval_count;  // ascending interval count
  double max_ratio = 0;
  bool max_nonincreasing_with_intervals = true;  // observational flag
};

struct EstimateSummary {
  std::vector<EstimateRow> rows;        // one per grid point, grid order
  std::vector<TrialRecord> records;     // sorted by (seed, p)
};

// Runs `trials` instances, evaluating the chain at every p in the grid; the
// decomposition is shared across grid points.  For the random-disjoint and
// singleton families the per-trial interval count cycles deterministically
// through [2, max_intervals] so ratios can be grouped by M.  Every p must
// lie in (1, 2]; when the grid contains 2 the ratio is asserted to equal 1
// within 1e-9.
EstimateSummary estimate_constants(const InstanceSpec& spec,
                                   std::span<const double> p_grid,
                                   std::size_t trials);

enum class ProbeOperator {
  SquareFunction,  // T f = square_function(sum_m f_m), normalized by ||f||_1
  Relocation,      // T h = relocation_operator on the instance's pieces,
                   // normalized by || {h} ||_{L^1(l^2)}
};

struct WeakTypeSummary {
  std::vector<double> per_trial;  // sup_lambda lambda |{|Tf| > lambda}| / norm
  double max_value = 0;
  double median_value = 0;
  double mean_value = 0;
};

// sup over the grid of lambda * |{ |f| > lambda }|.
double weak_type_functional(const DyadicFunction& f,
                            std::span<const double> lambda_grid);

// Geometric grid of `points` values covering [1e-3, 1e3] * scale.
std::vector<double> geometric_lambda_grid(double scale, std::size_t points);

// Per trial: generate an instance, apply the probe operator, and take the
// normalized weak-type functional.  An empty lambda_grid selects a per-trial
// geometric grid of grid_points values scaled by the median absolute value
// of the input.
WeakTypeSummary weak_type_probe(ProbeOperator op, const InstanceSpec& spec,
                                std::size_t trials,
                                std::span<const double> lambda_grid,
                                std::size_t grid_points = 601);

enum class ReportFormat { Json, Csv };

// Writes the records sorted by (seed, p).  JSON: an array of objects with
// keys seed, p, K, M, lhs, rhs, ratio, chain{A, B, C1, C2, D1, D2, E}.
// CSV: the same fields as columns with a header row, '.' decimal separator,
// LF line endings.  Identical records give byte-identical files.
void emit_report(std::span<const TrialRecord> records, ReportFormat format,
                 const std::filesystem::path& destination);

// Worker count for parallel trial evaluation: hardware concurrency capped by
// the WALSH_LP_THREADS environment variable when it holds a positive
// integer.
std::size_t thread_budget();

// Runs body(0) .. body(count - 1), possibly concurrently; rethrows the first
// failure.  Results must be written to disjoint slots, which keeps the
// output independent of the worker count.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body);

}  // namespace walshlp
