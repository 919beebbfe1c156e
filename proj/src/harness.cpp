#include "walshlp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "walshlp/errors.hpp"

namespace walshlp {

namespace {

void check_spec(const InstanceSpec& spec) {
  if (spec.resolution < 1 || spec.resolution > kMaxResolution) {
    throw std::invalid_argument("InstanceSpec: resolution must lie in [1, " +
                                std::to_string(kMaxResolution) + "]");
  }
  if (spec.max_intervals == 0) {
    throw std::invalid_argument("InstanceSpec: max_intervals must be >= 1");
  }
}

std::vector<IntervalZ> random_disjoint_intervals(TrialRng& rng, int resolution,
                                                 std::size_t count) {
  const std::uint64_t domain = (std::uint64_t{1} << resolution) + 1;
  if (2 * count > domain) {
    throw std::invalid_argument(
        "generate_instance: too many random-disjoint intervals for the "
        "resolution");
  }
  std::set<std::uint64_t> breakpoints;
  while (breakpoints.size() < 2 * count) {
    breakpoints.insert(rng.below(domain));
  }
  std::vector<std::uint64_t> sorted(breakpoints.begin(), breakpoints.end());
  std::vector<IntervalZ> intervals;
  intervals.reserve(count);
  for (std::size_t i = 0; i + 1 < sorted.size(); i += 2) {
    if (sorted[i] < sorted[i + 1]) {
      intervals.push_back({sorted[i], sorted[i + 1]});
    }
  }
  return intervals;
}

std::vector<IntervalZ> singleton_intervals(TrialRng& rng, int resolution,
                                           std::size_t count) {
  const std::uint64_t domain = std::uint64_t{1} << resolution;
  if (count > domain) {
    throw std::invalid_argument(
        "generate_instance: more singletons than spectral indices");
  }
  std::set<std::uint64_t> points;
  while (points.size() < count) {
    points.insert(rng.below(domain));
  }
  std::vector<IntervalZ> intervals;
  intervals.reserve(count);
  for (const std::uint64_t n : points) intervals.push_back({n, n + 1});
  return intervals;
}

std::vector<IntervalZ> dyadic_block_intervals(int resolution,
                                              std::size_t max_count) {
  const std::size_t count =
      std::min<std::size_t>(max_count, static_cast<std::size_t>(resolution));
  std::vector<IntervalZ> intervals;
  intervals.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    intervals.push_back(delta_block(static_cast<int>(k)).interval());
  }
  return intervals;
}

double draw_coefficient(TrialRng& rng, CoefficientLaw law) {
  switch (law) {
    case CoefficientLaw::Gaussian:
      return rng.gaussian();
    case CoefficientLaw::RademacherSigns:
      return rng.sign();
    case CoefficientLaw::AllOnes:
      return 1.0;
  }
  throw std::invalid_argument("generate_instance: unknown coefficient law");
}

// Interval count used for trial t; random-disjoint and singleton families
// cycle through [2, max_intervals] so the sweep covers every count.
std::size_t trial_interval_count(const InstanceSpec& spec, std::size_t trial) {
  if (spec.family != IntervalFamily::RandomDisjoint &&
      spec.family != IntervalFamily::Singletons) {
    return spec.max_intervals;
  }
  if (spec.max_intervals <= 2) return spec.max_intervals;
  return 2 + trial % (spec.max_intervals - 1);
}

TrialRecord make_record(std::uint64_t seed, double p, int resolution,
                        std::size_t intervals, const ChainReport& chain) {
  TrialRecord record;
  record.seed = seed;
  record.p = p;
  record.resolution = resolution;
  record.intervals = intervals;
  record.lhs = chain.sum_norm;
  record.rhs = chain.family_norm;
  record.ratio = chain.ratio;
  record.chain = chain;
  const double fields[] = {record.lhs,
                           record.rhs,
                           record.ratio,
                           chain.sum_norm,
                           chain.relocated_family_norm,
                           chain.left_family_norm,
                           chain.tail_sum_family_norm,
                           chain.merged_family_norm,
                           chain.merged_delta_norm,
                           chain.family_norm};
  for (const double v : fields) {
    if (!std::isfinite(v)) {
      throw VerificationError("trial record holds a non-finite value (seed " +
                              std::to_string(seed) + ", p " +
                              std::to_string(p) + ")");
    }
  }
  return record;
}

void sort_records(std::vector<TrialRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const TrialRecord& x, const TrialRecord& y) {
                     if (x.seed != y.seed) return x.seed < y.seed;
                     return x.p < y.p;
                   });
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

Instance generate_instance(const InstanceSpec& spec) {
  check_spec(spec);
  TrialRng rng(spec.seed);
  const std::uint64_t cells = std::uint64_t{1} << spec.resolution;

  std::vector<IntervalZ> intervals;
  switch (spec.family) {
    case IntervalFamily::RandomDisjoint:
      intervals = random_disjoint_intervals(rng, spec.resolution,
                                            spec.max_intervals);
      break;
    case IntervalFamily::DyadicBlocks:
      intervals = dyadic_block_intervals(spec.resolution, spec.max_intervals);
      break;
    case IntervalFamily::Singletons:
      intervals = singleton_intervals(rng, spec.resolution,
                                      spec.max_intervals);
      break;
    case IntervalFamily::FullRange:
      intervals.push_back({0, cells});
      break;
    case IntervalFamily::Explicit:
      intervals = spec.explicit_intervals;
      break;
  }
  if (intervals.empty()) {
    throw std::invalid_argument("generate_instance: no intervals generated");
  }

  Instance instance;
  instance.reserve(intervals.size());
  for (const IntervalZ& interval : intervals) {
    if (!(interval.a < interval.b) || interval.b > cells) {
      throw std::invalid_argument(
          "generate_instance: interval [" + std::to_string(interval.a) +
          ", " + std::to_string(interval.b) + ") is outside [0, 2^" +
          std::to_string(spec.resolution) + "]");
    }
    WalshSpectrum s = WalshSpectrum::zero(spec.resolution);
    for (std::uint64_t n = interval.a; n < interval.b; ++n) {
      s.coeffs[n] = draw_coefficient(rng, spec.law);
    }
    instance.push_back({interval, fwht_synthesize(s)});
  }
  validate_instance(instance);
  return instance;
}

EstimateSummary estimate_constants(const InstanceSpec& spec,
                                   std::span<const double> p_grid,
                                   std::size_t trials) {
  check_spec(spec);
  if (trials == 0) {
    throw std::invalid_argument("estimate_constants: trials must be >= 1");
  }
  if (p_grid.empty()) {
    throw std::invalid_argument("estimate_constants: empty p grid");
  }
  for (const double p : p_grid) {
    if (!(p > 1.0 && p <= 2.0)) {
      throw std::invalid_argument("estimate_constants: p must lie in (1, 2]");
    }
  }

  const std::size_t width = p_grid.size();
  std::vector<TrialRecord> records(trials * width);
  parallel_for(trials, [&](std::size_t t) {
    InstanceSpec trial_spec = spec;
    trial_spec.seed = TrialRng::derive_stream(spec.seed, t);
    trial_spec.max_intervals = trial_interval_count(spec, t);
    const Instance instance = generate_instance(trial_spec);
    const DecomposedInstance decomposed = decompose_instance(instance);
    for (std::size_t pi = 0; pi < width; ++pi) {
      records[t * width + pi] =
          make_record(trial_spec.seed, p_grid[pi], spec.resolution,
                      instance.size(), chain_report(decomposed, p_grid[pi]));
    }
  });

  for (const TrialRecord& record : records) {
    if (record.p == 2.0 && record.rhs > 0.0 &&
        std::abs(record.ratio - 1.0) > 1e-9) {
      throw VerificationError(
          "estimate_constants: p = 2 ratio deviates from 1 beyond 1e-9 "
          "(seed " +
          std::to_string(record.seed) + ")");
    }
  }
  sort_records(records);

  EstimateSummary summary;
  summary.records = std::move(records);
  for (const double p : p_grid) {
    std::map<std::size_t, std::vector<double>> grouped;
    for (const TrialRecord& record : summary.records) {
      if (record.p == p) grouped[record.intervals].push_back(record.ratio);
    }
    EstimateRow row;
    row.p = p;
    double previous_max = 0.0;
    bool first = true;
    for (const auto& [count, ratios] : grouped) {
      EstimateCell cell;
      cell.intervals = count;
      cell.trials = ratios.size();
      cell.max_ratio = *std::max_element(ratios.begin(), ratios.end());
      cell.median_ratio = median_of(ratios);
      cell.mean_ratio = 0.0;
      for (const double r : ratios) cell.mean_ratio += r;
      cell.mean_ratio /= static_cast<double>(ratios.size());
      row.max_ratio = std::max(row.max_ratio, cell.max_ratio);
      if (!first && cell.max_ratio > previous_max) {
        row.max_nonincreasing_with_intervals = false;
      }
      previous_max = cell.max_ratio;
      first = false;
      row.by_interval_count.push_back(cell);
    }
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

double weak_type_functional(const DyadicFunction& f,
                            std::span<const double> lambda_grid) {
  std::vector<double> magnitudes(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    magnitudes[i] = std::abs(f.values[i]);
  }
  std::sort(magnitudes.begin(), magnitudes.end());
  const double cells = static_cast<double>(magnitudes.size());
  double best = 0.0;
  for (const double lambda : lambda_grid) {
    if (!(lambda > 0.0)) {
      throw std::invalid_argument(
          "weak_type_functional: lambda must be positive");
    }
    const auto above =
        std::upper_bound(magnitudes.begin(), magnitudes.end(), lambda);
    const double measure =
        static_cast<double>(magnitudes.end() - above) / cells;
    best = std::max(best, lambda * measure);
  }
  return best;
}

std::vector<double> geometric_lambda_grid(double scale, std::size_t points) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument(
        "geometric_lambda_grid: scale must be positive");
  }
  if (points < 2) {
    throw std::invalid_argument("geometric_lambda_grid: need >= 2 points");
  }
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double exponent =
        -3.0 + 6.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = scale * std::pow(10.0, exponent);
  }
  return grid;
}

WeakTypeSummary weak_type_probe(ProbeOperator op, const InstanceSpec& spec,
                                std::size_t trials,
                                std::span<const double> lambda_grid,
                                std::size_t grid_points) {
  check_spec(spec);
  if (trials == 0) {
    throw std::invalid_argument("weak_type_probe: trials must be >= 1");
  }

  WeakTypeSummary summary;
  summary.per_trial.resize(trials);
  parallel_for(trials, [&](std::size_t t) {
    InstanceSpec trial_spec = spec;
    trial_spec.seed = TrialRng::derive_stream(spec.seed, t);
    const Instance instance = generate_instance(trial_spec);

    DyadicFunction transformed;
    double denominator = 0.0;
    std::vector<double> input_magnitudes;
    if (op == ProbeOperator::SquareFunction) {
      DyadicFunction f = DyadicFunction::zero(spec.resolution);
      for (const IntervalFunction& member : instance) {
        add_in_place(f, member.f);
      }
      transformed = square_function(f);
      denominator = lp_norm(f, 1.0);
      input_magnitudes.reserve(f.values.size());
      for (const double v : f.values) input_magnitudes.push_back(std::abs(v));
    } else {
      const auto [family, shifts] = relocation_for_instance(instance);
      transformed = relocation_operator(family, shifts);
      VecFunction components;
      for (const auto& [idx, fn] : family.entries) {
        components.components.push_back(fn);
      }
      denominator = lp_l2_norm(components, 1.0);
      for (const DyadicFunction& c : components.components) {
        for (const double v : c.values) {
          input_magnitudes.push_back(std::abs(v));
        }
      }
    }

    if (!(denominator > 0.0)) {
      summary.per_trial[t] = 0.0;
      return;
    }
    std::vector<double> local_grid;
    std::span<const double> grid = lambda_grid;
    if (grid.empty()) {
      double scale = median_of(input_magnitudes);
      if (!(scale > 0.0)) {
        scale = *std::max_element(input_magnitudes.begin(),
                                  input_magnitudes.end());
      }
      if (!(scale > 0.0)) {
        summary.per_trial[t] = 0.0;
        return;
      }
      local_grid = geometric_lambda_grid(scale, grid_points);
      grid = local_grid;
    }
    summary.per_trial[t] =
        weak_type_functional(transformed, grid) / denominator;
  });

  summary.max_value = *std::max_element(summary.per_trial.begin(),
                                        summary.per_trial.end());
  summary.median_value = median_of(summary.per_trial);
  summary.mean_value = 0.0;
  for (const double v : summary.per_trial) summary.mean_value += v;
  summary.mean_value /= static_cast<double>(summary.per_trial.size());
  return summary;
}

void emit_report(std::span<const TrialRecord> records, ReportFormat format,
                 const std::filesystem::path& destination) {
  std::vector<TrialRecord> sorted(records.begin(), records.end());
  sort_records(sorted);

  std::ofstream out(destination, std::ios::binary);
  if (!out) {
    throw std::runtime_error("emit_report: cannot open '" +
                             destination.string() + "' for writing");
  }

  if (format == ReportFormat::Json) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const TrialRecord& r : sorted) {
      nlohmann::ordered_json chain;
      chain["A"] = r.chain.sum_norm;
      chain["B"] = r.chain.relocated_family_norm;
      chain["C1"] = r.chain.left_family_norm;
      chain["C2"] = r.chain.tail_sum_family_norm;
      chain["D1"] = r.chain.merged_family_norm;
      chain["D2"] = r.chain.merged_delta_norm;
      chain["E"] = r.chain.family_norm;
      nlohmann::ordered_json row;
      row["seed"] = r.seed;
      row["p"] = r.p;
      row["K"] = r.resolution;
      row["M"] = r.intervals;
      row["lhs"] = r.lhs;
      row["rhs"] = r.rhs;
      row["ratio"] = r.ratio;
      row["chain"] = std::move(chain);
      array.push_back(std::move(row));
    }
    out << array.dump(2) << '\n';
  } else {
    out << "seed,p,K,M,lhs,rhs,ratio,chain.A,chain.B,chain.C1,chain.C2,"
           "chain.D1,chain.D2,chain.E\n";
    for (const TrialRecord& r : sorted) {
      out << r.seed << ',' << format_double(r.p) << ',' << r.resolution << ','
          << r.intervals << ',' << format_double(r.lhs) << ','
          << format_double(r.rhs) << ',' << format_double(r.ratio) << ','
          << format_double(r.chain.sum_norm) << ','
          << format_double(r.chain.relocated_family_norm) << ','
          << format_double(r.chain.left_family_norm) << ','
          << format_double(r.chain.tail_sum_family_norm) << ','
          << format_double(r.chain.merged_family_norm) << ','
          << format_double(r.chain.merged_delta_norm) << ','
          << format_double(r.chain.family_norm) << '\n';
    }
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("emit_report: write failed for '" +
                             destination.string() + "'");
  }
}

std::size_t thread_budget() {
  std::size_t budget = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WALSH_LP_THREADS")) {
    char* end = nullptr;
    const unsigned long long requested = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && requested >= 1) {
      budget = std::min<std::size_t>(budget, requested);
    }
  }
  return budget;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers = std::min(count, thread_budget());
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace walshlp
