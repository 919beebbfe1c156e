#include "cli_app.hpp"

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "walshlp/errors.hpp"
#include "walshlp/harness.hpp"
#include "walshlp/verify.hpp"

namespace walshlp::cli {

namespace {

std::string fixed6(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

std::string general12(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

const std::map<std::string, IntervalFamily>& family_names() {
  static const std::map<std::string, IntervalFamily> names = {
      {"random-disjoint", IntervalFamily::RandomDisjoint},
      {"dyadic-blocks", IntervalFamily::DyadicBlocks},
      {"singletons", IntervalFamily::Singletons},
      {"full-range", IntervalFamily::FullRange},
  };
  return names;
}

const std::map<std::string, CoefficientLaw>& law_names() {
  static const std::map<std::string, CoefficientLaw> names = {
      {"gaussian", CoefficientLaw::Gaussian},
      {"rademacher", CoefficientLaw::RademacherSigns},
      {"all-ones", CoefficientLaw::AllOnes},
  };
  return names;
}

std::string name_of(IntervalFamily family) {
  for (const auto& [name, value] : family_names()) {
    if (value == family) return name;
  }
  return "?";
}

std::string name_of(CoefficientLaw law) {
  for (const auto& [name, value] : law_names()) {
    if (value == law) return name;
  }
  return "?";
}

void print_estimate_summary(const InstanceSpec& spec, std::size_t trials,
                            const EstimateSummary& summary) {
  std::cout << "seed=" << spec.seed << "\n";
  std::cout << "resolution=" << spec.resolution << " trials=" << trials
            << " family=" << name_of(spec.family)
            << " law=" << name_of(spec.law)
            << " max-intervals=" << spec.max_intervals << "\n";
  double overall = 0.0;
  for (const EstimateRow& row : summary.rows) {
    std::cout << "p=" << fixed6(row.p) << " max=" << fixed6(row.max_ratio)
              << " nonincreasing-with-M="
              << (row.max_nonincreasing_with_intervals ? "yes" : "no")
              << "\n";
    for (const EstimateCell& cell : row.by_interval_count) {
      std::cout << "  M=" << cell.intervals << " trials=" << cell.trials
                << " max=" << fixed6(cell.max_ratio)
                << " median=" << fixed6(cell.median_ratio)
                << " mean=" << fixed6(cell.mean_ratio) << "\n";
    }
    overall = std::max(overall, row.max_ratio);
  }
  std::cout << "overall max ratio=" << fixed6(overall) << "\n";
}

}  // namespace

int run(int argc, const char* const argv[]) {
  CLI::App app{"Walsh-system Littlewood-Paley toolkit: exact structure "
               "checks, empirical constant estimates, and weak-type probes "
               "for functions with dyadic-interval spectra"};
  app.require_subcommand(1);

  // ---- verify ----------------------------------------------------------
  CLI::App* verify = app.add_subcommand(
      "verify", "Run one exact or randomized verification suite");
  verify->require_subcommand(1);

  struct {
    std::uint64_t max_n = 256;
  } group_opts;
  CLI::App* group = verify->add_subcommand(
      "group", "Exhaustive dyadic group axioms");
  group->add_option("--max-n", group_opts.max_n,
                    "Check all a, b, c below this bound")
      ->capture_default_str();
  group->callback([&] {
    const std::string summary = checks::group_axioms(group_opts.max_n);
    std::cout << "ok: " << summary << "\n";
  });

  struct {
    std::uint64_t max_n = 2048;
    std::size_t tail_rows = 3;
  } rows_opts;
  CLI::App* rows = verify->add_subcommand(
      "lemma-intervals",
      "Interval shift rows against brute-force translation");
  rows->add_option("--max-n", rows_opts.max_n, "Check all 1 <= n below this")
      ->capture_default_str();
  rows->add_option("--tail-rows", rows_opts.tail_rows,
                   "Tail rows to emit per n")
      ->capture_default_str();
  rows->callback([&] {
    const std::string summary =
        checks::shift_rows(rows_opts.max_n, rows_opts.tail_rows);
    std::cout << "ok: " << summary << "\n";
  });

  struct {
    std::uint64_t max_b = 1024;
  } partition_opts;
  CLI::App* partition = verify->add_subcommand(
      "partition", "Interval partitions for all 0 <= a < b <= max-b");
  partition->add_option("--max-b", partition_opts.max_b,
                        "Largest right endpoint")
      ->capture_default_str();
  partition->callback([&] {
    const std::string summary = checks::partitions(partition_opts.max_b);
    std::cout << "ok: " << summary << "\n";
  });

  struct {
    int exact_resolution = 8;
    int resolution = 12;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
  } transform_opts;
  CLI::App* transform = verify->add_subcommand(
      "transform", "Walsh transform identities");
  transform->add_option("--exact-resolution", transform_opts.exact_resolution,
                        "Resolution K of the exact orthonormality sweep; 2^K cells")
      ->capture_default_str();
  transform->add_option("--resolution", transform_opts.resolution,
                        "Resolution K of the randomized identities; 2^K cells")
      ->capture_default_str();
  transform->add_option("--trials", transform_opts.trials,
                        "Random functions to test")
      ->capture_default_str();
  transform->add_option("--seed", transform_opts.seed, "Base seed")
      ->capture_default_str();
  transform->callback([&] {
    const std::string summary = checks::transform_identities(
        transform_opts.exact_resolution, transform_opts.resolution,
        transform_opts.trials, transform_opts.seed);
    std::cout << "seed=" << transform_opts.seed << "\n";
    std::cout << "ok: " << summary << "\n";
  });

  struct {
    InstanceSpec spec;
    std::size_t trials = 200;
  } chain_opts;
  CLI::App* chain = verify->add_subcommand(
      "chain", "Decomposition and norm-chain identities on random instances");
  chain->add_option("--resolution", chain_opts.spec.resolution,
                    "Resolution K; functions live on 2^K dyadic cells")
      ->capture_default_str();
  chain->add_option("--trials", chain_opts.trials, "Random instances")
      ->capture_default_str();
  chain->add_option("--seed", chain_opts.spec.seed, "Base seed")
      ->capture_default_str();
  chain->add_option("--max-intervals", chain_opts.spec.max_intervals,
                    "Largest interval count per instance")
      ->capture_default_str();
  chain->add_option("--family", chain_opts.spec.family, "Interval family")
      ->transform(CLI::CheckedTransformer(family_names(), CLI::ignore_case))
      ->default_str("random-disjoint");
  chain->add_option("--law", chain_opts.spec.law, "Coefficient law")
      ->transform(CLI::CheckedTransformer(law_names(), CLI::ignore_case))
      ->default_str("gaussian");
  chain->callback([&] {
    const std::string summary =
        checks::decomposition_chain(chain_opts.spec, chain_opts.trials);
    std::cout << "seed=" << chain_opts.spec.seed << "\n";
    std::cout << "ok: " << summary << "\n";
  });

  // ---- estimate --------------------------------------------------------
  struct {
    InstanceSpec spec;
    std::size_t trials = 200;
    std::vector<double> p_grid = {1.1, 1.25, 1.5, 2.0};
    std::string out;
    ReportFormat format = ReportFormat::Json;
  } estimate_opts;
  CLI::App* estimate = app.add_subcommand(
      "estimate",
      "Empirical constants of the norm chain over a grid of exponents");
  estimate->add_option("--p-grid", estimate_opts.p_grid,
                       "Lebesgue exponents, each in (1, 2]")
      ->capture_default_str();
  estimate->add_option("--trials", estimate_opts.trials, "Random instances")
      ->capture_default_str();
  estimate->add_option("--resolution", estimate_opts.spec.resolution,
                       "Resolution K; functions live on 2^K dyadic cells")
      ->capture_default_str();
  estimate->add_option("--seed", estimate_opts.spec.seed, "Base seed")
      ->capture_default_str();
  estimate->add_option("--max-intervals", estimate_opts.spec.max_intervals,
                       "Largest interval count per instance")
      ->capture_default_str();
  estimate->add_option("--family", estimate_opts.spec.family,
                       "Interval family")
      ->transform(CLI::CheckedTransformer(family_names(), CLI::ignore_case))
      ->default_str("random-disjoint");
  estimate->add_option("--law", estimate_opts.spec.law, "Coefficient law")
      ->transform(CLI::CheckedTransformer(law_names(), CLI::ignore_case))
      ->default_str("gaussian");
  estimate->add_option("--out", estimate_opts.out,
                       "Write the per-trial report to this file");
  estimate->add_option("--format", estimate_opts.format, "Report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ReportFormat>{{"json", ReportFormat::Json},
                                              {"csv", ReportFormat::Csv}},
          CLI::ignore_case))
      ->default_str("json");
  estimate->callback([&] {
    const EstimateSummary summary = estimate_constants(
        estimate_opts.spec, estimate_opts.p_grid, estimate_opts.trials);
    print_estimate_summary(estimate_opts.spec, estimate_opts.trials, summary);
    if (!estimate_opts.out.empty()) {
      emit_report(summary.records, estimate_opts.format, estimate_opts.out);
      std::cout << "report written to " << estimate_opts.out << "\n";
    }
  });

  // ---- weak-type -------------------------------------------------------
  struct {
    InstanceSpec spec;
    std::size_t trials = 200;
    std::size_t lambda_points = 601;
    ProbeOperator op = ProbeOperator::SquareFunction;
  } weak_opts;
  CLI::App* weak = app.add_subcommand(
      "weak-type", "Normalized weak-type functional of a probe operator");
  weak->add_option("--operator", weak_opts.op,
                   "S (square function) or G (block relocation)")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ProbeOperator>{
              {"S", ProbeOperator::SquareFunction},
              {"G", ProbeOperator::Relocation}},
          CLI::ignore_case))
      ->default_str("S");
  weak->add_option("--resolution", weak_opts.spec.resolution,
                   "Resolution K; functions live on 2^K dyadic cells")
      ->capture_default_str();
  weak->add_option("--trials", weak_opts.trials, "Random instances")
      ->capture_default_str();
  weak->add_option("--seed", weak_opts.spec.seed, "Base seed")
      ->capture_default_str();
  weak->add_option("--max-intervals", weak_opts.spec.max_intervals,
                   "Largest interval count per instance")
      ->capture_default_str();
  weak->add_option("--family", weak_opts.spec.family, "Interval family")
      ->transform(CLI::CheckedTransformer(family_names(), CLI::ignore_case))
      ->default_str("random-disjoint");
  weak->add_option("--law", weak_opts.spec.law, "Coefficient law")
      ->transform(CLI::CheckedTransformer(law_names(), CLI::ignore_case))
      ->default_str("gaussian");
  weak->add_option("--lambda-points", weak_opts.lambda_points,
                   "Points in the per-trial level grid")
      ->capture_default_str();
  weak->callback([&] {
    std::cout << "seed=" << weak_opts.spec.seed << "\n";
    std::cout << "operator="
              << (weak_opts.op == ProbeOperator::SquareFunction ? "S" : "G")
              << " resolution=" << weak_opts.spec.resolution
              << " trials=" << weak_opts.trials
              << " family=" << name_of(weak_opts.spec.family)
              << " law=" << name_of(weak_opts.spec.law)
              << " max-intervals=" << weak_opts.spec.max_intervals
              << " lambda-points=" << weak_opts.lambda_points << "\n";
    const std::vector<double> grid;  // empty: per-trial geometric grid
    const WeakTypeSummary summary =
        weak_type_probe(weak_opts.op, weak_opts.spec, weak_opts.trials, grid,
                        weak_opts.lambda_points);
    std::cout << "max=" << general12(summary.max_value)
              << " median=" << general12(summary.median_value)
              << " mean=" << general12(summary.mean_value) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("walshlp");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace walshlp::cli
