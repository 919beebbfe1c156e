#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "walshlp/harness.hpp"

using namespace walshlp;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("dyadic block instances list the delta blocks in order") {
  InstanceSpec spec;
  spec.resolution = 4;
  spec.family = IntervalFamily::DyadicBlocks;
  spec.max_intervals = 3;
  const Instance instance = generate_instance(spec);
  REQUIRE(instance.size() == 3);
  CHECK(instance[0].interval == IntervalZ{1, 2});
  CHECK(instance[1].interval == IntervalZ{2, 4});
  CHECK(instance[2].interval == IntervalZ{4, 8});

  spec.max_intervals = 99;  // more than K blocks: clamps to K
  const Instance full = generate_instance(spec);
  REQUIRE(full.size() == 4);
  CHECK(full[3].interval == IntervalZ{8, 16});
}

TEST_CASE("full range and explicit families use the given intervals") {
  InstanceSpec spec;
  spec.resolution = 5;
  spec.family = IntervalFamily::FullRange;
  const Instance instance = generate_instance(spec);
  REQUIRE(instance.size() == 1);
  CHECK(instance[0].interval == IntervalZ{0, 32});

  spec.family = IntervalFamily::Explicit;
  spec.explicit_intervals = {{3, 7}, {9, 10}};
  const Instance chosen = generate_instance(spec);
  REQUIRE(chosen.size() == 2);
  CHECK(chosen[0].interval == IntervalZ{3, 7});
  CHECK(chosen[1].interval == IntervalZ{9, 10});
}

TEST_CASE("random disjoint instances are valid and seed-deterministic") {
  InstanceSpec spec;
  spec.resolution = 8;
  spec.max_intervals = 10;
  spec.seed = 42;
  const Instance first = generate_instance(spec);
  const Instance second = generate_instance(spec);
  REQUIRE(first.size() == second.size());
  for (std::size_t m = 0; m < first.size(); ++m) {
    CHECK(first[m].interval == second[m].interval);
    CHECK(first[m].f.values == second[m].f.values);  // bitwise equal
  }

  spec.seed = 43;
  const Instance other = generate_instance(spec);
  bool differs = other.size() != first.size();
  for (std::size_t m = 0; !differs && m < first.size(); ++m) {
    differs = !(first[m].interval == other[m].interval) ||
              first[m].f.values != other[m].f.values;
  }
  CHECK(differs);
}

TEST_CASE("coefficient laws shape the spectra as advertised") {
  InstanceSpec spec;
  spec.resolution = 5;
  spec.family = IntervalFamily::Explicit;
  spec.explicit_intervals = {{4, 8}};
  spec.law = CoefficientLaw::AllOnes;
  const Instance instance = generate_instance(spec);
  DyadicFunction expected = DyadicFunction::zero(5);
  for (std::uint64_t n = 4; n < 8; ++n) {
    add_in_place(expected, walsh_function(n, 5));
  }
  CHECK(max_abs_diff(instance[0].f, expected) <= 1e-12);

  spec.law = CoefficientLaw::RademacherSigns;
  const Instance signs = generate_instance(spec);
  const WalshSpectrum spectrum = fwht_analyze(signs[0].f);
  for (std::uint64_t n = 0; n < spectrum.coeffs.size(); ++n) {
    const double c = spectrum.coeffs[n];
    if (n >= 4 && n < 8) {
      CHECK(std::abs(std::abs(c) - 1.0) <= 1e-12);
    } else {
      CHECK(std::abs(c) <= 1e-12);
    }
  }
}

TEST_CASE("infeasible interval demands are rejected") {
  InstanceSpec spec;
  spec.resolution = 2;
  spec.family = IntervalFamily::Singletons;
  spec.max_intervals = 5;  // only 4 spectral indices exist
  CHECK_THROWS_AS(generate_instance(spec), std::invalid_argument);

  spec.family = IntervalFamily::RandomDisjoint;
  spec.max_intervals = 3;  // needs 6 distinct breakpoints out of 5
  CHECK_THROWS_AS(generate_instance(spec), std::invalid_argument);

  spec.family = IntervalFamily::Explicit;
  spec.explicit_intervals.clear();
  CHECK_THROWS_AS(generate_instance(spec), std::invalid_argument);
}

TEST_CASE("estimate summaries group trials by interval count") {
  InstanceSpec spec;
  spec.resolution = 6;
  spec.max_intervals = 5;
  spec.seed = 9;
  const std::vector<double> grid = {1.5, 2.0};
  const EstimateSummary summary = estimate_constants(spec, grid, 12);

  REQUIRE(summary.rows.size() == 2);
  CHECK(summary.rows[0].p == 1.5);
  CHECK(summary.rows[1].p == 2.0);
  // Interval counts cycle through 2..5, so each shows up 3 times.
  for (const EstimateRow& row : summary.rows) {
    REQUIRE(row.by_interval_count.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(row.by_interval_count[i].intervals == i + 2);
      CHECK(row.by_interval_count[i].trials == 3);
    }
  }
  // p = 2 ratios collapse to 1.
  for (const EstimateCell& cell : summary.rows[1].by_interval_count) {
    CHECK(cell.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(summary.records.size() == 24);
  for (std::size_t i = 1; i < summary.records.size(); ++i) {
    const TrialRecord& prev = summary.records[i - 1];
    const TrialRecord& cur = summary.records[i];
    CHECK((prev.seed < cur.seed ||
           (prev.seed == cur.seed && prev.p <= cur.p)));
  }

  const EstimateSummary again = estimate_constants(spec, grid, 12);
  REQUIRE(again.records.size() == summary.records.size());
  for (std::size_t i = 0; i < summary.records.size(); ++i) {
    CHECK(again.records[i].ratio == summary.records[i].ratio);  // bitwise
    CHECK(again.records[i].lhs == summary.records[i].lhs);
    CHECK(again.records[i].rhs == summary.records[i].rhs);
  }
}

TEST_CASE("estimate rejects exponents outside (1, 2]") {
  InstanceSpec spec;
  spec.resolution = 5;
  const std::vector<double> bad = {1.5, 2.5};
  CHECK_THROWS_AS(estimate_constants(spec, bad, 4), std::invalid_argument);
  const std::vector<double> low = {1.0};
  CHECK_THROWS_AS(estimate_constants(spec, low, 4), std::invalid_argument);
  const std::vector<double> empty;
  CHECK_THROWS_AS(estimate_constants(spec, empty, 4), std::invalid_argument);
}

TEST_CASE("weak-type functional matches a hand computation") {
  DyadicFunction f = DyadicFunction::zero(2);
  f.values = {1.0, 1.0, 1.0, 1.0};
  const std::vector<double> grid = {0.5, 2.0};
  // At 0.5 the exceedance set is everything, at 2.0 it is empty.
  CHECK(weak_type_functional(f, grid) == doctest::Approx(0.5));
  const std::vector<double> at_one = {1.0};
  CHECK(weak_type_functional(f, at_one) == doctest::Approx(0.0));

  const DyadicFunction zero = DyadicFunction::zero(3);
  CHECK(weak_type_functional(zero, grid) == doctest::Approx(0.0));
  CHECK_THROWS_AS(weak_type_functional(f, std::vector<double>{0.0}),
                  std::invalid_argument);
}

TEST_CASE("lambda grids are geometric and validated") {
  const std::vector<double> grid = geometric_lambda_grid(2.0, 7);
  REQUIRE(grid.size() == 7);
  CHECK(grid.front() == doctest::Approx(2.0e-3).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(2.0e3).epsilon(1e-12));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] / grid[i - 1] == doctest::Approx(10.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(geometric_lambda_grid(0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(geometric_lambda_grid(1.0, 1), std::invalid_argument);
}

TEST_CASE("weak-type probe of a single character is near one") {
  InstanceSpec spec;
  spec.resolution = 6;
  spec.family = IntervalFamily::Explicit;
  spec.explicit_intervals = {{9, 10}};
  spec.law = CoefficientLaw::AllOnes;
  // f = w_9, so Sf = 1 everywhere and ||f||_1 = 1; the functional is the
  // largest grid point below 1.
  const WeakTypeSummary summary =
      weak_type_probe(ProbeOperator::SquareFunction, spec, 3, {});
  CHECK(summary.max_value >= 0.9);
  CHECK(summary.max_value <= 1.0);
  CHECK(summary.median_value == doctest::Approx(summary.max_value));

  const WeakTypeSummary relocated =
      weak_type_probe(ProbeOperator::Relocation, spec, 3, {});
  CHECK(relocated.max_value >= 0.9);
  CHECK(relocated.max_value <= 1.0);
}

TEST_CASE("reports serialize with stable keys and byte-identical output") {
  InstanceSpec spec;
  spec.resolution = 5;
  spec.max_intervals = 4;
  spec.seed = 3;
  const std::vector<double> grid = {1.5, 2.0};
  const EstimateSummary summary = estimate_constants(spec, grid, 4);

  const auto json_path = temp_path("walshlp_report_test.json");
  const auto csv_path = temp_path("walshlp_report_test.csv");
  emit_report(summary.records, ReportFormat::Json, json_path);
  emit_report(summary.records, ReportFormat::Csv, csv_path);

  const std::string json_text = read_file(json_path);
  const nlohmann::ordered_json parsed =
      nlohmann::ordered_json::parse(json_text);
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == summary.records.size());
  const std::vector<std::string> keys = {"seed", "p",     "K",    "M",
                                         "lhs",  "rhs",   "ratio", "chain"};
  {
    std::size_t i = 0;
    for (auto it = parsed[0].begin(); it != parsed[0].end(); ++it, ++i) {
      REQUIRE(i < keys.size());
      CHECK(it.key() == keys[i]);
    }
    CHECK(i == keys.size());
    const std::vector<std::string> chain_keys = {"A",  "B",  "C1", "C2",
                                                 "D1", "D2", "E"};
    i = 0;
    for (auto it = parsed[0]["chain"].begin();
         it != parsed[0]["chain"].end(); ++it, ++i) {
      REQUIRE(i < chain_keys.size());
      CHECK(it.key() == chain_keys[i]);
    }
    CHECK(i == chain_keys.size());
  }
  CHECK(parsed[0]["K"] == 5);
  CHECK(parsed[0]["ratio"].get<double>() ==
        doctest::Approx(parsed[0]["lhs"].get<double>() /
                        parsed[0]["rhs"].get<double>()));

  const std::string csv_text = read_file(csv_path);
  CHECK(csv_text.rfind("seed,p,K,M,lhs,rhs,ratio,chain.A,chain.B,chain.C1,"
                       "chain.C2,chain.D1,chain.D2,chain.E\n", 0) == 0);
  CHECK(csv_text.find('\r') == std::string::npos);
  std::size_t lines = 0;
  for (const char c : csv_text) lines += c == '\n';
  CHECK(lines == summary.records.size() + 1);

  // Re-emission is byte-identical.
  const auto json_path2 = temp_path("walshlp_report_test2.json");
  emit_report(summary.records, ReportFormat::Json, json_path2);
  CHECK(read_file(json_path2) == json_text);

  std::filesystem::remove(json_path);
  std::filesystem::remove(json_path2);
  std::filesystem::remove(csv_path);

  CHECK_THROWS_AS(
      emit_report(summary.records, ReportFormat::Json,
                  std::filesystem::path("/nonexistent-dir/report.json")),
      std::runtime_error);
}

TEST_CASE("the thread budget respects its environment override") {
  ::setenv("WALSH_LP_THREADS", "1", 1);
  CHECK(thread_budget() == 1);
  ::setenv("WALSH_LP_THREADS", "not-a-number", 1);
  CHECK(thread_budget() >= 1);
  ::unsetenv("WALSH_LP_THREADS");
  CHECK(thread_budget() >= 1);
}

TEST_CASE("parallel results do not depend on the worker count") {
  InstanceSpec spec;
  spec.resolution = 6;
  spec.max_intervals = 6;
  spec.seed = 77;
  const std::vector<double> grid = {1.25};
  ::setenv("WALSH_LP_THREADS", "1", 1);
  const EstimateSummary serial = estimate_constants(spec, grid, 10);
  ::unsetenv("WALSH_LP_THREADS");
  const EstimateSummary parallel = estimate_constants(spec, grid, 10);
  REQUIRE(serial.records.size() == parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].seed == parallel.records[i].seed);
    CHECK(serial.records[i].lhs == parallel.records[i].lhs);      // bitwise
    CHECK(serial.records[i].rhs == parallel.records[i].rhs);      // bitwise
    CHECK(serial.records[i].ratio == parallel.records[i].ratio);  // bitwise
  }
}
