// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "macrodiv/closed_forms.hpp"
#include "macrodiv/experiments.hpp"
#include "macrodiv/verify.hpp"

using namespace macrodiv;

namespace {

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  emit_csv(rows, out);
  return out.str();
}

SweepConfig small_sweep() {
  SweepConfig config;
  config.axis = SweepAxis::NumTx;
  config.axis_values = {1, 2, 3, 4};
  config.fixed.p_blocked = 0.3;
  config.fixed.snr_db = 5.0;
  config.fixed.num_subcarriers = 8;
  config.fixed.cyclic_prefix = 2;
  config.schemes = {"capacity", "ts", "ncjt", "two_tx", "ncja", "wc_capacity"};
  config.metrics = {Metric::Ergodic, Metric::Outage};
  config.n_trials = 4000;
  config.seed = 7;
  return config;
}

}  // namespace

TEST_CASE("csv header and empty output") {
  CHECK(csv_of({}) == "axis,axis_value,scheme,metric,rate_bits,std_error,n_trials,argmax_i\n");
}

TEST_CASE("capacity row formatting") {
  SweepConfig config;
  config.axis = SweepAxis::BlockageProb;
  config.axis_values = {0.5};
  config.fixed.num_tx = 1;
  config.fixed.snr_db = 0.0;
  config.schemes = {"capacity"};
  const auto result = run_sweep(config);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.errors.empty());
  CHECK(csv_of(result.rows) ==
        "axis,axis_value,scheme,metric,rate_bits,std_error,n_trials,argmax_i\n"
        "p_B,0.500000000,capacity,ergodic,0.500000000,0.00000000,0,\n");
}

TEST_CASE("float formatting keeps nine significant digits") {
  CHECK(format_float(0.5) == "0.500000000");
  CHECK(format_float(1.0 / 3.0) == "0.333333333");
  CHECK(format_float(12.0) == "12.0000000");
  CHECK(format_float(std::log2(3.0)) == "1.58496250");
}

TEST_CASE("csv round trip") {
  std::vector<ResultRow> rows{
      {"L", 3.0, "ncjt", "ergodic", 1.0 / 3.0, 1e-4 / 7.0, 100000, std::nullopt},
      {"L", 3.0, "capacity", "outage", std::log2(31.0) * 0.81, 0.0, 0, 2},
      {"snr_db", -5.0, "ts", "ergodic", 0.0, 0.0, 0, std::nullopt},
  };
  const std::string text = csv_of(rows);
  std::istringstream in(text);
  const auto parsed = parse_csv(in);
  REQUIRE(parsed.size() == rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    CHECK(parsed[j].axis == rows[j].axis);
    CHECK(parsed[j].scheme == rows[j].scheme);
    CHECK(parsed[j].metric == rows[j].metric);
    CHECK(parsed[j].n_trials == rows[j].n_trials);
    CHECK(parsed[j].argmax_i == rows[j].argmax_i);
    CHECK(parsed[j].rate_bits == std::stod(format_float(rows[j].rate_bits)));
    CHECK(parsed[j].rate_bits == doctest::Approx(rows[j].rate_bits).epsilon(1e-8));
  }
  // Values on the 9-digit grid survive exactly.
  CHECK(csv_of(parsed) == text);
  std::istringstream again(csv_of(parsed));
  CHECK(parse_csv(again) == parsed);

  std::istringstream bad_header("a,b\n");
  CHECK_THROWS_AS(parse_csv(bad_header), std::invalid_argument);
  std::istringstream bad_row(std::string(kCsvHeader) + "\nL,1,ncjt\n");
  CHECK_THROWS_AS(parse_csv(bad_row), std::invalid_argument);
}

TEST_CASE("json output mirrors the csv columns") {
  std::vector<ResultRow> rows{{"p_B", 0.1, "capacity", "outage", 1.0 / 3.0, 0.0, 0, 1},
                              {"p_B", 0.1, "ncjt", "ergodic", 2.0, 0.01, 100, std::nullopt}};
  std::ostringstream out;
  emit_json(rows, out);
  const auto doc = nlohmann::json::parse(out.str());
  REQUIRE(doc.size() == 2);
  CHECK(doc[0]["rate_bits"].get<double>() == std::stod("0.333333333"));
  CHECK(doc[0]["argmax_i"].get<int>() == 1);
  CHECK(doc[1]["argmax_i"].is_null());
  CHECK(doc[1]["n_trials"].get<int>() == 100);
  CHECK(doc[1]["scheme"] == "ncjt");
}

TEST_CASE("sweep rows, ordering and closed-form values") {
  const auto config = small_sweep();
  const auto result = run_sweep(config);
  // NCJA needs even L and two_tx needs L >= 2: L=1 loses both (2 metrics
  // each), L=3 loses NCJA.
  CHECK(result.errors.size() == 6);
  CHECK(result.rows.size() == 4 * 6 * 2 - 6);
  for (const auto& err : result.errors) CHECK(!err.message.empty());

  const double snr = snr_from_db(5.0);
  for (const auto& row : result.rows) {
    CHECK(row.axis == "L");
    CHECK(row.rate_bits >= 0.0);
    const int num_tx = static_cast<int>(row.axis_value);
    if (row.scheme == "capacity" && row.metric == "ergodic") {
      CHECK(row.rate_bits == ergodic_capacity(num_tx, 0.3, snr).value);
      CHECK(row.n_trials == 0);
    }
    if (row.scheme == "capacity" && row.metric == "outage") {
      CHECK(row.argmax_i == outage_capacity(num_tx, 0.3, snr).argmax_index);
    }
    if (row.scheme == "ncjt") CHECK(row.n_trials > 0);
  }
  auto find = [&](double value, const std::string& scheme, const std::string& metric) {
    for (const auto& r : result.rows) {
      if (r.axis_value == value && r.scheme == scheme && r.metric == metric) return r;
    }
    FAIL("row not found");
    return ResultRow{};
  };
  for (double value : {2.0, 4.0}) {
    const auto cap = find(value, "capacity", "ergodic");
    const auto ncja = find(value, "ncja", "ergodic");
    const auto ncjt = find(value, "ncjt", "ergodic");
    const auto two = find(value, "two_tx", "ergodic");
    const auto ts = find(value, "ts", "ergodic");
    CHECK(cap.rate_bits >= ncja.rate_bits - 4.0 * ncja.std_error);
    CHECK(ncja.rate_bits >= ncjt.rate_bits - 4.0 * std::hypot(ncja.std_error, ncjt.std_error));
    CHECK(ncja.rate_bits >= two.rate_bits - 4.0 * ncja.std_error);
    CHECK(ncjt.rate_bits >= ts.rate_bits - 4.0 * ncjt.std_error);
  }
}

TEST_CASE("sweeps are reproducible and independent of the worker count") {
  auto config = small_sweep();
  config.schemes = {"ncjt", "phase_div", "cdd", "wc_ncjt", "wc_phase_div"};
  config.n_trials = 5000;
  const std::string one = csv_of(run_sweep(config).rows);
  config.workers = 3;
  CHECK(csv_of(run_sweep(config).rows) == one);
  config.seed = 8;
  CHECK(csv_of(run_sweep(config).rows) != one);
}

TEST_CASE("sweep validation") {
  SweepConfig config;
  config.axis_values = {};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.axis_values = {0.2, 0.1};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.axis_values = {0.1, 0.2};
  config.schemes = {"bogus"};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.schemes = {"ncjt"};
  config.n_trials = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.n_trials.reset();
  CHECK_NOTHROW(config.validate());
  CHECK(config.trials_for(Metric::Ergodic) == 100000);
  CHECK(config.trials_for(Metric::Outage) == 1000000);
}

TEST_CASE("axis and metric names") {
  for (auto axis : {SweepAxis::BlockageProb, SweepAxis::SnrDb, SweepAxis::NumTx, SweepAxis::Subcarriers}) {
    CHECK(parse_axis(axis_name(axis)) == axis);
    CHECK(!default_axis_values(axis).empty());
  }
  CHECK(parse_axis("pb") == SweepAxis::BlockageProb);
  CHECK_THROWS_AS(parse_axis("T"), std::invalid_argument);
  CHECK(parse_metric_list("both").size() == 2);
  CHECK_THROWS_AS(parse_metric("mean"), std::invalid_argument);
  CHECK(snr_from_db(10.0) == doctest::Approx(10.0));
  CHECK(snr_from_db(0.0) == 1.0);
}

TEST_CASE("config file parsing") {
  const auto entries = parse_config_text(
      "# sweep over SNR\n"
      "axis = \"snr_db\"\n"
      "values = [0, 5, 10]   # dB\n"
      "l = 3\n"
      "p_b = 0.25\n"
      "schemes = [\"capacity\", \"ncjt\"]\n"
      "metric = \"both\"\n"
      "trials = 1e4\n"
      "seed = 99\n"
      "\n");
  SweepConfig config;
  apply_config(entries, config);
  CHECK(config.axis == SweepAxis::SnrDb);
  CHECK(config.axis_values == std::vector<double>{0, 5, 10});
  CHECK(config.fixed.num_tx == 3);
  CHECK(config.fixed.p_blocked == 0.25);
  CHECK(config.schemes == std::vector<std::string>{"capacity", "ncjt"});
  CHECK(config.metrics.size() == 2);
  CHECK(config.n_trials == 10000u);
  CHECK(config.seed == 99u);

  CHECK_THROWS_AS(parse_config_text("just words\n"), std::invalid_argument);
  SweepConfig other;
  CHECK_THROWS_AS(apply_config({{"colour", "red"}}, other), std::invalid_argument);
  CHECK_THROWS_AS(apply_config({{"l", "2.5"}}, other), std::invalid_argument);
  CHECK_THROWS_AS(read_config_file("/nonexistent/dir/sweep.toml"), IoError);
}

TEST_CASE("writing to an unwritable path raises an io error") {
  CHECK_THROWS_AS(write_rows({}, OutputFormat::Csv, "/nonexistent/dir/out.csv"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "macrodiv_test_rows.csv";
  write_rows({}, OutputFormat::Csv, path.string());
  std::ifstream in(path, std::ios::binary);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == std::string(kCsvHeader) + "\n");
  std::filesystem::remove(path);
}

TEST_CASE("ccdf series") {
  CcdfConfig config;
  config.fixed.num_tx = 3;
  config.fixed.p_blocked = 0.3;
  config.fixed.snr_db = 3.0;
  config.n_trials = 20000;
  config.max_points = 200;
  const auto rows = run_ccdf(config);
  std::vector<CcdfRow> empirical, steps;
  for (const auto& r : rows) (r.series == "analytic_steps" ? steps : empirical).push_back(r);
  CHECK(empirical.size() == 200);
  REQUIRE(steps.size() == 4);
  CHECK(empirical.front().ccdf == 1.0);
  for (std::size_t j = 1; j < empirical.size(); ++j) {
    CHECK(empirical[j].ccdf <= empirical[j - 1].ccdf);
    CHECK(empirical[j].rate_bits >= empirical[j - 1].rate_bits);
  }
  const double snr = snr_from_db(3.0);
  CHECK(steps[0].ccdf == 1.0);
  CHECK(steps[1].ccdf == doctest::Approx(1.0 - 0.027));
  CHECK(steps[2].rate_bits == doctest::Approx(std::log2(1.0 + 2.0 * snr)));

  std::ostringstream out;
  emit_ccdf_csv(rows, out);
  CHECK(out.str().rfind("series,rate_bits,ccdf\n", 0) == 0);

  config.scheme = "capacity";
  config.max_points = 0;
  const auto capacity_rows = run_ccdf(config);
  // Capacity takes only the values log2(1 + iP).
  CHECK(capacity_rows.size() <= 8);
}

TEST_CASE("quick acceptance checks that are cheap") {
  VerifyOptions options;
  options.quick = true;
  CHECK(check_six_db(options).passed);
  CHECK(check_worst_case_delay(options).passed);
  CHECK(check_riemann_limit(options).passed);
  CHECK(check_closed_form_agreement(options).passed);
}
