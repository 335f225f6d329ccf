// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: capacity, sweep, ccdf and verify subcommands.
// Exit codes: 0 success, 1 validation failure, 2 I/O error.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "macrodiv/experiments.hpp"
#include "macrodiv/verify.hpp"

using namespace macrodiv;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MACRODIV_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("MACRODIV_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

struct CommonFlags {
  int num_tx = 4;
  double p_blocked = 0.2;
  double snr_db = 10.0;
  int num_subcarriers = 64;
  int cyclic_prefix = 16;
  std::string out;
  std::string format = "csv";
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
  CLI::Option* num_tx_opt = nullptr;
  CLI::Option* pb_opt = nullptr;
  CLI::Option* snr_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* d_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_point_flags(CLI::App* cmd, CommonFlags& f) {
  f.num_tx_opt = cmd->add_option("--l", f.num_tx, "number of transmitters L");
  f.pb_opt = cmd->add_option("--pb", f.p_blocked, "blockage probability p_B");
  f.snr_opt = cmd->add_option("--snr-db", f.snr_db, "per-transmitter SNR in dB");
  f.k_opt = cmd->add_option("--k", f.num_subcarriers, "subcarriers / frame length K");
  f.d_opt = cmd->add_option("--d", f.cyclic_prefix, "cyclic prefix length D");
}

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
  f.out_opt = cmd->add_option("--out", f.out, "output path (default stdout)");
  f.format_opt = cmd->add_option("--format", f.format, "csv or json");
  f.workers_opt = cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--seed", f.seed, "random seed (default $MACRODIV_SEED or 1)");
}

FixedParams fixed_of(const CommonFlags& f) {
  return {f.num_tx, f.p_blocked, f.snr_db, f.num_subcarriers, f.cyclic_prefix};
}

void report_errors(const std::vector<RowError>& errors) {
  for (const auto& e : errors) {
    std::fprintf(stderr, "skipped %s/%s at %g: %s\n", e.scheme.c_str(), e.metric.c_str(),
                 e.axis_value, e.message.c_str());
  }
}

int run_capacity(const CommonFlags& f) {
  SweepConfig config;
  config.axis = SweepAxis::SnrDb;
  config.axis_values = {f.snr_db};
  config.fixed = fixed_of(f);
  config.schemes = {"capacity"};
  config.metrics = {Metric::Ergodic, Metric::Outage};
  const auto result = run_sweep(config);
  report_errors(result.errors);
  write_rows(result.rows, parse_format(f.format), f.out);
  return result.errors.empty() ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"macrodiv: rates of multi-point transmission over intermittent block fading"};
  app.require_subcommand(1);

  CommonFlags capacity_flags;
  auto* capacity = app.add_subcommand("capacity", "closed-form ergodic and outage capacity");
  add_point_flags(capacity, capacity_flags);
  capacity->add_option("--out", capacity_flags.out, "output path (default stdout)");
  capacity->add_option("--format", capacity_flags.format, "csv or json");

  CommonFlags sweep_flags;
  std::string config_path, axis, values, schemes, metric;
  std::optional<std::size_t> trials;
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter for a set of schemes");
  sweep->add_option("--config", config_path, "flat key = value config file");
  auto* axis_opt = sweep->add_option("--axis", axis, "p_B, snr_db, L or K");
  auto* values_opt = sweep->add_option("--values", values, "comma-separated axis values");
  add_point_flags(sweep, sweep_flags);
  auto* schemes_opt = sweep->add_option("--schemes", schemes, "comma-separated scheme names");
  auto* trials_opt = sweep->add_option("--trials", trials, "Monte Carlo trials per row");
  auto* metric_opt = sweep->add_option("--metric", metric, "ergodic, outage or both");
  add_output_flags(sweep, sweep_flags);

  CommonFlags ccdf_flags;
  std::string ccdf_scheme = "ncjt";
  std::size_t ccdf_trials = 1000000;
  std::size_t max_points = 1000;
  auto* ccdf = app.add_subcommand("ccdf", "empirical CCDF of a scheme's instantaneous rate");
  add_point_flags(ccdf, ccdf_flags);
  ccdf->add_option("--schemes,--scheme", ccdf_scheme, "scheme name");
  ccdf->add_option("--trials", ccdf_trials, "number of blocks");
  ccdf->add_option("--max-points", max_points, "points kept per series (0 keeps all)");
  add_output_flags(ccdf, ccdf_flags);

  bool quick = false;
  std::optional<std::uint64_t> verify_seed;
  unsigned verify_workers = 1;
  auto* verify = app.add_subcommand("verify", "run the acceptance and invariant checks");
  verify->add_flag("--quick", quick, "reduced trial counts");
  verify->add_option("--seed", verify_seed, "random seed");
  verify->add_option("--workers", verify_workers, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*capacity) return run_capacity(capacity_flags);

    if (*sweep) {
      SweepConfig config;
      std::string out = sweep_flags.out;
      std::string format = sweep_flags.format;
      if (!config_path.empty()) {
        auto entries = read_config_file(config_path);
        if (auto it = entries.find("out"); it != entries.end()) {
          if (!sweep_flags.out_opt->count()) out = parse_name_list(it->second).at(0);
          entries.erase(it);
        }
        if (auto it = entries.find("format"); it != entries.end()) {
          if (!sweep_flags.format_opt->count()) format = parse_name_list(it->second).at(0);
          entries.erase(it);
        }
        apply_config(entries, config);
      }
      if (*axis_opt) config.axis = parse_axis(axis);
      if (*values_opt) config.axis_values = parse_number_list(values);
      if (config.axis_values.empty()) config.axis_values = default_axis_values(config.axis);
      if (*sweep_flags.num_tx_opt) config.fixed.num_tx = sweep_flags.num_tx;
      if (*sweep_flags.pb_opt) config.fixed.p_blocked = sweep_flags.p_blocked;
      if (*sweep_flags.snr_opt) config.fixed.snr_db = sweep_flags.snr_db;
      if (*sweep_flags.k_opt) config.fixed.num_subcarriers = sweep_flags.num_subcarriers;
      if (*sweep_flags.d_opt) config.fixed.cyclic_prefix = sweep_flags.cyclic_prefix;
      if (*schemes_opt) config.schemes = parse_name_list(schemes);
      if (*trials_opt) config.n_trials = trials;
      if (*metric_opt) config.metrics = parse_metric_list(metric);
      if (*sweep_flags.workers_opt) config.workers = sweep_flags.workers;
      if (sweep_flags.seed) {
        config.seed = *sweep_flags.seed;
      } else if (config_path.empty() || std::getenv("MACRODIV_SEED")) {
        config.seed = default_seed();
      }
      const OutputFormat fmt = parse_format(format);
      const auto result = run_sweep(config);
      report_errors(result.errors);
      write_rows(result.rows, fmt, out);
      return result.errors.empty() ? 0 : kExitValidation;
    }

    if (*ccdf) {
      CcdfConfig config;
      config.fixed = fixed_of(ccdf_flags);
      config.scheme = ccdf_scheme;
      config.n_trials = ccdf_trials;
      config.seed = ccdf_flags.seed ? *ccdf_flags.seed : default_seed();
      config.workers = ccdf_flags.workers;
      config.max_points = max_points;
      const OutputFormat fmt = parse_format(ccdf_flags.format);
      write_ccdf(run_ccdf(config), fmt, ccdf_flags.out);
      return 0;
    }

    if (*verify) {
      VerifyOptions options;
      options.quick = quick;
      options.workers = verify_workers;
      if (verify_seed) {
        options.seed = *verify_seed;
      } else if (std::getenv("MACRODIV_SEED")) {
        options.seed = default_seed();
      }
      int failed = 0;
      for (const auto& r : run_acceptance(options)) {
        std::printf("%-30s %s  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.detail.c_str());
        failed += r.passed ? 0 : 1;
      }
      return failed == 0 ? 0 : kExitValidation;
    }
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return 0;
}
