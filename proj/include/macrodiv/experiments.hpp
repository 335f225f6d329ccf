// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace macrodiv {

/// Raised when output cannot be written or input cannot be read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { BlockageProb, SnrDb, NumTx, Subcarriers };
enum class Metric { Ergodic, Outage };

std::string_view axis_name(SweepAxis axis);
/// Accepts "p_B", "pb", "snr_db", "L", "K" (case-sensitive).
SweepAxis parse_axis(std::string_view name);
std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);

/// Scheme names accepted by run_sweep: the schemes of the synchronous model
/// plus "wc_capacity", "wc_ncjt" and "wc_phase_div" for the worst-case
/// asynchronous OFDM rates.
const std::vector<std::string>& sweep_scheme_names();

/// Parameters that are held fixed while one axis varies.
struct FixedParams {
  int num_tx = 4;
  double p_blocked = 0.2;
  double snr_db = 10.0;
  int num_subcarriers = 64;  ///< K, also the frame length of phase diversity, CDD and NCJA
  int cyclic_prefix = 16;    ///< D
};

double snr_from_db(double snr_db);

/// Default axis grid when none is given.
std::vector<double> default_axis_values(SweepAxis axis);

struct SweepConfig {
  SweepAxis axis = SweepAxis::BlockageProb;
  std::vector<double> axis_values;
  FixedParams fixed;
  std::vector<std::string> schemes{"capacity", "ts", "ncjt"};
  std::vector<Metric> metrics{Metric::Ergodic};
  /// Monte Carlo trials per row; unset means 1e5 for ergodic rows and 1e6
  /// for outage rows.
  std::optional<std::size_t> n_trials;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  /// Throws std::invalid_argument on an empty or unsorted axis, unknown
  /// schemes or zero trials.
  void validate() const;
  std::size_t trials_for(Metric metric) const;
};

struct ResultRow {
  std::string axis;
  double axis_value = 0.0;
  std::string scheme;
  std::string metric;
  double rate_bits = 0.0;
  double std_error = 0.0;
  std::size_t n_trials = 0;  ///< 0 for closed-form rows
  std::optional<int> argmax_i;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// A row that could not be computed, e.g. NCJA with odd L.
struct RowError {
  double axis_value = 0.0;
  std::string scheme;
  std::string metric;
  std::string message;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<RowError> errors;
};

/// One row per (axis value, scheme, metric) in that nesting order. Row r
/// draws from RngStream(seed, 0).substream(r), so results do not depend on
/// the worker count.
SweepResult run_sweep(const SweepConfig& config);

struct CcdfConfig {
  FixedParams fixed;
  std::string scheme = "ncjt";
  std::size_t n_trials = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t max_points = 1000;  ///< per series; 0 keeps every point
};

struct CcdfRow {
  std::string series;
  double rate_bits = 0.0;
  double ccdf = 0.0;

  friend bool operator==(const CcdfRow&, const CcdfRow&) = default;
};

/// Empirical CCDF of the scheme's instantaneous rate, followed by the
/// series "analytic_steps" with the points (log2(1 + iP), P(alpha >= i)).
std::vector<CcdfRow> run_ccdf(const CcdfConfig& config);

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "axis,axis_value,scheme,metric,rate_bits,std_error,n_trials,argmax_i";
inline constexpr std::string_view kCcdfCsvHeader = "series,rate_bits,ccdf";

/// 9 significant digits, fixed trailing zeros ("0.500000000").
std::string format_float(double value);

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void emit_json(const std::vector<ResultRow>& rows, std::ostream& out);
void emit_ccdf_csv(const std::vector<CcdfRow>& rows, std::ostream& out);
void emit_ccdf_json(const std::vector<CcdfRow>& rows, std::ostream& out);

/// Writes to `path`, or to stdout when path is empty or "-". Throws IoError.
void write_rows(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path);
void write_ccdf(const std::vector<CcdfRow>& rows, OutputFormat format, const std::string& path);

/// Inverse of emit_csv. Throws std::invalid_argument on malformed input.
std::vector<ResultRow> parse_csv(std::istream& in);

/// Flat `key = value` lines, `#` comments, values as TOML scalars or flat
/// arrays. Returns the raw value text per key with quotes and brackets kept.
std::map<std::string, std::string> parse_config_text(std::string_view text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Applies recognised keys (axis, values, snr_db, p_b, l, k, d, schemes,
/// trials, seed, metric, workers) to `config`. Unknown keys throw.
void apply_config(const std::map<std::string, std::string>& entries, SweepConfig& config);

/// Comma-separated list helpers shared by the config file and the CLI.
std::vector<double> parse_number_list(std::string_view text);
std::vector<std::string> parse_name_list(std::string_view text);
std::vector<Metric> parse_metric_list(std::string_view text);

}  // namespace macrodiv
