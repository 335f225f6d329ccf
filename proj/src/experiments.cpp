// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "macrodiv/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "macrodiv/channel.hpp"
#include "macrodiv/closed_forms.hpp"
#include "macrodiv/ofdm_async.hpp"
#include "macrodiv/schemes.hpp"

namespace macrodiv {

namespace {

constexpr std::size_t kDefaultErgodicTrials = 100000;
constexpr std::size_t kDefaultOutageTrials = 1000000;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

// Splits "a, b, c" or "[a, b, c]" into trimmed, unquoted items.
std::vector<std::string> split_list(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw std::invalid_argument("unterminated array '" + std::string(text) + "'");
    text = text.substr(1, text.size() - 2);
  }
  std::vector<std::string> items;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string item = unquote(text.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return items;
}

double parse_double(std::string_view text) {
  const std::string s = unquote(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return value;
}

template <class Int>
Int parse_integer(std::string_view text) {
  const std::string s = unquote(text);
  Int value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    // Allow integral values written in floating-point form, e.g. 1e5.
    const double d = parse_double(s);
    if (d != std::floor(d) || d < 0.0 || d > 9.0e18) {
      throw std::invalid_argument("not a non-negative integer: '" + s + "'");
    }
    return static_cast<Int>(d);
  }
  return value;
}

struct PointParams {
  int num_tx;
  double p_blocked;
  double snr;
  int num_subcarriers;
  int cyclic_prefix;
};

PointParams point_at(const SweepConfig& config, double axis_value) {
  PointParams p{config.fixed.num_tx, config.fixed.p_blocked, snr_from_db(config.fixed.snr_db),
                config.fixed.num_subcarriers, config.fixed.cyclic_prefix};
  switch (config.axis) {
    case SweepAxis::BlockageProb:
      p.p_blocked = axis_value;
      break;
    case SweepAxis::SnrDb:
      p.snr = snr_from_db(axis_value);
      break;
    case SweepAxis::NumTx:
      if (axis_value != std::floor(axis_value)) throw std::invalid_argument("L must be an integer");
      p.num_tx = static_cast<int>(axis_value);
      break;
    case SweepAxis::Subcarriers:
      if (axis_value != std::floor(axis_value)) throw std::invalid_argument("K must be an integer");
      p.num_subcarriers = static_cast<int>(axis_value);
      break;
  }
  return p;
}

OfdmConfig ofdm_of(const PointParams& p) {
  // The largest residual delay this cyclic prefix tolerates.
  OfdmConfig ofdm{p.num_subcarriers, p.cyclic_prefix, static_cast<double>(p.cyclic_prefix - 1)};
  ofdm.validate();
  return ofdm;
}

ChannelConfig channel_of(const PointParams& p) {
  if (!(p.p_blocked > 0.0 && p.p_blocked < 1.0)) {
    throw std::invalid_argument("Monte Carlo schemes need 0 < p_B < 1");
  }
  return ChannelConfig(p.num_tx, p.snr, BlockageParams::from_blockage_prob(p.p_blocked));
}

SchemeSpec spec_of(SchemeKind kind, const PointParams& p) {
  const ChannelConfig cfg = channel_of(p);
  switch (kind) {
    case SchemeKind::PhaseDiversity:
      return SchemeSpec::phase_diversity(cfg, p.num_subcarriers);
    case SchemeKind::NCJA:
      return SchemeSpec::ncja(cfg, p.num_subcarriers);
    case SchemeKind::CyclicDelayDiversity: {
      Eigen::ArrayXi delays(p.num_tx);
      for (int l = 0; l < p.num_tx; ++l) delays(l) = l % p.num_subcarriers;
      return SchemeSpec::cyclic_delay_diversity(cfg, p.num_subcarriers, delays);
    }
    default:
      return {kind, cfg, 1, {}};
  }
}

struct RowValue {
  double rate = 0.0;
  double std_error = 0.0;
  std::size_t n_trials = 0;
  std::optional<int> argmax;
};

RowValue exact(double rate) { return {rate, 0.0, 0, std::nullopt}; }
RowValue exact(const OutageSolution& sol) { return {sol.rate.value, 0.0, 0, sol.argmax_index}; }
RowValue estimated(const RateEstimate& est) { return {est.mean.value, est.std_error, est.n_trials, std::nullopt}; }

RowValue empirical(const SchemeSpec& spec, std::size_t n, const RngStream& rng, unsigned workers) {
  const auto out = empirical_outage(sample_inst_rates(spec, n, rng, workers));
  return {out.rate.value, out.std_error(), n, std::nullopt};
}

RowValue compute_row(const std::string& scheme, Metric metric, const PointParams& p, std::size_t n,
                     const RngStream& rng, unsigned workers) {
  const bool ergodic = metric == Metric::Ergodic;
  if (scheme == "wc_capacity") {
    const OfdmConfig ofdm = ofdm_of(p);
    return ergodic ? exact(worst_case_capacity(p.num_tx, p.p_blocked, p.snr, ofdm).value)
                   : exact(worst_case_outage(p.num_tx, p.p_blocked, p.snr, ofdm));
  }
  if (scheme == "wc_ncjt") {
    if (!ergodic) throw std::invalid_argument("wc_ncjt has no outage expression");
    return estimated(ncjt_async_ergodic(p.num_tx, p.p_blocked, p.snr, ofdm_of(p), n, rng, workers));
  }
  if (scheme == "wc_phase_div") {
    const OfdmConfig ofdm = ofdm_of(p);
    if (ergodic) {
      return estimated(rate_at_delays(AsyncScheme::NCJTPhaseDiversity, DelayProfile::uniform(p.num_tx, 0.5),
                                      p.num_tx, p.p_blocked, p.snr, ofdm, n, rng, workers));
    }
    const auto sol = async_phase_div_outage(p.num_tx, p.p_blocked, p.snr, ofdm, n, rng, workers);
    return {sol.rate.value, 0.0, n, sol.argmax_index};
  }

  const SchemeKind kind = parse_scheme_kind(scheme);
  switch (kind) {
    case SchemeKind::Capacity:
      return ergodic ? exact(ergodic_capacity(p.num_tx, p.p_blocked, p.snr).value)
                     : exact(outage_capacity(p.num_tx, p.p_blocked, p.snr));
    case SchemeKind::TransmitterSelection: {
      const double rate = ts_ergodic_rate(p.num_tx, p.p_blocked, p.snr).value;
      return ergodic ? exact(rate) : exact(OutageSolution{{rate}, 1});
    }
    case SchemeKind::TwoTxSelection:
      return ergodic ? exact(two_tx_alamouti_rate(p.num_tx, p.p_blocked, p.snr).value)
                     : exact(two_tx_alamouti_outage(p.num_tx, p.p_blocked, p.snr));
    default:
      break;
  }
  const SchemeSpec spec = spec_of(kind, p);
  spec.validate();
  if (!ergodic) return empirical(spec, n, rng, workers);
  EstimatorOptions options;
  options.workers = workers;
  options.stratified = kind == SchemeKind::NCJT || kind == SchemeKind::PhaseDiversity;
  options.rao_blackwell = kind == SchemeKind::NCJT;
  return estimated(ergodic_estimate(spec, n, rng, options));
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  return file;
}

template <class Emit>
void write_with(const std::string& path, Emit&& emit) {
  if (path.empty() || path == "-") {
    emit(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to standard output");
    return;
  }
  std::ofstream file = open_output(path);
  emit(file);
  file.flush();
  if (!file) throw IoError("failed writing '" + path + "'");
}

double rounded(double value) { return std::stod(format_float(value)); }

// Evenly spaced subset that keeps the first and last points.
std::vector<CcdfPoint> thin(const std::vector<CcdfPoint>& points, std::size_t max_points) {
  if (max_points == 0 || points.size() <= max_points) return points;
  if (max_points == 1) return {points.front()};
  std::vector<CcdfPoint> out;
  out.reserve(max_points);
  const double step = static_cast<double>(points.size() - 1) / static_cast<double>(max_points - 1);
  for (std::size_t j = 0; j < max_points; ++j) {
    out.push_back(points[static_cast<std::size_t>(std::llround(static_cast<double>(j) * step))]);
  }
  return out;
}

}  // namespace

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::BlockageProb:
      return "p_B";
    case SweepAxis::SnrDb:
      return "snr_db";
    case SweepAxis::NumTx:
      return "L";
    case SweepAxis::Subcarriers:
      return "K";
  }
  return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "p_B" || name == "pb") return SweepAxis::BlockageProb;
  if (name == "snr_db") return SweepAxis::SnrDb;
  if (name == "L") return SweepAxis::NumTx;
  if (name == "K") return SweepAxis::Subcarriers;
  throw std::invalid_argument("unknown axis '" + std::string(name) + "' (expected p_B, snr_db, L or K)");
}

std::string_view metric_name(Metric metric) {
  return metric == Metric::Ergodic ? "ergodic" : "outage";
}

Metric parse_metric(std::string_view name) {
  if (name == "ergodic") return Metric::Ergodic;
  if (name == "outage") return Metric::Outage;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

const std::vector<std::string>& sweep_scheme_names() {
  static const std::vector<std::string> names{"capacity", "ts",    "ncjt",        "phase_div",
                                              "cdd",      "two_tx", "ncja",       "wc_capacity",
                                              "wc_ncjt",  "wc_phase_div"};
  return names;
}

double snr_from_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

std::vector<double> default_axis_values(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::BlockageProb:
      return {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    case SweepAxis::SnrDb:
      return {-5, 0, 5, 10, 15, 20, 25};
    case SweepAxis::NumTx: {
      std::vector<double> v;
      for (int l = 1; l <= 16; ++l) v.push_back(l);
      return v;
    }
    case SweepAxis::Subcarriers:
      return {1, 4, 16, 64};
  }
  return {};
}

void SweepConfig::validate() const {
  if (axis_values.empty()) throw std::invalid_argument("axis values must not be empty");
  for (std::size_t j = 1; j < axis_values.size(); ++j) {
    if (!(axis_values[j] > axis_values[j - 1])) {
      throw std::invalid_argument("axis values must be strictly increasing");
    }
  }
  if (schemes.empty()) throw std::invalid_argument("at least one scheme is required");
  const auto& known = sweep_scheme_names();
  for (const auto& s : schemes) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw std::invalid_argument("unknown scheme '" + s + "'");
    }
  }
  if (metrics.empty()) throw std::invalid_argument("at least one metric is required");
  if (n_trials && *n_trials < 1) throw std::invalid_argument("trial count must be positive");
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
}

std::size_t SweepConfig::trials_for(Metric metric) const {
  if (n_trials) return *n_trials;
  return metric == Metric::Ergodic ? kDefaultErgodicTrials : kDefaultOutageTrials;
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const RngStream base(config.seed, 0);
  const std::string axis(axis_name(config.axis));
  SweepResult result;
  std::uint64_t row_index = 0;
  for (double value : config.axis_values) {
    for (const auto& scheme : config.schemes) {
      for (Metric metric : config.metrics) {
        const RngStream row_rng = base.substream(row_index++);
        try {
          const PointParams p = point_at(config, value);
          const RowValue v =
              compute_row(scheme, metric, p, config.trials_for(metric), row_rng, config.workers);
          result.rows.push_back({axis, value, scheme, std::string(metric_name(metric)), v.rate,
                                 v.std_error, v.n_trials, v.argmax});
        } catch (const std::invalid_argument& e) {
          result.errors.push_back({value, scheme, std::string(metric_name(metric)), e.what()});
        } catch (const std::domain_error& e) {
          result.errors.push_back({value, scheme, std::string(metric_name(metric)), e.what()});
        }
      }
    }
  }
  return result;
}

std::vector<CcdfRow> run_ccdf(const CcdfConfig& config) {
  if (config.n_trials < 1) throw std::invalid_argument("trial count must be positive");
  const PointParams p{config.fixed.num_tx, config.fixed.p_blocked, snr_from_db(config.fixed.snr_db),
                      config.fixed.num_subcarriers, config.fixed.cyclic_prefix};
  const SchemeKind kind = parse_scheme_kind(config.scheme);
  const SchemeSpec spec = spec_of(kind, p);
  spec.validate();
  const Eigen::ArrayXd samples =
      sample_inst_rates(spec, config.n_trials, RngStream(config.seed, 0), config.workers);

  std::vector<CcdfRow> rows;
  for (const auto& pt : thin(ccdf_points(samples), config.max_points)) {
    rows.push_back({config.scheme, pt.rate, pt.ccdf});
  }
  const Eigen::ArrayXd ccdf = alpha_ccdf(p.num_tx, p.p_blocked);
  for (int i = 0; i <= p.num_tx; ++i) {
    rows.push_back({"analytic_steps", std::log2(1.0 + i * p.snr), ccdf(i)});
  }
  return rows;
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_float(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.9g", value);
  return buf;
}

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.axis << ',' << format_float(r.axis_value) << ',' << r.scheme << ',' << r.metric << ','
        << format_float(r.rate_bits) << ',' << format_float(r.std_error) << ',' << r.n_trials << ',';
    if (r.argmax_i) out << *r.argmax_i;
    out << '\n';
  }
}

void emit_json(const std::vector<ResultRow>& rows, std::ostream& out) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["axis"] = r.axis;
    row["axis_value"] = rounded(r.axis_value);
    row["scheme"] = r.scheme;
    row["metric"] = r.metric;
    row["rate_bits"] = rounded(r.rate_bits);
    row["std_error"] = rounded(r.std_error);
    row["n_trials"] = r.n_trials;
    row["argmax_i"] = r.argmax_i ? nlohmann::ordered_json(*r.argmax_i) : nlohmann::ordered_json();
    doc.push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

void emit_ccdf_csv(const std::vector<CcdfRow>& rows, std::ostream& out) {
  out << kCcdfCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.series << ',' << format_float(r.rate_bits) << ',' << format_float(r.ccdf) << '\n';
  }
}

void emit_ccdf_json(const std::vector<CcdfRow>& rows, std::ostream& out) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    doc.push_back({{"series", r.series}, {"rate_bits", rounded(r.rate_bits)}, {"ccdf", rounded(r.ccdf)}});
  }
  out << doc.dump(2) << '\n';
}

void write_rows(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path) {
  write_with(path, [&](std::ostream& out) {
    format == OutputFormat::Csv ? emit_csv(rows, out) : emit_json(rows, out);
  });
}

void write_ccdf(const std::vector<CcdfRow>& rows, OutputFormat format, const std::string& path) {
  write_with(path, [&](std::ostream& out) {
    format == OutputFormat::Csv ? emit_ccdf_csv(rows, out) : emit_ccdf_json(rows, out);
  });
}

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("missing or unexpected CSV header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 8) throw std::invalid_argument("expected 8 fields in '" + line + "'");
    ResultRow r;
    r.axis = fields[0];
    r.axis_value = parse_double(fields[1]);
    r.scheme = fields[2];
    r.metric = fields[3];
    r.rate_bits = parse_double(fields[4]);
    r.std_error = parse_double(fields[5]);
    r.n_trials = parse_integer<std::size_t>(fields[6]);
    if (!fields[7].empty()) r.argmax_i = parse_integer<int>(fields[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> entries;
  int line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (line[j] == '"') quoted = !quoted;
      if (line[j] == '#' && !quoted) {
        line = line.substr(0, j);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key or value");
    }
    entries[key] = value;
  }
  return entries;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str());
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) values.push_back(parse_double(item));
  return values;
}

std::vector<std::string> parse_name_list(std::string_view text) { return split_list(text); }

std::vector<Metric> parse_metric_list(std::string_view text) {
  std::vector<Metric> metrics;
  for (const auto& item : split_list(text)) {
    if (item == "both") {
      metrics.push_back(Metric::Ergodic);
      metrics.push_back(Metric::Outage);
    } else {
      metrics.push_back(parse_metric(item));
    }
  }
  return metrics;
}

void apply_config(const std::map<std::string, std::string>& entries, SweepConfig& config) {
  for (const auto& [key, value] : entries) {
    if (key == "axis") {
      config.axis = parse_axis(unquote(value));
    } else if (key == "values") {
      config.axis_values = parse_number_list(value);
    } else if (key == "snr_db") {
      config.fixed.snr_db = parse_double(value);
    } else if (key == "p_b" || key == "pb" || key == "p_B") {
      config.fixed.p_blocked = parse_double(value);
    } else if (key == "l" || key == "L") {
      config.fixed.num_tx = parse_integer<int>(value);
    } else if (key == "k" || key == "K") {
      config.fixed.num_subcarriers = parse_integer<int>(value);
    } else if (key == "d" || key == "D") {
      config.fixed.cyclic_prefix = parse_integer<int>(value);
    } else if (key == "schemes") {
      config.schemes = parse_name_list(value);
    } else if (key == "trials") {
      config.n_trials = parse_integer<std::size_t>(value);
    } else if (key == "seed") {
      config.seed = parse_integer<std::uint64_t>(value);
    } else if (key == "metric") {
      config.metrics = parse_metric_list(value);
    } else if (key == "workers") {
      config.workers = parse_integer<unsigned>(value);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

}  // namespace macrodiv
