// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "macrodiv/verify.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "macrodiv/experiments.hpp"
#include "macrodiv/ofdm_async.hpp"
#include "macrodiv/schemes.hpp"

namespace macrodiv {

namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

std::size_t scaled(const VerifyOptions& options, std::size_t full, std::size_t quick) {
  return options.quick ? quick : full;
}

RngStream stream_for(const VerifyOptions& options, std::uint64_t check) {
  return RngStream(options.seed, 0x5eed0000 + check);
}

ChannelConfig config(int num_tx, double p_blocked, double snr) {
  return ChannelConfig(num_tx, snr, BlockageParams::from_blockage_prob(p_blocked));
}

}  // namespace

CheckResult check_closed_form_agreement(const VerifyOptions& options) {
  const std::size_t n = scaled(options, 1000000, 100000);
  const RngStream rng = stream_for(options, 1);
  CheckResult result{"closed-form agreement", true, ""};
  std::uint64_t j = 0;
  for (double snr : {0.1, 1.0, 10.0}) {
    const auto est = rbar_mc(2, snr, n, rng.substream(j++), false, options.workers);
    const double exact = rbar_closed(2, snr).value;
    const double z = (est.mean.value - exact) / est.std_error;
    result.passed = result.passed && std::abs(z) <= 4.0;
    result.detail += fmt("P=%g: mc %.6f closed %.6f z=%+.2f; ", snr, est.mean.value, exact, z);
  }
  return result;
}

CheckResult check_capacity_consistency(const VerifyOptions& options) {
  const std::size_t n = scaled(options, 1000000, 100000);
  const RngStream rng = stream_for(options, 2);
  CheckResult result{"capacity consistency", true, ""};
  struct Point {
    int num_tx;
    double p_blocked, snr;
  };
  std::uint64_t j = 0;
  for (const Point& pt : {Point{2, 0.5, 1.0}, Point{4, 0.1, 10.0}, Point{8, 0.3, 3.0}}) {
    const auto spec = SchemeSpec::capacity(config(pt.num_tx, pt.p_blocked, pt.snr));
    const double empirical =
        outage_from_samples(sample_inst_rates(spec, n, rng.substream(j++), options.workers)).value;
    const double exact = outage_capacity(pt.num_tx, pt.p_blocked, pt.snr).rate.value;
    const double rel = std::abs(empirical - exact) / exact;
    result.passed = result.passed && rel < 0.01;
    result.detail += fmt("(%d,%g,%g): %.5f vs %.5f rel %.2e; ", pt.num_tx, pt.p_blocked, pt.snr,
                         empirical, exact, rel);
  }
  return result;
}

CheckResult check_monotonicity(const VerifyOptions& options) {
  const std::size_t n = scaled(options, 100000, 20000);
  const RngStream rng = stream_for(options, 3);
  CheckResult result{"monotonicity", true, ""};
  double worst_rbar_z = std::numeric_limits<double>::infinity();
  double worst_ncjt_z = std::numeric_limits<double>::infinity();
  double worst_ts_margin = std::numeric_limits<double>::infinity();
  std::uint64_t j = 0;
  for (double snr : {0.5, 5.0}) {
    for (int i = 1; i <= 7; ++i) {
      const auto inc = rbar_increment_mc(i, snr, n, rng.substream(j++), options.workers);
      worst_rbar_z = std::min(worst_rbar_z, inc.mean.value / inc.std_error);
    }
    for (double pb : {0.1, 0.5}) {
      for (int num_tx = 1; num_tx <= 8; ++num_tx) {
        if (num_tx < 8) {
          const auto inc = ncjt_increment_mc(num_tx, pb, snr, n, rng.substream(j++), options.workers);
          worst_ncjt_z = std::min(worst_ncjt_z, inc.mean.value / inc.std_error);
        }
        const auto est = ergodic_estimate(SchemeSpec::ncjt(config(num_tx, pb, snr)), n,
                                          rng.substream(j++), {true, true, options.workers});
        const double ts = ts_ergodic_rate(num_tx, pb, snr).value;
        // Normalized margin; for L = 1 both are exact and equal.
        const double margin = est.std_error > 0.0 ? (est.mean.value - ts) / est.std_error
                                                  : (est.mean.value - ts + 1e-12 >= 0.0 ? 0.0 : -1e9);
        worst_ts_margin = std::min(worst_ts_margin, margin);
      }
    }
  }
  result.passed = worst_rbar_z > 4.0 && worst_ncjt_z > 4.0 && worst_ts_margin >= -4.0;
  result.detail = fmt("min z of rbar increments %.1f, of NCJT increments %.1f; min (NCJT - TS)/se %.1f",
                      worst_rbar_z, worst_ncjt_z, worst_ts_margin);
  return result;
}

CheckResult check_phase_diversity_concentration(const VerifyOptions& options) {
  const std::size_t blocks = scaled(options, 10000, 500);
  const std::size_t draws = scaled(options, 100, 50);
  const int num_tx = 4;
  const double p_blocked = 0.2, snr = 4.0;
  const RngStream rng = stream_for(options, 4);
  const int frame_lengths[] = {16, 64, 256};
  double pooled_std[3];
  for (int f = 0; f < 3; ++f) {
    const auto spec = SchemeSpec::phase_diversity(config(num_tx, p_blocked, snr), frame_lengths[f]);
    double total_var = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      // The same blocks at every K.
      RngStream state_rng = rng.substream(b);
      const ChannelState state = sample_stationary_state(state_rng, num_tx, p_blocked);
      RngStream phase_rng = rng.substream(b).substream(static_cast<std::uint64_t>(frame_lengths[f]));
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t d = 0; d < draws; ++d) {
        const double r = inst_rate(spec, state, phase_rng).rate.value;
        sum += r;
        sum_sq += r * r;
      }
      const double mean = sum / static_cast<double>(draws);
      total_var += std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(draws - 1));
    }
    pooled_std[f] = std::sqrt(total_var / static_cast<double>(blocks));
  }
  const double r1 = pooled_std[0] / pooled_std[1];
  const double r2 = pooled_std[1] / pooled_std[2];
  return {"phase-diversity concentration", r1 >= 1.8 && r2 >= 1.8,
          fmt("conditional std K=16 %.5f, K=64 %.5f, K=256 %.5f; ratios %.3f, %.3f",
              pooled_std[0], pooled_std[1], pooled_std[2], r1, r2)};
}

CheckResult check_asymptotic_outage(const VerifyOptions& options) {
  const std::size_t n = scaled(options, 100000, 10000);
  const int num_tx = 4;
  const double p_blocked = 0.2, snr = 4.0;
  const RngStream rng = stream_for(options, 5);
  const auto spec = SchemeSpec::phase_diversity(config(num_tx, p_blocked, snr), 256);
  const double empirical =
      outage_from_samples(sample_inst_rates(spec, n, rng.substream(0), options.workers)).value;
  Eigen::ArrayXd rbar(num_tx + 1);
  for (int i = 0; i <= num_tx; ++i) {
    rbar(i) = i <= 2 ? rbar_closed(i, snr).value
                     : rbar_mc(i, snr, scaled(options, 1000000, 100000),
                               rng.substream(static_cast<std::uint64_t>(10 + i)), true, options.workers)
                           .mean.value;
  }
  const auto target = rbar_out(num_tx, p_blocked, snr, rbar);
  const double rel = std::abs(empirical - target.rate.value) / target.rate.value;
  // Larger K for context only: the gap is a finite-K bias, not noise.
  const auto wide = SchemeSpec::phase_diversity(config(num_tx, p_blocked, snr), 1024);
  const double wide_empirical =
      outage_from_samples(sample_inst_rates(wide, n / 5, rng.substream(1), options.workers)).value;
  const double wide_rel = std::abs(wide_empirical - target.rate.value) / target.rate.value;
  return {"asymptotic outage", rel < 0.05,
          fmt("phase diversity K=256: %.5f, rbar outage %.5f (i*=%d), rel %.3f; K=1024: %.5f rel %.3f",
              empirical, target.rate.value, target.argmax_index, rel, wide_empirical, wide_rel)};
}

CheckResult check_alamouti(const VerifyOptions& options) {
  const std::size_t n = scaled(options, 100000, 20000);
  const double snr = 2.0;
  const RngStream rng = stream_for(options, 6);
  CheckResult result{"alamouti", true, ""};
  struct Case {
    int beta1, beta2;
    double theta1, theta2;
  };
  std::uint64_t j = 0;
  for (const Case& c : {Case{0, 0, 0.3, 1.1}, Case{1, 0, 0.7, 2.0}, Case{1, 1, 0.4, 2.9}}) {
    ChannelState state{Eigen::ArrayXi(2), Eigen::ArrayXd(2)};
    state.beta << c.beta1, c.beta2;
    state.theta << c.theta1, c.theta2;
    RngStream r = rng.substream(j++);
    const auto res = alamouti_symbol_check(state, snr, n, r);
    const int alpha = state.alpha();
    const double z = (res.effective_snr - alpha * snr) / res.snr_std_error;
    result.passed = result.passed && std::abs(z) <= 4.0;
    result.detail += fmt("alpha=%d: snr %.4f (target %.1f, z=%+.2f); ", alpha, res.effective_snr,
                         alpha * snr, z);
  }
  bool identity = true;
  for (double pb : {0.01, 0.1, 0.3, 0.5, 0.9}) {
    for (double snr_db : {-5.0, 0.0, 10.0, 25.0}) {
      const double p = snr_from_db(snr_db);
      identity = identity && two_tx_alamouti_rate(2, pb, p) == ergodic_capacity(2, pb, p);
    }
  }
  result.passed = result.passed && identity;
  result.detail += identity ? "two-tx rate == capacity at L=2" : "two-tx rate != capacity at L=2";
  return result;
}

CheckResult check_worst_case_delay(const VerifyOptions&) {
  const OfdmConfig ofdm{64, 4, 2.0};
  CheckResult result{"worst-case delay", true, ""};
  for (int num_tx : {1, 2}) {
    const auto report = verify_worst_case_delta(num_tx, 0.2, 4.0, ofdm, 21);
    const double on_grid_err = std::abs(report.on_grid - report.synchronous_scaled);
    result.passed = result.passed && report.min_at_half && on_grid_err <= 1e-9;
    result.detail += fmt("L=%d: argmin delta0=%.2f min %.9f worst-case %.9f, |R(0)-K/(K+D)C| %.1e; ",
                         num_tx, report.argmin(0), report.min_rate, report.worst_case, on_grid_err);
  }
  return result;
}

CheckResult check_riemann_limit(const VerifyOptions&) {
  // The frame rate carries the cyclic-prefix factor K/(K+D); the Riemann
  // error is measured after removing it. At moderate SNR the periodic
  // trapezoid sum is exact to rounding already at K = 64, so the point is
  // chosen at high SNR where the error is resolvable at every K.
  const int num_tx = 16;
  const double p_blocked = 0.1, snr = snr_from_db(50.0);
  const int prefix = 16;
  const double limit = async_capacity_limit(num_tx, p_blocked, snr).value;
  CheckResult result{"riemann limit", true, ""};
  double previous = std::numeric_limits<double>::infinity();
  double previous_raw = std::numeric_limits<double>::infinity();
  double last_gap = 0.0;
  bool raw_monotone = true;
  for (int k : {64, 256, 1024, 4096}) {
    const OfdmConfig ofdm{k, prefix, 0.0};
    const double finite = worst_case_capacity(num_tx, p_blocked, snr, ofdm).value;
    const double gap = std::abs(finite / ofdm.overhead() - limit);
    const double raw = std::abs(finite - limit);
    result.passed = result.passed && gap < previous;
    raw_monotone = raw_monotone && raw < previous_raw;
    result.detail += fmt("K=%d gap %.3e (raw %.3e); ", k, gap, raw);
    previous = gap;
    previous_raw = raw;
    last_gap = gap;
  }
  result.passed = result.passed && last_gap < 2e-3 && raw_monotone;
  result.detail += fmt("limit %.6f bits at L=%d p_B=%g P=50 dB D=%d", limit, num_tx, p_blocked, prefix);
  return result;
}

CheckResult check_hoeffding(const VerifyOptions& options) {
  const std::size_t blocks = scaled(options, 10, 2);
  const std::size_t draws = scaled(options, 10000, 1000);
  const RngStream rng = stream_for(options, 9);
  CheckResult result{"hoeffding bound", true, ""};
  for (int k : {16, 64, 256}) {
    const OfdmConfig ofdm{k, 2, 1.0};
    const auto report = hoeffding_check(4, 0.2, 1.0, ofdm, blocks, rng.substream(static_cast<std::uint64_t>(k)),
                                        {0.1, 0.2, 0.5}, draws, options.workers);
    result.passed = result.passed && report.passed;
    for (const auto& row : report.rows) {
      result.detail += fmt("K=%d eps=%.1f freq %.4f <= %.4f; ", k, row.epsilon, row.max_block_frequency,
                           row.bound);
    }
  }
  return result;
}

CheckResult check_six_db(const VerifyOptions&) {
  bool ok = true;
  double worst_loss_db = 0.0;
  for (int i = 1; i <= 16; ++i) {
    for (int e = -40; e <= 60; ++e) {
      const double snr = std::pow(10.0, e / 10.0);
      const double eff = async_effective_snr(static_cast<double>(i), snr);
      ok = ok && eff >= i * snr / 4.0;
      worst_loss_db = std::max(worst_loss_db, 10.0 * std::log10(i * snr / eff));
    }
  }
  ok = ok && async_effective_snr(0.0, 1.0) == 0.0;
  return {"6 dB claim", ok, fmt("largest SNR loss %.4f dB over i<=16, P in [-40, 60] dB", worst_loss_db)};
}

CheckResult check_determinism(const VerifyOptions& options) {
  SweepConfig config;
  config.axis = SweepAxis::BlockageProb;
  config.axis_values = {0.1, 0.3};
  config.fixed.num_tx = 4;
  config.fixed.num_subcarriers = 8;
  config.fixed.cyclic_prefix = 2;
  config.schemes = {"capacity", "ncjt", "phase_div", "cdd", "ncja", "wc_ncjt", "wc_phase_div"};
  config.metrics = {Metric::Ergodic, Metric::Outage};
  config.n_trials = scaled(options, 6000, 3000);
  config.seed = options.seed;
  std::string reference;
  bool identical = true;
  std::size_t rows = 0;
  for (unsigned workers : {1u, 4u, 16u}) {
    config.workers = workers;
    const SweepResult sweep = run_sweep(config);
    std::ostringstream out;
    emit_csv(sweep.rows, out);
    if (workers == 1) {
      reference = out.str();
      rows = sweep.rows.size();
    } else {
      identical = identical && out.str() == reference;
    }
  }
  return {"determinism", identical && rows > 0,
          fmt("%zu rows, CSV %s at 1, 4 and 16 workers", rows, identical ? "byte-identical" : "differs")};
}

std::vector<CheckResult> run_acceptance(const VerifyOptions& options) {
  return {check_closed_form_agreement(options),  check_capacity_consistency(options),
          check_monotonicity(options),           check_phase_diversity_concentration(options),
          check_asymptotic_outage(options),      check_alamouti(options),
          check_worst_case_delay(options),       check_riemann_limit(options),
          check_hoeffding(options),              check_six_db(options),
          check_determinism(options)};
}

}  // namespace macrodiv
