// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "macrodiv/ofdm_async.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "macrodiv/channel.hpp"
#include "macrodiv/parallel.hpp"

namespace macrodiv {

namespace {

void check_inputs(int num_tx, double p_blocked, double snr) {
  if (num_tx < 1) throw std::invalid_argument("need at least one transmitter");
  if (!(p_blocked >= 0.0 && p_blocked <= 1.0)) {
    throw std::invalid_argument("blockage probability must lie in [0, 1]");
  }
  if (!(snr > 0.0)) throw std::invalid_argument("SNR must be positive");
}

// Per-(k, l) frequency response without the blockage/phase term:
// exp(-j 2 pi k d_l / K) G_l[k].
Eigen::ArrayXXcd delay_responses(const DelayProfile& delays, int num_subcarriers) {
  const Eigen::ArrayXi whole = delays.integer_part();
  const Eigen::ArrayXd frac = delays.fractional_part();
  Eigen::ArrayXXcd response(num_subcarriers, delays.num_tx());
  for (int l = 0; l < delays.num_tx(); ++l) {
    for (int k = 0; k < num_subcarriers; ++k) {
      const double w = 2.0 * std::numbers::pi * k * whole(l) / num_subcarriers;
      response(k, l) = std::polar(1.0, -w) * subcarrier_gain(frac(l), k, num_subcarriers);
    }
  }
  return response;
}

void check_profile(const DelayProfile& delays, int num_tx, const OfdmConfig& ofdm) {
  ofdm.validate();
  if (delays.num_tx() != num_tx) throw std::invalid_argument("one delay per transmitter required");
  if ((delays.tau() > ofdm.tau_max + 1e-12).any()) {
    throw std::invalid_argument("delays must not exceed tau_max");
  }
}

// Frame rate (1/(K+D)) sum_k log2(1 + |sum_l beta_l e^{j(theta_l + extra)} R[k,l]|^2 P)
// averaged over the phase of the last connected link, which is done in closed
// form per subcarrier. `extra_phase(l, k)` supplies per-subcarrier rotations.
template <class ExtraPhase>
double rao_blackwell_frame_rate(const Eigen::ArrayXXcd& response, const Eigen::ArrayXi& beta,
                                const Eigen::ArrayXd& theta, double snr, int cyclic_prefix,
                                ExtraPhase&& extra_phase) {
  const int num_subcarriers = static_cast<int>(response.rows());
  int last = -1;
  for (int l = static_cast<int>(beta.size()) - 1; l >= 0; --l) {
    if (beta(l) != 0) {
      last = l;
      break;
    }
  }
  if (last < 0) return 0.0;
  const double amp = std::sqrt(snr);
  double total = 0.0;
  for (int k = 0; k < num_subcarriers; ++k) {
    std::complex<double> rest{0.0, 0.0};
    for (int l = 0; l < last; ++l) {
      if (beta(l) != 0) rest += std::polar(1.0, theta(l) + extra_phase(l, k)) * response(k, l);
    }
    total += ring_expectation(std::abs(rest) * amp, std::abs(response(k, last)) * amp);
  }
  return total / (num_subcarriers + cyclic_prefix);
}

}  // namespace

void OfdmConfig::validate() const {
  if (num_subcarriers < 2) throw std::invalid_argument("OFDM needs K >= 2 subcarriers");
  if (!(tau_max >= 0.0)) throw std::invalid_argument("tau_max must be non-negative");
  if (cyclic_prefix < static_cast<int>(std::ceil(tau_max)) + 1) {
    throw std::invalid_argument("cyclic prefix must satisfy D >= ceil(tau_max) + 1, got D=" +
                                std::to_string(cyclic_prefix));
  }
}

DelayProfile::DelayProfile(Eigen::ArrayXd tau) : tau_(std::move(tau)) {
  if (tau_.size() == 0) throw std::invalid_argument("delay profile needs at least one delay");
  if ((tau_ < 0.0).any() || !tau_.isFinite().all()) {
    throw std::invalid_argument("delays must be finite and non-negative");
  }
}

Eigen::ArrayXi DelayProfile::integer_part() const {
  return tau_.floor().cast<int>();
}

Eigen::ArrayXd DelayProfile::fractional_part() const { return tau_ - tau_.floor(); }

Eigen::ArrayXd off_grid_power_factors(int num_subcarriers) {
  Eigen::ArrayXd factors(num_subcarriers);
  for (int k = 0; k < num_subcarriers; ++k) {
    factors(k) = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * k / num_subcarriers));
  }
  return factors;
}

RateBits worst_case_capacity(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm) {
  check_inputs(num_tx, p_blocked, snr);
  ofdm.validate();
  const Eigen::ArrayXd pmf = alpha_pmf(num_tx, p_blocked);
  const Eigen::ArrayXd factors = off_grid_power_factors(ofdm.num_subcarriers);
  double total = 0.0;
  for (int k = 0; k < ofdm.num_subcarriers; ++k) {
    for (int i = 1; i <= num_tx; ++i) total += pmf(i) * std::log2(1.0 + i * snr * factors(k));
  }
  return {total / (ofdm.num_subcarriers + ofdm.cyclic_prefix)};
}

OutageSolution worst_case_outage(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm) {
  check_inputs(num_tx, p_blocked, snr);
  ofdm.validate();
  const Eigen::ArrayXd ccdf = alpha_ccdf(num_tx, p_blocked);
  const Eigen::ArrayXd factors = off_grid_power_factors(ofdm.num_subcarriers);
  OutageSolution best{{-1.0}, 1};
  for (int i = 1; i <= num_tx; ++i) {
    const double frame_rate = (1.0 + i * snr * factors).log().sum() / std::numbers::ln2 /
                              (ofdm.num_subcarriers + ofdm.cyclic_prefix);
    const double candidate = ccdf(i) * frame_rate;
    if (candidate > best.rate.value * (1.0 + kOutageTieTolerance)) best = {{candidate}, i};
  }
  return best;
}

RateEstimate ncjt_async_ergodic(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm,
                                std::size_t n, const RngStream& rng, unsigned workers) {
  check_inputs(num_tx, p_blocked, snr);
  ofdm.validate();
  if (n < 1) throw std::invalid_argument("need at least one trial");
  const Eigen::ArrayXd factors = off_grid_power_factors(ofdm.num_subcarriers);
  const Eigen::ArrayXd amps = (snr * factors).sqrt();
  const double p_on = 1.0 - p_blocked;
  const double scale = 1.0 / (ofdm.num_subcarriers + ofdm.cyclic_prefix);
  const auto acc = accumulate_trials(n, rng, workers, [&](RngStream& r) {
    // |h| given that one connected link is held out; the held-out phase is
    // integrated per subcarrier.
    int alpha = 0;
    for (int l = 0; l < num_tx; ++l) alpha += r.bernoulli(p_on) ? 1 : 0;
    if (alpha == 0) return 0.0;
    std::complex<double> rest{0.0, 0.0};
    for (int l = 0; l < alpha - 1; ++l) rest += r.unit_phasor();
    const double rest_mag = std::abs(rest);
    double total = 0.0;
    for (int k = 0; k < ofdm.num_subcarriers; ++k) total += ring_expectation(rest_mag * amps(k), amps(k));
    return total * scale;
  });
  return {{acc.mean}, acc.std_error(), acc.count};
}

RateEstimate ncjt_async_ergodic_limit(int num_tx, double p_blocked, double snr, std::size_t n,
                                      const RngStream& rng, unsigned workers) {
  check_inputs(num_tx, p_blocked, snr);
  if (n < 1) throw std::invalid_argument("need at least one trial");
  const double p_on = 1.0 - p_blocked;
  const auto acc = accumulate_trials(n, rng, workers, [&](RngStream& r) {
    std::complex<double> h{0.0, 0.0};
    for (int l = 0; l < num_tx; ++l) {
      const bool on = r.bernoulli(p_on);
      const std::complex<double> phasor = r.unit_phasor();
      if (on) h += phasor;
    }
    return std::log2(1.0 + async_effective_snr(std::norm(h), snr));
  });
  return {{acc.mean}, acc.std_error(), acc.count};
}

RateEstimate rate_at_delays(AsyncScheme scheme, const DelayProfile& delays, int num_tx,
                            double p_blocked, double snr, const OfdmConfig& ofdm, std::size_t n,
                            const RngStream& rng, unsigned workers) {
  check_inputs(num_tx, p_blocked, snr);
  check_profile(delays, num_tx, ofdm);
  const int num_subcarriers = ofdm.num_subcarriers;
  const Eigen::ArrayXXcd response = delay_responses(delays, num_subcarriers);

  if (scheme == AsyncScheme::Capacity) {
    if (num_tx > 24) throw std::invalid_argument("exact enumeration limited to L <= 24");
    const Eigen::ArrayXXd power = response.abs2();
    const double scale = 1.0 / (num_subcarriers + ofdm.cyclic_prefix);
    double total = 0.0;
    for (std::uint32_t pattern = 1; pattern < (1u << num_tx); ++pattern) {
      double prob = 1.0;
      Eigen::ArrayXd received = Eigen::ArrayXd::Zero(num_subcarriers);
      for (int l = 0; l < num_tx; ++l) {
        if (pattern & (1u << l)) {
          prob *= 1.0 - p_blocked;
          received += power.col(l);
        } else {
          prob *= p_blocked;
        }
      }
      if (prob == 0.0) continue;
      total += prob * (1.0 + snr * received).log().sum() / std::numbers::ln2 * scale;
    }
    return RateEstimate::exact(total);
  }

  if (n < 1) throw std::invalid_argument("need at least one trial");
  const bool diversity = scheme == AsyncScheme::NCJTPhaseDiversity;
  const auto acc = accumulate_trials(n, rng, workers, [&](RngStream& r) {
    const ChannelState state = sample_stationary_state(r, num_tx, p_blocked);
    if (!diversity) {
      return rao_blackwell_frame_rate(response, state.beta, state.theta, snr, ofdm.cyclic_prefix,
                                      [](int, int) { return 0.0; });
    }
    return rao_blackwell_frame_rate(response, state.beta, state.theta, snr, ofdm.cyclic_prefix,
                                    [&r](int, int) { return r.phase(); });
  });
  return {{acc.mean}, acc.std_error(), acc.count};
}

WorstCaseDeltaReport verify_worst_case_delta(int num_tx, double p_blocked, double snr,
                                             const OfdmConfig& ofdm, int grid_resolution) {
  if (grid_resolution < 3) throw std::invalid_argument("grid resolution must be >= 3");
  std::vector<double> grid(static_cast<std::size_t>(grid_resolution));
  for (int j = 0; j < grid_resolution; ++j) grid[j] = static_cast<double>(j) / (grid_resolution - 1);
  return verify_worst_case_delta(num_tx, p_blocked, snr, ofdm, grid);
}

WorstCaseDeltaReport verify_worst_case_delta(int num_tx, double p_blocked, double snr,
                                             const OfdmConfig& ofdm, const std::vector<double>& grid) {
  check_inputs(num_tx, p_blocked, snr);
  ofdm.validate();
  if (grid.empty()) throw std::invalid_argument("delay grid must not be empty");
  if (num_tx > 6) throw std::invalid_argument("product-grid search limited to L <= 6");
  const RngStream unused(0, 0);
  auto evaluate = [&](const Eigen::ArrayXd& tau) {
    return rate_at_delays(AsyncScheme::Capacity, DelayProfile(tau), num_tx, p_blocked, snr, ofdm, 1,
                          unused)
        .mean.value;
  };

  WorstCaseDeltaReport report;
  report.grid = grid;
  std::size_t n_points = 1;
  for (int l = 0; l < num_tx; ++l) n_points *= grid.size();
  report.rates.resize(static_cast<Eigen::Index>(n_points));
  report.min_rate = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < n_points; ++idx) {
    Eigen::ArrayXd tau(num_tx);
    std::size_t rem = idx;
    for (int l = 0; l < num_tx; ++l) {
      tau(l) = grid[rem % grid.size()];
      rem /= grid.size();
    }
    const double rate = evaluate(tau);
    report.rates(static_cast<Eigen::Index>(idx)) = rate;
    const DelayProfile profile(tau);
    const Eigen::ArrayXd frac = profile.fractional_part();
    const bool is_half = ((frac - 0.5).abs() < 1e-12).all();
    if (rate < report.min_rate || (rate == report.min_rate && is_half)) {
      report.min_rate = rate;
      report.argmin = frac;
    }
    report.points.push_back(std::move(tau));
  }
  report.worst_case = worst_case_capacity(num_tx, p_blocked, snr, ofdm).value;
  report.at_half = evaluate(Eigen::ArrayXd::Constant(num_tx, 0.5));
  report.on_grid = evaluate(Eigen::ArrayXd::Zero(num_tx));
  report.synchronous_scaled = ofdm.overhead() * ergodic_capacity(num_tx, p_blocked, snr).value;
  const double tol = 1e-12 * std::max(1.0, std::abs(report.worst_case));
  report.min_at_half = ((report.argmin - 0.5).abs() < 1e-12).all() &&
                       std::abs(report.min_rate - report.worst_case) <= tol;
  return report;
}

OutageSolution async_phase_div_outage(int num_tx, double p_blocked, double snr,
                                      const OfdmConfig& ofdm, std::size_t n, const RngStream& rng,
                                      unsigned workers) {
  check_inputs(num_tx, p_blocked, snr);
  ofdm.validate();
  if (n < 1) throw std::invalid_argument("need at least one trial");
  const Eigen::ArrayXd amps = (snr * off_grid_power_factors(ofdm.num_subcarriers)).sqrt();
  const double scale = 1.0 / (ofdm.num_subcarriers + ofdm.cyclic_prefix);
  Eigen::ArrayXd frame_rates = Eigen::ArrayXd::Zero(num_tx + 1);
  for (int i = 1; i <= num_tx; ++i) {
    const auto acc = accumulate_trials(n, rng.substream(static_cast<std::uint64_t>(i)), workers,
                                       [&](RngStream& r) {
                                         std::complex<double> rest{0.0, 0.0};
                                         for (int l = 0; l < i - 1; ++l) rest += r.unit_phasor();
                                         const double mag = std::abs(rest);
                                         double total = 0.0;
                                         for (int k = 0; k < ofdm.num_subcarriers; ++k) {
                                           total += ring_expectation(mag * amps(k), amps(k));
                                         }
                                         return total * scale;
                                       });
    frame_rates(i) = acc.mean;
  }
  return rbar_out(num_tx, p_blocked, snr, frame_rates);
}

OutageSolution async_phase_div_outage_limit(int num_tx, double p_blocked, double snr,
                                            std::size_t n, const RngStream& rng, unsigned workers) {
  check_inputs(num_tx, p_blocked, snr);
  if (n < 1) throw std::invalid_argument("need at least one trial");
  Eigen::ArrayXd limits = Eigen::ArrayXd::Zero(num_tx + 1);
  for (int i = 1; i <= num_tx; ++i) {
    const auto acc = accumulate_trials(n, rng.substream(static_cast<std::uint64_t>(i)), workers,
                                       [&](RngStream& r) {
                                         std::complex<double> sum{0.0, 0.0};
                                         for (int l = 0; l < i; ++l) sum += r.unit_phasor();
                                         return std::log2(1.0 + async_effective_snr(std::norm(sum), snr));
                                       });
    limits(i) = acc.mean;
  }
  return rbar_out(num_tx, p_blocked, snr, limits);
}

HoeffdingReport hoeffding_check(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm,
                                std::size_t n_blocks, const RngStream& rng,
                                const std::vector<double>& epsilons, std::size_t n_phase_draws,
                                unsigned workers) {
  return hoeffding_check(num_tx, p_blocked, snr, ofdm, DelayProfile::uniform(num_tx, 0.5), n_blocks,
                         rng, epsilons, n_phase_draws, workers);
}

HoeffdingReport hoeffding_check(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm,
                                const DelayProfile& delays, std::size_t n_blocks,
                                const RngStream& rng, const std::vector<double>& epsilons,
                                std::size_t n_phase_draws, unsigned workers) {
  check_inputs(num_tx, p_blocked, snr);
  check_profile(delays, num_tx, ofdm);
  if (n_blocks < 1 || n_phase_draws < 1) throw std::invalid_argument("need at least one draw");
  const int num_subcarriers = ofdm.num_subcarriers;
  const Eigen::ArrayXXcd response = delay_responses(delays, num_subcarriers);
  const double scale = 1.0 / (num_subcarriers + ofdm.cyclic_prefix);
  const double range = std::log2(1.0 + num_tx * num_tx * snr);

  HoeffdingReport report;
  for (double eps : epsilons) {
    HoeffdingRow row;
    row.num_subcarriers = num_subcarriers;
    row.epsilon = eps;
    row.bound = std::min(1.0, 2.0 * std::exp(-2.0 * num_subcarriers * eps * eps / (range * range)));
    report.rows.push_back(row);
  }
  std::vector<double> exceed_total(epsilons.size(), 0.0);

  for (std::size_t b = 0; b < n_blocks; ++b) {
    const RngStream block_rng = rng.substream(b);
    RngStream state_rng = block_rng.substream(0);
    const ChannelState state = sample_stationary_state(state_rng, num_tx, p_blocked);

    // Conditional mean: the phases theta + phi are uniform given beta, so
    // it is estimated from independent phase draws with the last connected
    // phase integrated out.
    const auto reference = accumulate_trials(
        4 * n_phase_draws, block_rng.substream(1), workers, [&](RngStream& r) {
          return rao_blackwell_frame_rate(response, state.beta, Eigen::ArrayXd::Zero(num_tx), snr,
                                          ofdm.cyclic_prefix, [&r](int, int) { return r.phase(); });
        });

    const Eigen::ArrayXd frame_rates =
        collect_trials(n_phase_draws, block_rng.substream(2), workers, [&](RngStream& r) {
          double total = 0.0;
          for (int k = 0; k < num_subcarriers; ++k) {
            std::complex<double> h{0.0, 0.0};
            for (int l = 0; l < num_tx; ++l) {
              const double phi = r.phase();
              if (state.beta(l) != 0) h += std::polar(1.0, state.theta(l) + phi) * response(k, l);
            }
            total += std::log2(1.0 + std::norm(h) * snr);
          }
          return total * scale;
        });
    const Eigen::ArrayXd deviation = (frame_rates - reference.mean).abs();
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      const double freq = (deviation >= epsilons[e]).cast<double>().mean();
      exceed_total[e] += freq;
      report.rows[e].max_block_frequency = std::max(report.rows[e].max_block_frequency, freq);
    }
  }
  report.passed = true;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    auto& row = report.rows[e];
    row.pooled_frequency = exceed_total[e] / static_cast<double>(n_blocks);
    row.passed = row.max_block_frequency <= row.bound;
    report.passed = report.passed && row.passed;
  }
  return report;
}

}  // namespace macrodiv
