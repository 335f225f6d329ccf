// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "macrodiv/schemes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "macrodiv/parallel.hpp"

namespace macrodiv {

namespace {

constexpr std::array<std::pair<SchemeKind, std::string_view>, 7> kSchemeNames{{
    {SchemeKind::Capacity, "capacity"},
    {SchemeKind::TransmitterSelection, "ts"},
    {SchemeKind::NCJT, "ncjt"},
    {SchemeKind::PhaseDiversity, "phase_div"},
    {SchemeKind::CyclicDelayDiversity, "cdd"},
    {SchemeKind::TwoTxSelection, "two_tx"},
    {SchemeKind::NCJA, "ncja"},
}};

std::complex<double> phasor_sum(RngStream& rng, int count) {
  std::complex<double> sum{0.0, 0.0};
  for (int l = 0; l < count; ++l) sum += rng.unit_phasor();
  return sum;
}

RateEstimate from_moments(const MomentAccumulator& acc) {
  return {{acc.mean}, acc.std_error(), acc.count};
}

// (1/K) sum_k log2(1 + |sum_l beta_l exp(j(theta_l + phi_{l,k}))|^2 P) with
// fresh uniform phi.
double phase_diversity_rate(const ChannelState& state, double snr, int frame_len, RngStream& rng) {
  const int alpha = state.alpha();
  if (alpha == 0) return 0.0;
  if (alpha == 1) return std::log2(1.0 + snr);
  double total = 0.0;
  for (int k = 0; k < frame_len; ++k) {
    std::complex<double> h{0.0, 0.0};
    for (int l = 0; l < state.num_tx(); ++l) {
      if (state.beta(l) != 0) h += std::polar(1.0, state.theta(l) + rng.phase());
    }
    total += std::log2(1.0 + std::norm(h) * snr);
  }
  return total / frame_len;
}

double cdd_rate(const ChannelState& state, double snr, int frame_len, const Eigen::ArrayXi& delays) {
  double total = 0.0;
  for (int k = 0; k < frame_len; ++k) {
    std::complex<double> h{0.0, 0.0};
    for (int l = 0; l < state.num_tx(); ++l) {
      if (state.beta(l) == 0) continue;
      const double shift = 2.0 * std::numbers::pi * k * delays(l) / frame_len;
      h += std::polar(1.0, state.theta(l) + shift);
    }
    total += std::log2(1.0 + std::norm(h) * snr);
  }
  return total / frame_len;
}

double ncja_rate(const ChannelState& state, double snr, int frame_len, RngStream& rng) {
  const int half = state.num_tx() / 2;
  double total = 0.0;
  for (int k = 0; k < frame_len; ++k) {
    std::complex<double> first{0.0, 0.0};
    std::complex<double> second{0.0, 0.0};
    for (int l = 0; l < state.num_tx(); ++l) {
      const std::complex<double> phi = rng.unit_phasor();
      if (state.beta(l) == 0) continue;
      (l < half ? first : second) += std::polar(1.0, state.theta(l)) * phi;
    }
    total += std::log2(1.0 + (std::norm(first) + std::norm(second)) * snr);
  }
  return total / frame_len;
}

// E[rate | beta, phases of all but the last connected link] for NCJT.
double ncjt_rao_blackwell(const ChannelState& state, double snr) {
  int last = -1;
  for (int l = state.num_tx() - 1; l >= 0; --l) {
    if (state.beta(l) != 0) {
      last = l;
      break;
    }
  }
  if (last < 0) return 0.0;
  std::complex<double> rest{0.0, 0.0};
  for (int l = 0; l < last; ++l) {
    if (state.beta(l) != 0) rest += std::polar(1.0, state.theta(l));
  }
  const double amp = std::sqrt(snr);
  return ring_expectation(std::abs(rest) * amp, amp);
}

RateEstimate stratified_estimate(const SchemeSpec& spec, std::size_t n, const RngStream& rng,
                                 const EstimatorOptions& options) {
  const int num_tx = spec.cfg.num_tx;
  const double snr = spec.cfg.snr;
  const Eigen::ArrayXd pmf = alpha_pmf(num_tx, stationary_blockage_prob(spec.cfg.blockage));
  // alpha = 0 and alpha = 1 strata have deterministic rates.
  double mean = pmf(1) * std::log2(1.0 + snr);
  double variance = 0.0;
  std::size_t used = 0;
  const double random_mass = pmf.tail(num_tx - 1).sum();
  for (int i = 2; i <= num_tx; ++i) {
    const auto n_i = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(static_cast<double>(n) * pmf(i) / random_mass)));
    const RngStream stratum = rng.substream(static_cast<std::uint64_t>(i));
    MomentAccumulator acc;
    if (spec.kind == SchemeKind::NCJT) {
      const double amp = std::sqrt(snr);
      acc = accumulate_trials(n_i, stratum, options.workers, [&](RngStream& r) {
        if (options.rao_blackwell) return ring_expectation(std::abs(phasor_sum(r, i - 1)) * amp, amp);
        return std::log2(1.0 + std::norm(phasor_sum(r, i)) * snr);
      });
    } else {
      ChannelState state{Eigen::ArrayXi::Ones(i), Eigen::ArrayXd::Zero(i)};
      acc = accumulate_trials(n_i, stratum, options.workers, [&](RngStream& r) {
        return phase_diversity_rate(state, snr, spec.frame_len, r);
      });
    }
    mean += pmf(i) * acc.mean;
    variance += pmf(i) * pmf(i) * acc.variance() / static_cast<double>(n_i);
    used += n_i;
  }
  return {{mean}, std::sqrt(variance), std::max<std::size_t>(used, 1)};
}

}  // namespace

std::string_view scheme_name(SchemeKind kind) {
  for (const auto& [k, name] : kSchemeNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

SchemeKind parse_scheme_kind(std::string_view name) {
  for (const auto& [k, n] : kSchemeNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

void SchemeSpec::validate() const {
  switch (kind) {
    case SchemeKind::PhaseDiversity:
      if (frame_len < 1) throw std::invalid_argument("phase diversity needs K >= 1");
      break;
    case SchemeKind::NCJA:
      if (frame_len < 1) throw std::invalid_argument("NCJA needs K >= 1");
      if (cfg.num_tx % 2 != 0) throw std::invalid_argument("NCJA needs an even number of transmitters");
      break;
    case SchemeKind::CyclicDelayDiversity:
      if (frame_len < 1) throw std::invalid_argument("cyclic delay diversity needs K >= 1");
      if (diversity_delays.size() != cfg.num_tx) {
        throw std::invalid_argument("cyclic delay diversity needs one delay per transmitter");
      }
      if ((diversity_delays < 0).any() || (diversity_delays >= frame_len).any()) {
        throw std::invalid_argument("cyclic delays must lie in [0, K)");
      }
      break;
    case SchemeKind::TwoTxSelection:
      if (cfg.num_tx < 2) throw std::invalid_argument("two-transmitter selection needs L >= 2");
      break;
    default:
      break;
  }
}

InstantRateSample inst_rate(const SchemeSpec& spec, const ChannelState& state, RngStream& rng) {
  if (state.num_tx() != spec.cfg.num_tx || state.theta.size() != state.beta.size()) {
    throw std::invalid_argument("channel state does not match the scheme's transmitter count");
  }
  const double snr = spec.cfg.snr;
  const int alpha = state.alpha();
  double rate = 0.0;
  switch (spec.kind) {
    case SchemeKind::Capacity:
      rate = std::log2(1.0 + alpha * snr);
      break;
    case SchemeKind::TransmitterSelection:
      rate = alpha >= 1 ? std::log2(1.0 + snr) : 0.0;
      break;
    case SchemeKind::NCJT:
      rate = std::log2(1.0 + std::norm(effective_scalar_channel(state)) * snr);
      break;
    case SchemeKind::PhaseDiversity:
      rate = phase_diversity_rate(state, snr, spec.frame_len, rng);
      break;
    case SchemeKind::CyclicDelayDiversity:
      rate = cdd_rate(state, snr, spec.frame_len, spec.diversity_delays);
      break;
    case SchemeKind::TwoTxSelection:
      rate = std::log2(1.0 + std::min(alpha, 2) * snr);
      break;
    case SchemeKind::NCJA:
      rate = ncja_rate(state, snr, spec.frame_len, rng);
      break;
  }
  if (alpha == 0) rate = 0.0;
  return {alpha, {rate}};
}

RateEstimate rbar_mc(int i, double snr, std::size_t n, const RngStream& rng, bool rao_blackwell,
                     unsigned workers) {
  if (i < 0) throw std::invalid_argument("transmitter count must be non-negative");
  if (n < 1) throw std::invalid_argument("need at least one trial");
  if (i == 0) return {{0.0}, 0.0, n};
  const double amp = std::sqrt(snr);
  const auto acc = accumulate_trials(n, rng, workers, [&](RngStream& r) {
    if (rao_blackwell) return ring_expectation(std::abs(phasor_sum(r, i - 1)) * amp, amp);
    return std::log2(1.0 + std::norm(phasor_sum(r, i)) * snr);
  });
  return from_moments(acc);
}

RateEstimate rbar_increment_mc(int i, double snr, std::size_t n, const RngStream& rng,
                               unsigned workers) {
  if (i < 0) throw std::invalid_argument("transmitter count must be non-negative");
  if (n < 1) throw std::invalid_argument("need at least one trial");
  const double amp = std::sqrt(snr);
  const auto acc = accumulate_trials(n, rng, workers, [&](RngStream& r) {
    const double x = std::abs(phasor_sum(r, i)) * amp;
    return ring_expectation(x, amp) - std::log2(1.0 + x * x);
  });
  return from_moments(acc);
}

RateEstimate rbar2_mc(int i1, int i2, double snr, std::size_t n, const RngStream& rng,
                      unsigned workers) {
  if (i1 < 0 || i2 < 0) throw std::invalid_argument("transmitter counts must be non-negative");
  if (n < 1) throw std::invalid_argument("need at least one trial");
  const auto acc = accumulate_trials(n, rng, workers, [&](RngStream& r) {
    const double g1 = std::norm(phasor_sum(r, i1));
    const double g2 = std::norm(phasor_sum(r, i2));
    return std::log2(1.0 + (g1 + g2) * snr);
  });
  return from_moments(acc);
}

RateEstimate ergodic_estimate(const SchemeSpec& spec, std::size_t n, const RngStream& rng,
                              const EstimatorOptions& options) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("need at least one trial");
  if (options.stratified) {
    if (spec.kind != SchemeKind::NCJT && spec.kind != SchemeKind::PhaseDiversity) {
      throw std::invalid_argument("stratified sampling supports NCJT and phase diversity only");
    }
    if (options.rao_blackwell && spec.kind != SchemeKind::NCJT) {
      throw std::invalid_argument("Rao-Blackwellization supports NCJT only");
    }
    return stratified_estimate(spec, n, rng, options);
  }
  if (options.rao_blackwell) {
    if (spec.kind != SchemeKind::NCJT) {
      throw std::invalid_argument("Rao-Blackwellization supports NCJT only");
    }
    return from_moments(accumulate_trials(n, rng, options.workers, [&](RngStream& r) {
      return ncjt_rao_blackwell(sample_stationary_state(r, spec.cfg), spec.cfg.snr);
    }));
  }
  return from_moments(accumulate_trials(n, rng, options.workers, [&](RngStream& r) {
    const ChannelState state = sample_stationary_state(r, spec.cfg);
    return inst_rate(spec, state, r).rate.value;
  }));
}

RateEstimate ncjt_increment_mc(int num_tx, double p_blocked, double snr, std::size_t n,
                               const RngStream& rng, unsigned workers) {
  if (num_tx < 1) throw std::invalid_argument("need at least one transmitter");
  if (n < 1) throw std::invalid_argument("need at least one trial");
  const double amp = std::sqrt(snr);
  const double p_on = 1.0 - p_blocked;
  const auto acc = accumulate_trials(n, rng, workers, [&](RngStream& r) {
    const ChannelState state = sample_stationary_state(r, num_tx, p_blocked);
    if (!r.bernoulli(p_on)) return 0.0;
    const double x = std::abs(effective_scalar_channel(state)) * amp;
    return ring_expectation(x, amp) - std::log2(1.0 + x * x);
  });
  return from_moments(acc);
}

Eigen::ArrayXd sample_inst_rates(const SchemeSpec& spec, std::size_t n, const RngStream& rng,
                                 unsigned workers) {
  spec.validate();
  return collect_trials(n, rng, workers, [&](RngStream& r) {
    const ChannelState state = sample_stationary_state(r, spec.cfg);
    return inst_rate(spec, state, r).rate.value;
  });
}

double EmpiricalOutage::std_error() const {
  if (n == 0) return 0.0;
  return threshold * std::sqrt(ccdf * (1.0 - ccdf) / static_cast<double>(n));
}

EmpiricalOutage empirical_outage(const Eigen::Ref<const Eigen::ArrayXd>& rates) {
  if (rates.size() == 0) throw std::invalid_argument("outage estimate needs at least one sample");
  if ((rates < 0.0).any()) throw std::invalid_argument("rates must be non-negative");
  std::vector<double> sorted(rates.begin(), rates.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double n = static_cast<double>(sorted.size());
  EmpiricalOutage best{{0.0}, 0.0, 0.0, sorted.size()};
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    const double ccdf = static_cast<double>(j + 1) / n;
    const double value = sorted[j] * ccdf;
    if (value > best.rate.value) {
      best.rate = {value};
      best.threshold = sorted[j];
      best.ccdf = ccdf;
    }
  }
  return best;
}

RateBits outage_from_samples(const Eigen::Ref<const Eigen::ArrayXd>& rates) {
  return empirical_outage(rates).rate;
}

OutageSolution rbar_out(int num_tx, double p_blocked, double snr,
                        const Eigen::Ref<const Eigen::ArrayXd>& rbar_values) {
  (void)snr;
  if (rbar_values.size() != num_tx + 1) {
    throw std::invalid_argument("rbar_values must hold entries for i = 0..L");
  }
  const Eigen::ArrayXd ccdf = alpha_ccdf(num_tx, p_blocked);
  OutageSolution best{{ccdf(1) * rbar_values(1)}, 1};
  for (int i = 2; i <= num_tx; ++i) {
    const double candidate = ccdf(i) * rbar_values(i);
    if (candidate > best.rate.value * (1.0 + kOutageTieTolerance)) best = {{candidate}, i};
  }
  return best;
}

AlamoutiCheck alamouti_symbol_check(const ChannelState& state, double snr, std::size_t n_symbols,
                                    RngStream& rng, int first, int second) {
  if (first < 0 || second < 0 || first == second || first >= state.num_tx() ||
      second >= state.num_tx()) {
    throw std::invalid_argument("invalid transmitter pair");
  }
  if (n_symbols < 64) throw std::invalid_argument("need at least 64 symbols");
  const std::complex<double> h1 = static_cast<double>(state.beta(first)) * std::polar(1.0, state.theta(first));
  const std::complex<double> h2 = static_cast<double>(state.beta(second)) * std::polar(1.0, state.theta(second));
  const double norm = std::sqrt(std::norm(h1) + std::norm(h2));

  // Batch means give error bars without assuming a distribution for the
  // ratio estimators.
  constexpr std::size_t kBatches = 32;
  const std::size_t pairs_per_batch = std::max<std::size_t>(1, n_symbols / (2 * kBatches));
  MomentAccumulator gains, noise_vars, snrs;
  double cross_total = 0.0, power_total = 0.0;
  std::vector<std::pair<std::complex<double>, std::complex<double>>> batch;
  std::vector<std::pair<std::complex<double>, std::complex<double>>> all;
  all.reserve(kBatches * pairs_per_batch * 2);
  for (std::size_t b = 0; b < kBatches; ++b) {
    batch.clear();
    for (std::size_t m = 0; m < pairs_per_batch; ++m) {
      const std::complex<double> s1 = rng.complex_normal(snr);
      const std::complex<double> s2 = rng.complex_normal(snr);
      const std::complex<double> n1 = rng.complex_normal(1.0);
      const std::complex<double> n2 = rng.complex_normal(1.0);
      // Slot 1 sends (s1, s2), slot 2 sends (-s2*, s1*).
      const std::complex<double> r1 = h1 * s1 + h2 * s2 + n1;
      const std::complex<double> r2 = -h1 * std::conj(s2) + h2 * std::conj(s1) + n2;
      std::complex<double> y1, y2;
      if (norm > 0.0) {
        y1 = (std::conj(h1) * r1 + h2 * std::conj(r2)) / norm;
        y2 = (std::conj(h2) * r1 - h1 * std::conj(r2)) / norm;
      } else {
        y1 = r1;
        y2 = r2;
      }
      batch.emplace_back(y1, s1);
      batch.emplace_back(y2, s2);
    }
    double cross = 0.0, power = 0.0;
    for (const auto& [y, s] : batch) {
      cross += (y * std::conj(s)).real();
      power += std::norm(s);
    }
    const double g = cross / power;
    double residual = 0.0;
    for (const auto& [y, s] : batch) residual += std::norm(y - g * s);
    residual /= static_cast<double>(batch.size());
    gains.add(g);
    noise_vars.add(residual);
    snrs.add(g * g * snr / residual);
    cross_total += cross;
    power_total += power;
    all.insert(all.end(), batch.begin(), batch.end());
  }
  AlamoutiCheck out;
  out.effective_gain = cross_total / power_total;
  double residual = 0.0;
  for (const auto& [y, s] : all) residual += std::norm(y - out.effective_gain * s);
  out.residual_noise_var = residual / static_cast<double>(all.size());
  out.effective_snr = out.effective_gain * out.effective_gain * snr / out.residual_noise_var;
  out.gain_std_error = gains.std_error();
  out.noise_var_std_error = noise_vars.std_error();
  out.snr_std_error = snrs.std_error();
  return out;
}

std::vector<CcdfPoint> ccdf_points(const Eigen::Ref<const Eigen::ArrayXd>& samples) {
  if (samples.size() == 0) throw std::invalid_argument("CCDF needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CcdfPoint> points;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    if (j > 0 && sorted[j] == sorted[j - 1]) continue;
    points.push_back({sorted[j], static_cast<double>(sorted.size() - j) / n});
  }
  return points;
}

}  // namespace macrodiv
