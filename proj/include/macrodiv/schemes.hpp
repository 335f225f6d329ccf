// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "macrodiv/channel.hpp"
#include "macrodiv/closed_forms.hpp"
#include "macrodiv/rng.hpp"

namespace macrodiv {

enum class SchemeKind {
  Capacity,
  TransmitterSelection,
  NCJT,
  PhaseDiversity,
  CyclicDelayDiversity,
  TwoTxSelection,
  NCJA,
};

std::string_view scheme_name(SchemeKind kind);
/// Inverse of scheme_name; throws std::invalid_argument on unknown names.
SchemeKind parse_scheme_kind(std::string_view name);

/// A transmission scheme bound to a channel configuration.
struct SchemeSpec {
  SchemeKind kind;
  ChannelConfig cfg;
  int frame_len = 1;                 ///< K, subcarriers/frame symbols for PD, CDD and NCJA
  Eigen::ArrayXi diversity_delays{};  ///< d_l for CDD, each in [0, K)

  static SchemeSpec capacity(const ChannelConfig& cfg) { return {SchemeKind::Capacity, cfg, 1, {}}; }
  static SchemeSpec transmitter_selection(const ChannelConfig& cfg) {
    return {SchemeKind::TransmitterSelection, cfg, 1, {}};
  }
  static SchemeSpec ncjt(const ChannelConfig& cfg) { return {SchemeKind::NCJT, cfg, 1, {}}; }
  static SchemeSpec phase_diversity(const ChannelConfig& cfg, int frame_len) {
    return {SchemeKind::PhaseDiversity, cfg, frame_len, {}};
  }
  static SchemeSpec cyclic_delay_diversity(const ChannelConfig& cfg, int frame_len,
                                           Eigen::ArrayXi delays) {
    return {SchemeKind::CyclicDelayDiversity, cfg, frame_len, std::move(delays)};
  }
  static SchemeSpec two_tx_selection(const ChannelConfig& cfg) {
    return {SchemeKind::TwoTxSelection, cfg, 1, {}};
  }
  static SchemeSpec ncja(const ChannelConfig& cfg, int frame_len) {
    return {SchemeKind::NCJA, cfg, frame_len, {}};
  }

  /// Throws std::invalid_argument if the parameters are inconsistent.
  void validate() const;
};

struct RateEstimate {
  RateBits mean;
  double std_error = 0.0;
  std::size_t n_trials = 1;

  static RateEstimate exact(double bits) { return {{bits}, 0.0, 1}; }
};

struct InstantRateSample {
  int alpha = 0;
  RateBits rate;
};

struct EstimatorOptions {
  /// Sample alpha per stratum with proportional allocation instead of
  /// drawing the blockage pattern. NCJT and phase diversity only.
  bool stratified = false;
  /// Integrate the last connected transmitter's phase in closed form.
  /// NCJT only.
  bool rao_blackwell = false;
  unsigned workers = 1;
};

/// Instantaneous rate of one block. `rng` supplies the shared pseudo-random
/// phases of phase diversity and NCJA; other schemes do not draw from it.
InstantRateSample inst_rate(const SchemeSpec& spec, const ChannelState& state, RngStream& rng);

/// Estimate of E[log2(1 + |sum_{l<=i} exp(j theta_l)|^2 P)].
RateEstimate rbar_mc(int i, double snr, std::size_t n, const RngStream& rng,
                     bool rao_blackwell = false, unsigned workers = 1);

/// Paired estimate of rbar(i + 1) - rbar(i); every sample is the conditional
/// increment given the first i phases, so all samples are positive.
RateEstimate rbar_increment_mc(int i, double snr, std::size_t n, const RngStream& rng,
                               unsigned workers = 1);

/// Estimate of E[log2(1 + |S1|^2 P + |S2|^2 P)] with S1, S2 sums of i1 and i2
/// independent unit phasors.
RateEstimate rbar2_mc(int i1, int i2, double snr, std::size_t n, const RngStream& rng,
                      unsigned workers = 1);

RateEstimate ergodic_estimate(const SchemeSpec& spec, std::size_t n, const RngStream& rng,
                              const EstimatorOptions& options = {});

/// Paired estimate of R_NCJT(L + 1) - R_NCJT(L) sharing the first L links.
RateEstimate ncjt_increment_mc(int num_tx, double p_blocked, double snr, std::size_t n,
                               const RngStream& rng, unsigned workers = 1);

/// Instantaneous rates of n independent blocks, in trial order.
Eigen::ArrayXd sample_inst_rates(const SchemeSpec& spec, std::size_t n, const RngStream& rng,
                                 unsigned workers = 1);

/// Plug-in maximizer of r * P(rate >= r) over the empirical measure.
struct EmpiricalOutage {
  RateBits rate;
  double threshold = 0.0;  ///< r at the maximum
  double ccdf = 0.0;       ///< empirical P(rate >= threshold)
  std::size_t n = 0;

  /// Binomial standard error of threshold * ccdf at the chosen threshold.
  double std_error() const;
};

EmpiricalOutage empirical_outage(const Eigen::Ref<const Eigen::ArrayXd>& rates);
RateBits outage_from_samples(const Eigen::Ref<const Eigen::ArrayXd>& rates);

/// max_i P(alpha >= i) rbar(i); `rbar_values` is indexed by i = 0..L.
OutageSolution rbar_out(int num_tx, double p_blocked, double snr,
                        const Eigen::Ref<const Eigen::ArrayXd>& rbar_values);

struct AlamoutiCheck {
  double effective_gain = 0.0;       ///< least-squares gain of the normalized combiner output
  double residual_noise_var = 0.0;
  double effective_snr = 0.0;        ///< gain^2 P / residual variance
  double gain_std_error = 0.0;
  double noise_var_std_error = 0.0;
  double snr_std_error = 0.0;
};

/// Symbol-level Alamouti simulation over the pair (first, second) of `state`.
/// Symbols are CN(0, P), noise CN(0, 1). The combiner output is normalized by
/// the channel norm when it is non-zero; with both links blocked the raw
/// received sample is reported.
AlamoutiCheck alamouti_symbol_check(const ChannelState& state, double snr, std::size_t n_symbols,
                                    RngStream& rng, int first = 0, int second = 1);

struct CcdfPoint {
  double rate;
  double ccdf;  ///< empirical P(X >= rate)
};

/// One point per distinct sample value, ascending in rate.
std::vector<CcdfPoint> ccdf_points(const Eigen::Ref<const Eigen::ArrayXd>& samples);

}  // namespace macrodiv
