// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "macrodiv/rng.hpp"

namespace macrodiv {

/// Two-state blockage chain per transmitter. `p` is the connected-to-blocked
/// transition probability, `q` the blocked-to-connected one.
class BlockageParams {
 public:
  /// Throws std::invalid_argument unless 0 < p < 1 and 0 < q < 1.
  BlockageParams(double p, double q);

  /// Chain whose stationary blockage probability is `p_blocked`, with the
  /// transition probabilities scaled so that p + q = `mixing` (default 1,
  /// i.e. i.i.d. blocks).
  static BlockageParams from_blockage_prob(double p_blocked, double mixing = 1.0);

  double p() const { return p_; }
  double q() const { return q_; }

 private:
  double p_;
  double q_;
};

struct ChannelConfig {
  int num_tx;
  double snr;  ///< per-transmitter SNR, linear, unit noise variance
  BlockageParams blockage;
  int block_length = 1;

  ChannelConfig(int num_tx, double snr, BlockageParams blockage, int block_length = 1);
};

/// One block-fading realization: h_l = beta_l * exp(j theta_l).
struct ChannelState {
  Eigen::ArrayXi beta;    ///< 1 = connected, 0 = blocked
  Eigen::ArrayXd theta;   ///< phases in [0, 2*pi)

  int num_tx() const { return static_cast<int>(beta.size()); }
  int alpha() const { return beta.sum(); }
};

double stationary_blockage_prob(const BlockageParams& params);

/// P(alpha = i), i = 0..L, with alpha ~ Binomial(L, 1 - p_blocked).
Eigen::ArrayXd alpha_pmf(int num_tx, double p_blocked);

/// P(alpha >= i), i = 0..L.
Eigen::ArrayXd alpha_ccdf(int num_tx, double p_blocked);

ChannelState sample_stationary_state(RngStream& rng, const ChannelConfig& cfg);
/// Same draw order as above, parameterized by p_B directly (p_B in [0, 1]).
ChannelState sample_stationary_state(RngStream& rng, int num_tx, double p_blocked);

/// One step of each transmitter's blockage chain.
Eigen::ArrayXi step_blockage(RngStream& rng, const Eigen::ArrayXi& beta, const BlockageParams& params);

/// h = sum_l beta_l exp(j theta_l), the coefficient seen by a receiver when
/// every transmitter sends the same symbol without phase alignment.
std::complex<double> effective_scalar_channel(const ChannelState& state);

}  // namespace macrodiv
