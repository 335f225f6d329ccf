// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "macrodiv/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace macrodiv {

BlockageParams::BlockageParams(double p, double q) : p_(p), q_(q) {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("blockage transition probabilities must lie in (0, 1), got p=" +
                                std::to_string(p) + " q=" + std::to_string(q));
  }
}

BlockageParams BlockageParams::from_blockage_prob(double p_blocked, double mixing) {
  if (!(p_blocked > 0.0 && p_blocked < 1.0)) {
    throw std::invalid_argument("blockage probability must lie in (0, 1)");
  }
  if (!(mixing > 0.0 && mixing < 2.0)) {
    throw std::invalid_argument("p + q must lie in (0, 2)");
  }
  return {p_blocked * mixing, (1.0 - p_blocked) * mixing};
}

ChannelConfig::ChannelConfig(int num_tx_, double snr_, BlockageParams blockage_, int block_length_)
    : num_tx(num_tx_), snr(snr_), blockage(blockage_), block_length(block_length_) {
  if (num_tx < 1) throw std::invalid_argument("need at least one transmitter");
  if (!(snr > 0.0)) throw std::invalid_argument("SNR must be positive");
  if (block_length < 1) throw std::invalid_argument("block length must be >= 1");
}

double stationary_blockage_prob(const BlockageParams& params) {
  return params.p() / (params.p() + params.q());
}

Eigen::ArrayXd alpha_pmf(int num_tx, double p_blocked) {
  if (num_tx < 1) throw std::invalid_argument("need at least one transmitter");
  if (!(p_blocked >= 0.0 && p_blocked <= 1.0)) {
    throw std::invalid_argument("blockage probability must lie in [0, 1]");
  }
  const double p_on = 1.0 - p_blocked;
  Eigen::ArrayXd pmf(num_tx + 1);
  double binom = 1.0;
  for (int i = 0; i <= num_tx; ++i) {
    pmf(i) = binom * std::pow(p_on, i) * std::pow(p_blocked, num_tx - i);
    binom = binom * (num_tx - i) / (i + 1);
  }
  return pmf;
}

Eigen::ArrayXd alpha_ccdf(int num_tx, double p_blocked) {
  const Eigen::ArrayXd pmf = alpha_pmf(num_tx, p_blocked);
  Eigen::ArrayXd ccdf(num_tx + 1);
  double tail = 0.0;
  for (int i = num_tx; i >= 1; --i) {
    tail += pmf(i);
    ccdf(i) = tail;
  }
  ccdf(0) = 1.0;
  // 1 - p_B^L directly keeps P(alpha >= 1) accurate when p_B^L is tiny.
  ccdf(1) = 1.0 - std::pow(p_blocked, num_tx);
  return ccdf;
}

ChannelState sample_stationary_state(RngStream& rng, const ChannelConfig& cfg) {
  return sample_stationary_state(rng, cfg.num_tx, stationary_blockage_prob(cfg.blockage));
}

ChannelState sample_stationary_state(RngStream& rng, int num_tx, double p_blocked) {
  const double p_on = 1.0 - p_blocked;
  ChannelState state{Eigen::ArrayXi(num_tx), Eigen::ArrayXd(num_tx)};
  for (int l = 0; l < num_tx; ++l) state.beta(l) = rng.bernoulli(p_on) ? 1 : 0;
  for (int l = 0; l < num_tx; ++l) state.theta(l) = rng.phase();
  return state;
}

Eigen::ArrayXi step_blockage(RngStream& rng, const Eigen::ArrayXi& beta, const BlockageParams& params) {
  Eigen::ArrayXi next(beta.size());
  for (Eigen::Index l = 0; l < beta.size(); ++l) {
    const double u = rng.uniform();
    if (beta(l) == 1) {
      next(l) = u < params.p() ? 0 : 1;
    } else if (beta(l) == 0) {
      next(l) = u < params.q() ? 1 : 0;
    } else {
      throw std::invalid_argument("blockage indicators must be 0 or 1");
    }
  }
  return next;
}

std::complex<double> effective_scalar_channel(const ChannelState& state) {
  std::complex<double> h{0.0, 0.0};
  for (int l = 0; l < state.num_tx(); ++l) {
    if (state.beta(l) != 0) h += std::polar(1.0, state.theta(l));
  }
  return h;
}

}  // namespace macrodiv
