// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "macrodiv/closed_forms.hpp"

#include <stdexcept>

#include "macrodiv/channel.hpp"

namespace macrodiv {

namespace {

void check_inputs(int num_tx, double p_blocked, double snr) {
  if (num_tx < 1) throw std::invalid_argument("need at least one transmitter");
  if (!(p_blocked >= 0.0 && p_blocked <= 1.0)) {
    throw std::invalid_argument("blockage probability must lie in [0, 1]");
  }
  if (!(snr > 0.0)) throw std::invalid_argument("SNR must be positive");
}

template <class RateOf>
RateBits pmf_weighted(int num_tx, double p_blocked, RateOf rate_of) {
  const Eigen::ArrayXd pmf = alpha_pmf(num_tx, p_blocked);
  double total = 0.0;
  for (int i = 0; i <= num_tx; ++i) total += pmf(i) * rate_of(i);
  return {total};
}

template <class RateOf>
OutageSolution best_rectangle(int num_tx, double p_blocked, int max_index, RateOf rate_of) {
  const Eigen::ArrayXd ccdf = alpha_ccdf(num_tx, p_blocked);
  OutageSolution best{{ccdf(1) * rate_of(1)}, 1};
  for (int i = 2; i <= max_index; ++i) {
    const double candidate = ccdf(i) * rate_of(i);
    if (candidate > best.rate.value * (1.0 + kOutageTieTolerance)) best = {{candidate}, i};
  }
  return best;
}

}  // namespace

RateBits ergodic_capacity(int num_tx, double p_blocked, double snr) {
  check_inputs(num_tx, p_blocked, snr);
  return pmf_weighted(num_tx, p_blocked, [snr](int i) { return std::log2(1.0 + i * snr); });
}

OutageSolution outage_capacity(int num_tx, double p_blocked, double snr) {
  check_inputs(num_tx, p_blocked, snr);
  return best_rectangle(num_tx, p_blocked, num_tx,
                        [snr](int i) { return std::log2(1.0 + i * snr); });
}

RateBits ts_ergodic_rate(int num_tx, double p_blocked, double snr) {
  check_inputs(num_tx, p_blocked, snr);
  return {(1.0 - std::pow(p_blocked, num_tx)) * std::log2(1.0 + snr)};
}

RateBits two_tx_alamouti_rate(int num_tx, double p_blocked, double snr) {
  check_inputs(num_tx, p_blocked, snr);
  if (num_tx < 2) throw std::invalid_argument("two-transmitter selection needs L >= 2");
  const Eigen::ArrayXd pmf = alpha_pmf(num_tx, p_blocked);
  const Eigen::ArrayXd ccdf = alpha_ccdf(num_tx, p_blocked);
  return {ccdf(2) * std::log2(1.0 + 2.0 * snr) + pmf(1) * std::log2(1.0 + snr)};
}

OutageSolution two_tx_alamouti_outage(int num_tx, double p_blocked, double snr) {
  check_inputs(num_tx, p_blocked, snr);
  if (num_tx < 2) throw std::invalid_argument("two-transmitter selection needs L >= 2");
  return best_rectangle(num_tx, p_blocked, 2, [snr](int i) { return std::log2(1.0 + i * snr); });
}

RateBits rbar_closed(int i, double snr) {
  if (!(snr > 0.0)) throw std::invalid_argument("SNR must be positive");
  switch (i) {
    case 0:
      return {0.0};
    case 1:
      return {std::log2(1.0 + snr)};
    case 2: {
      const double amp = std::sqrt(snr);
      return {ring_expectation(amp, amp)};
    }
    default:
      if (i < 0) throw std::invalid_argument("transmitter count must be non-negative");
      throw std::domain_error("no closed form for more than two phasors; use rbar_mc");
  }
}

RateBits async_capacity_limit(int num_tx, double p_blocked, double snr) {
  check_inputs(num_tx, p_blocked, snr);
  return pmf_weighted(num_tx, p_blocked, [snr](int i) {
    return std::log2(1.0 + async_effective_snr(static_cast<double>(i), snr));
  });
}

OutageSolution async_outage_limit(int num_tx, double p_blocked, double snr) {
  check_inputs(num_tx, p_blocked, snr);
  return best_rectangle(num_tx, p_blocked, num_tx, [snr](int i) {
    return std::log2(1.0 + async_effective_snr(static_cast<double>(i), snr));
  });
}

}  // namespace macrodiv
