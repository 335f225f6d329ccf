// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <compare>
#include <numbers>

namespace macrodiv {

/// Rate in bits per channel use.
struct RateBits {
  double value = 0.0;

  static RateBits from_nats(double nats) { return {nats / std::numbers::ln2}; }
  friend auto operator<=>(const RateBits&, const RateBits&) = default;
};

/// Outage candidates within this relative distance count as ties.
inline constexpr double kOutageTieTolerance = 1e-12;

/// Result of maximizing P(alpha >= i) * rate(i) over i = 1..L.
struct OutageSolution {
  RateBits rate;
  int argmax_index = 1;  ///< smallest maximizer
};

/**
 * E[log2(1 + |x + exp(j theta) y|^2)] for theta ~ Uniform(0, 2 pi), as a
 * function of |x| and |y| only:
 *
 *   log2((1 + a + sqrt((1 + a)^2 - b^2)) / 2),  a = |x|^2 + |y|^2, b = 2|x||y|.
 *
 * The square root is evaluated in the factored form
 * (1 + (|x| - |y|)^2)(1 + (|x| + |y|)^2), which stays accurate when b ~ 1 + a.
 */
template <class Scalar>
Scalar ring_expectation(Scalar x_mag, Scalar y_mag) {
  using std::log2;
  using std::sqrt;
  const Scalar a = x_mag * x_mag + y_mag * y_mag;
  const Scalar diff = x_mag - y_mag;
  const Scalar sum = x_mag + y_mag;
  const Scalar root = sqrt((Scalar(1) + diff * diff) * (Scalar(1) + sum * sum));
  return log2((Scalar(1) + a + root) / Scalar(2));
}

/// Effective SNR of i on-air transmitters after averaging the off-grid
/// subcarrier attenuation (1 + cos w)/2 over a full period:
/// i P / 4 + (sqrt(1 + i P) - 1) / 2.
template <class Scalar>
Scalar async_effective_snr(Scalar gain, Scalar snr) {
  using std::sqrt;
  const Scalar s = gain * snr;
  return s / Scalar(4) + (sqrt(Scalar(1) + s) - Scalar(1)) / Scalar(2);
}

RateBits ergodic_capacity(int num_tx, double p_blocked, double snr);
OutageSolution outage_capacity(int num_tx, double p_blocked, double snr);

/// Rate of picking one connected transmitter per block.
RateBits ts_ergodic_rate(int num_tx, double p_blocked, double snr);

/// Alamouti over a selected pair; requires num_tx >= 2.
RateBits two_tx_alamouti_rate(int num_tx, double p_blocked, double snr);
OutageSolution two_tx_alamouti_outage(int num_tx, double p_blocked, double snr);

/// E[log2(1 + |sum_{l<=i} exp(j theta_l)|^2 P)] for i <= 2. Throws
/// std::domain_error for i > 2; use rbar_mc there.
RateBits rbar_closed(int i, double snr);

RateBits async_capacity_limit(int num_tx, double p_blocked, double snr);
OutageSolution async_outage_limit(int num_tx, double p_blocked, double snr);

}  // namespace macrodiv
