// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "macrodiv/closed_forms.hpp"
#include "macrodiv/rng.hpp"
#include "macrodiv/schemes.hpp"

namespace macrodiv {

/// OFDM numerology: K subcarriers, cyclic prefix of D samples, residual
/// timing offsets bounded by tau_max.
struct OfdmConfig {
  int num_subcarriers;
  int cyclic_prefix;
  double tau_max = 0.0;

  /// Throws std::invalid_argument unless K >= 2, tau_max >= 0 and
  /// D >= ceil(tau_max) + 1.
  void validate() const;
  double overhead() const {
    return static_cast<double>(num_subcarriers) / (num_subcarriers + cyclic_prefix);
  }
};

/// Per-transmitter residual delays tau_l = d_l + delta_l.
class DelayProfile {
 public:
  explicit DelayProfile(Eigen::ArrayXd tau);
  static DelayProfile uniform(int num_tx, double tau) {
    return DelayProfile(Eigen::ArrayXd::Constant(num_tx, tau));
  }

  const Eigen::ArrayXd& tau() const { return tau_; }
  Eigen::ArrayXi integer_part() const;
  Eigen::ArrayXd fractional_part() const;
  int num_tx() const { return static_cast<int>(tau_.size()); }

 private:
  Eigen::ArrayXd tau_;
};

/// Triangular pulse autocorrelation 1 - |x| on (-1, 1).
template <class Scalar>
Scalar pulse_autocorr(Scalar x) {
  using std::abs;
  const Scalar magnitude = abs(x);
  return magnitude < Scalar(1) ? Scalar(1) - magnitude : Scalar(0);
}

/// G[k] = (1 - delta) + delta exp(-j 2 pi k / K), the K-point DFT of the
/// sampled pulse shifted by a fractional delay.
template <class Scalar>
std::complex<Scalar> subcarrier_gain(Scalar delta, int k, int num_subcarriers) {
  const Scalar w = Scalar(2) * std::numbers::pi_v<Scalar> * k / num_subcarriers;
  return std::complex<Scalar>(Scalar(1) - delta, Scalar(0)) + delta * std::polar(Scalar(1), -w);
}

/// (1 + cos(2 pi k / K)) / 2 for k = 0..K-1, the per-subcarrier power factor
/// at delta = 0.5.
Eigen::ArrayXd off_grid_power_factors(int num_subcarriers);

RateBits worst_case_capacity(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm);
OutageSolution worst_case_outage(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm);

/// Worst-case NCJT ergodic rate over residual delays: MC over the effective
/// channel, exact sum over subcarriers, last phase integrated in closed form.
RateEstimate ncjt_async_ergodic(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm,
                                std::size_t n, const RngStream& rng, unsigned workers = 1);
/// K -> infinity value of ncjt_async_ergodic.
RateEstimate ncjt_async_ergodic_limit(int num_tx, double p_blocked, double snr, std::size_t n,
                                      const RngStream& rng, unsigned workers = 1);

enum class AsyncScheme { Capacity, NCJT, NCJTPhaseDiversity };

/// Ergodic rate for one fixed delay vector. The capacity-achieving scheme is
/// evaluated exactly by enumerating blockage patterns (n and rng unused); the
/// NCJT variants by Monte Carlo.
RateEstimate rate_at_delays(AsyncScheme scheme, const DelayProfile& delays, int num_tx,
                            double p_blocked, double snr, const OfdmConfig& ofdm, std::size_t n,
                            const RngStream& rng, unsigned workers = 1);

struct WorstCaseDeltaReport {
  std::vector<double> grid;            ///< fractional-delay points per transmitter
  std::vector<Eigen::ArrayXd> points;  ///< evaluated delay vectors (as tau)
  Eigen::ArrayXd rates;                ///< capacity-scheme rate at each point
  Eigen::ArrayXd argmin;               ///< fractional parts at the minimum
  double min_rate = 0.0;
  double worst_case = 0.0;             ///< worst_case_capacity
  double at_half = 0.0;                ///< rate at delta = (0.5, ..., 0.5)
  double on_grid = 0.0;                ///< rate at delta = 0
  double synchronous_scaled = 0.0;     ///< K/(K+D) * ergodic_capacity
  bool min_at_half = false;
};

/// Exhaustive search over the symmetric product grid of `grid_resolution`
/// points j/(n-1) in [0, 1] per transmitter. The endpoint 1 is expressed as a
/// whole-sample delay (d = 1, delta = 0) and needs tau_max >= 1.
WorstCaseDeltaReport verify_worst_case_delta(int num_tx, double p_blocked, double snr,
                                             const OfdmConfig& ofdm, int grid_resolution);
/// Same search over an explicit per-transmitter grid of delays.
WorstCaseDeltaReport verify_worst_case_delta(int num_tx, double p_blocked, double snr,
                                             const OfdmConfig& ofdm, const std::vector<double>& grid);

/// Asymptotically achievable worst-case outage rate with phase diversity for
/// finite K; the inner expectations are MC with the last phase integrated.
OutageSolution async_phase_div_outage(int num_tx, double p_blocked, double snr,
                                      const OfdmConfig& ofdm, std::size_t n, const RngStream& rng,
                                      unsigned workers = 1);
OutageSolution async_phase_div_outage_limit(int num_tx, double p_blocked, double snr,
                                            std::size_t n, const RngStream& rng,
                                            unsigned workers = 1);

struct HoeffdingRow {
  int num_subcarriers = 0;
  double epsilon = 0.0;
  double bound = 0.0;              ///< 2 exp(-2 K eps^2 / log2^2(1 + L^2 P)), capped at 1
  double max_block_frequency = 0.0;
  double pooled_frequency = 0.0;
  bool passed = false;
};

struct HoeffdingReport {
  std::vector<HoeffdingRow> rows;
  bool passed = false;
};

/// For `n_blocks` draws of (beta, theta), draws the phase-diversity phases
/// `n_phase_draws` times and counts how often the frame rate
/// (1/(K+D)) sum_k R_k deviates from its conditional mean by at least eps.
/// Rates are in bits, so the bound uses log2. Delays default to delta = 0.5
/// for every transmitter.
HoeffdingReport hoeffding_check(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm,
                                std::size_t n_blocks, const RngStream& rng,
                                const std::vector<double>& epsilons = {0.1, 0.2, 0.5},
                                std::size_t n_phase_draws = 10000, unsigned workers = 1);
HoeffdingReport hoeffding_check(int num_tx, double p_blocked, double snr, const OfdmConfig& ofdm,
                                const DelayProfile& delays, std::size_t n_blocks,
                                const RngStream& rng, const std::vector<double>& epsilons,
                                std::size_t n_phase_draws, unsigned workers = 1);

}  // namespace macrodiv
