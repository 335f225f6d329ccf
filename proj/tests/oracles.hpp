// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the test suites. Nothing here calls
// into the library's closed forms.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// (1/2pi) * integral over one period, by the periodic trapezoid rule.
template <class F>
double period_average(F&& f, int n = 1 << 14) {
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += f(2.0 * std::numbers::pi * j / n);
  return total / n;
}

/// P(alpha = i) by summing over all 2^L blockage patterns.
inline Eigen::ArrayXd enumerate_alpha_pmf(int num_tx, double p_blocked) {
  Eigen::ArrayXd pmf = Eigen::ArrayXd::Zero(num_tx + 1);
  for (unsigned pattern = 0; pattern < (1u << num_tx); ++pattern) {
    double prob = 1.0;
    int on = 0;
    for (int l = 0; l < num_tx; ++l) {
      const bool connected = (pattern >> l) & 1u;
      prob *= connected ? 1.0 - p_blocked : p_blocked;
      on += connected;
    }
    pmf(on) += prob;
  }
  return pmf;
}

/// Kolmogorov distribution tail P(K > x).
inline double kolmogorov_tail(double x) {
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic;
  double p_value;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_tail((en + 0.12 + 0.11 / en) * d)};
}

/// Upper 1e-3 quantiles of the chi-square distribution, df = 1..8.
inline double chi_square_critical_1e3(int df) {
  static constexpr double kTable[] = {10.827566, 13.815511, 16.266236, 18.466827,
                                      20.515006, 22.457744, 24.321886, 26.124482};
  return kTable[df - 1];
}

}  // namespace oracle
