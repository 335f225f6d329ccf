// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "macrodiv/channel.hpp"
#include "macrodiv/closed_forms.hpp"
#include "oracles.hpp"

using namespace macrodiv;

namespace {

double ring_by_quadrature(double x, double y) {
  return oracle::period_average([&](double t) {
    return std::log2(1.0 + std::norm(x + y * std::polar(1.0, t)));
  });
}

}  // namespace

TEST_CASE("ring expectation examples") {
  CHECK(ring_expectation(0.0, 2.0) == doctest::Approx(std::log2(5.0)).epsilon(1e-14));
  CHECK(ring_expectation(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  const double r11 = ring_expectation(1.0, 1.0);
  CHECK(r11 == doctest::Approx(ring_by_quadrature(1.0, 1.0)).epsilon(1e-10));
  CHECK(r11 == doctest::Approx(1.3884838272612).epsilon(1e-12));
}

TEST_CASE("ring expectation matches quadrature, is symmetric and bounded") {
  const double mags[] = {0.0, 0.05, 0.3, 1.0, 1.7, 4.0, 31.6};
  for (double x : mags) {
    for (double y : mags) {
      const double r = ring_expectation(x, y);
      CHECK(r == doctest::Approx(ring_by_quadrature(x, y)).epsilon(1e-9));
      CHECK(r == doctest::Approx(ring_expectation(y, x)).epsilon(1e-15));
      CHECK(r >= std::log2(1.0 + (x - y) * (x - y)) - 1e-12);
      CHECK(r <= std::log2(1.0 + (x + y) * (x + y)) + 1e-12);
    }
  }
}

TEST_CASE("ring expectation is strictly increasing in either argument") {
  for (double x : {0.2, 1.0, 3.0}) {
    double previous = ring_expectation(x, 0.0);
    for (int j = 1; j <= 200; ++j) {
      const double current = ring_expectation(x, 0.05 * j);
      CHECK(current > previous);
      previous = current;
    }
  }
  CHECK(ring_expectation(1.0f, 1.0f) == doctest::Approx(1.3884838f));
}

TEST_CASE("ergodic capacity") {
  CHECK(ergodic_capacity(1, 0.5, 1.0).value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ergodic_capacity(2, 0.5, 1.0).value ==
        doctest::Approx(0.5 + 0.25 * std::log2(3.0)).epsilon(1e-14));
  CHECK(ergodic_capacity(2, 0.5, 1.0).value == doctest::Approx(0.8962).epsilon(1e-4));
  CHECK(ergodic_capacity(5, 1.0, 3.0).value == 0.0);
  CHECK(ergodic_capacity(5, 0.0, 3.0).value == doctest::Approx(std::log2(16.0)));
}

TEST_CASE("outage capacity") {
  const auto a = outage_capacity(1, 0.3, 1.0);
  CHECK(a.rate.value == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(a.argmax_index == 1);

  const auto b = outage_capacity(2, 0.5, 1.0);
  CHECK(b.rate.value == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(b.argmax_index == 1);

  // Candidates 0.99 * log2(16) = 3.96 and 0.81 * log2(31) = 4.0129.
  const auto c = outage_capacity(2, 0.1, 15.0);
  CHECK(c.rate.value == doctest::Approx(0.81 * std::log2(31.0)).epsilon(1e-14));
  CHECK(c.argmax_index == 2);
}

TEST_CASE("outage ties go to the smaller index") {
  // P(alpha >= 1) log2(1 + P) = P(alpha >= 2) log2(1 + 2P) at P = 1 needs
  // (1 - pb^2) = (1 - pb)^2 log2(3), i.e. (1 + pb) = (1 - pb) log2(3).
  const double pb = (std::log2(3.0) - 1.0) / (std::log2(3.0) + 1.0);
  const auto sol = outage_capacity(2, pb, 1.0);
  const Eigen::ArrayXd ccdf = alpha_ccdf(2, pb);
  CHECK(ccdf(1) == doctest::Approx(ccdf(2) * std::log2(3.0)).epsilon(1e-14));
  CHECK(sol.argmax_index == 1);
}

TEST_CASE("outage never exceeds ergodic") {
  for (int num_tx = 1; num_tx <= 10; ++num_tx) {
    for (double pb : {0.01, 0.1, 0.3, 0.5, 0.8}) {
      for (double snr : {0.1, 1.0, 10.0, 1000.0}) {
        const auto out = outage_capacity(num_tx, pb, snr);
        CHECK(out.rate.value <= ergodic_capacity(num_tx, pb, snr).value + 1e-12);
        // Brute force over i with an independently computed tail.
        const Eigen::ArrayXd pmf = oracle::enumerate_alpha_pmf(num_tx, pb);
        double best = 0.0;
        int best_i = 1;
        for (int i = 1; i <= num_tx; ++i) {
          const double value = pmf.tail(num_tx + 1 - i).sum() * std::log2(1.0 + i * snr);
          if (value > best + 1e-12) {
            best = value;
            best_i = i;
          }
        }
        CHECK(out.rate.value == doctest::Approx(best).epsilon(1e-12));
        CHECK(out.argmax_index == best_i);
      }
    }
  }
}

TEST_CASE("transmitter selection") {
  CHECK(ts_ergodic_rate(1, 0.5, 1.0).value == doctest::Approx(0.5));
  CHECK(ts_ergodic_rate(3, 0.5, 1.0).value == doctest::Approx(0.875).epsilon(1e-14));
  CHECK(ts_ergodic_rate(200, 0.5, 7.0).value == doctest::Approx(3.0).epsilon(1e-14));
  for (double pb : {0.1, 0.6}) {
    CHECK(ts_ergodic_rate(1, pb, 2.0).value == doctest::Approx(ergodic_capacity(1, pb, 2.0).value));
  }
}

TEST_CASE("two-transmitter alamouti") {
  CHECK(two_tx_alamouti_rate(2, 0.5, 1.0).value ==
        doctest::Approx(0.25 * std::log2(3.0) + 0.5).epsilon(1e-14));
  CHECK(two_tx_alamouti_rate(5, 0.0, 2.0).value == doctest::Approx(std::log2(5.0)).epsilon(1e-14));
  CHECK(two_tx_alamouti_rate(5, 1.0, 2.0).value == 0.0);
  CHECK_THROWS_AS(two_tx_alamouti_rate(1, 0.5, 1.0), std::invalid_argument);
  for (double pb : {0.05, 0.3, 0.7}) {
    for (double snr : {0.5, 4.0, 100.0}) {
      CHECK(two_tx_alamouti_rate(2, pb, snr) == ergodic_capacity(2, pb, snr));
      CHECK(two_tx_alamouti_rate(6, pb, snr).value <= ergodic_capacity(6, pb, snr).value);
      CHECK(two_tx_alamouti_outage(6, pb, snr).rate.value <=
            two_tx_alamouti_rate(6, pb, snr).value + 1e-12);
    }
  }
}

TEST_CASE("rbar closed forms") {
  CHECK(rbar_closed(1, 3.0).value == 2.0);
  CHECK(rbar_closed(0, 5.0).value == 0.0);
  CHECK(rbar_closed(2, 1.0).value == doctest::Approx(1.3884838272612).epsilon(1e-12));
  CHECK_THROWS_AS(rbar_closed(3, 1.0), std::domain_error);
  CHECK_THROWS_AS(rbar_closed(-1, 1.0), std::invalid_argument);
  for (double snr : {0.01, 0.1, 1.0, 10.0, 1e4}) {
    CHECK(rbar_closed(1, snr).value == std::log2(1.0 + snr));
    const double two = rbar_closed(2, snr).value;
    CHECK(two < std::log2(1.0 + 2.0 * snr));
    CHECK(two > std::log2(1.0 + snr));
    CHECK(two == doctest::Approx((std::log2((1.0 + 2.0 * snr + std::sqrt(1.0 + 4.0 * snr)) / 2.0)))
                     .epsilon(1e-12));
    const double amp = std::sqrt(snr);
    CHECK(two == doctest::Approx(ring_by_quadrature(amp, amp)).epsilon(1e-9));
  }
}

TEST_CASE("async effective snr") {
  CHECK(async_effective_snr(0.0, 5.0) == 0.0);
  CHECK(async_effective_snr(1.0, 3.0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(async_effective_snr(4.0, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  for (int i = 0; i <= 16; ++i) {
    for (int e = -30; e <= 30; ++e) {
      const double snr = std::pow(10.0, e / 10.0);
      CHECK(async_effective_snr(static_cast<double>(i), snr) >= i * snr / 4.0);
      CHECK(async_effective_snr(static_cast<double>(i), snr) <= i * snr + 1e-12);
    }
  }
}

TEST_CASE("async effective snr equals the period average of the off-grid factor") {
  // log2(1 + s (1 + cos w) / 2) averaged over w is log2(1 + eff(s)).
  for (double s : {0.3, 2.0, 17.0}) {
    const double avg = oracle::period_average(
        [&](double w) { return std::log2(1.0 + s * (1.0 + std::cos(w)) / 2.0); });
    CHECK(avg == doctest::Approx(std::log2(1.0 + async_effective_snr(1.0, s))).epsilon(1e-9));
  }
}

TEST_CASE("async limits are bounded by the synchronous values") {
  for (int num_tx = 1; num_tx <= 8; ++num_tx) {
    for (double pb : {0.0, 0.2, 0.6}) {
      for (double snr : {0.1, 1.0, 30.0}) {
        CHECK(async_capacity_limit(num_tx, pb, snr).value <=
              ergodic_capacity(num_tx, pb, snr).value);
        const auto out = async_outage_limit(num_tx, pb, snr);
        CHECK(out.rate.value <= outage_capacity(num_tx, pb, snr).rate.value + 1e-12);
        CHECK(out.rate.value <= async_capacity_limit(num_tx, pb, snr).value + 1e-12);
      }
    }
  }
  CHECK(async_capacity_limit(1, 0.0, 3.0).value == doctest::Approx(std::log2(2.25)));
}
