// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "macrodiv/rng.hpp"

namespace macrodiv {

/// Trials are grouped into fixed-size chunks. Chunk boundaries never depend on
/// the worker count, which is what makes reductions reproducible.
inline constexpr std::size_t kTrialChunk = 2048;

/// Running mean/variance (Welford) with an order-fixed merge.
struct MomentAccumulator {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const MomentAccumulator& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double n = n_a + n_b;
    const double delta = other.mean - mean;
    mean += delta * n_b / n;
    m2 += other.m2 + delta * delta * n_a * n_b / n;
    count += other.count;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

/// Runs `body(chunk_index)` for every chunk in [0, n_chunks) on up to
/// `workers` threads. Output must be written to per-chunk slots.
template <class Body>
void for_each_chunk(std::size_t n_chunks, unsigned workers, Body&& body) {
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n_chunks));
  if (n_threads <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < n_chunks; c = next++) body(c);
    });
  }
}

/// Mean and spread of `trial(rng)` over n independent trials; trial i draws
/// from `base.substream(i)`.
template <class Trial>
MomentAccumulator accumulate_trials(std::size_t n, const RngStream& base, unsigned workers,
                                    Trial&& trial) {
  const std::size_t n_chunks = (n + kTrialChunk - 1) / kTrialChunk;
  std::vector<MomentAccumulator> partial(n_chunks);
  for_each_chunk(n_chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kTrialChunk);
    MomentAccumulator acc;
    for (std::size_t i = c * kTrialChunk; i < end; ++i) {
      RngStream rng = base.substream(i);
      acc.add(trial(rng));
    }
    partial[c] = acc;
  });
  MomentAccumulator total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

/// Per-trial values in trial order.
template <class Trial>
Eigen::ArrayXd collect_trials(std::size_t n, const RngStream& base, unsigned workers,
                              Trial&& trial) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(n));
  const std::size_t n_chunks = (n + kTrialChunk - 1) / kTrialChunk;
  for_each_chunk(n_chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kTrialChunk);
    for (std::size_t i = c * kTrialChunk; i < end; ++i) {
      RngStream rng = base.substream(i);
      out(static_cast<Eigen::Index>(i)) = trial(rng);
    }
  });
  return out;
}

}  // namespace macrodiv
