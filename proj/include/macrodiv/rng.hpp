// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <numbers>

namespace macrodiv {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Maps a 128-bit counter and a 64-bit key to 128 bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// 64-bit finalizer used to derive substream identifiers.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/**
 * Counter-based random stream.
 *
 * The pair (seed, stream_id) fully determines the sequence of draws: the seed
 * is the Philox key, the stream id occupies the upper half of the counter and
 * the draw index the lower half. Two streams with equal keys produce
 * bit-identical output regardless of which thread consumes them.
 */
class RngStream {
 public:
  using result_type = std::uint32_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Independent child stream for trial `index`. Does not advance this stream.
  RngStream substream(std::uint64_t index) const {
    return {seed_, splitmix64(stream_id_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL))};
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xFFFFFFFFu; }

  result_type operator()() {
    if (buffered_ == 0) refill();
    return buffer_[4 - buffered_--];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = (*this)();
    return (hi << 32) | (*this)();
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform phase on [0, 2*pi).
  double phase() { return 2.0 * std::numbers::pi * uniform(); }

  std::complex<double> unit_phasor() { return std::polar(1.0, phase()); }

  bool bernoulli(double success_prob) { return uniform() < success_prob; }

  /// Standard normal via Box-Muller; the sine branch is discarded so that
  /// each call consumes a fixed number of draws.
  double normal();

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
};

}  // namespace macrodiv
