#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "ecps/rational.hpp"

namespace ecps {

/// Seeded 64-bit generator addressed by (seed, stream). Streams with distinct
/// indices are independent, and the whole bit sequence is fixed by the C++
/// standard (mt19937_64 + seed_seq), so runs reproduce across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }

  /// Index j drawn with probability exactly probs[j]. The probabilities must
  /// be nonnegative and sum to one; the draw compares a lazily expanded
  /// uniform variate against the exact cumulative thresholds, so no rounding
  /// ever enters.
  int categorical(std::span<const Rational> probs);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace ecps
