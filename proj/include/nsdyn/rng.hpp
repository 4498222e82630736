#pragma once

#include <cstdint>

#include "nsdyn/vector.hpp"

namespace nsdyn {

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

/// Derives the seed of sub-stream `stream` from a parent seed. This is the
/// only stream-splitting rule in the library: sample n of an experiment seeded
/// with s draws from derive_seed(s, n), independently of which thread runs it
/// and of the order in which samples are visited.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Counter-based generator: the i-th draw is mix64(key + i * golden), where
/// key = mix64(seed). State is the pair (key, counter), so a copy replays
/// exactly and skipping ahead is O(1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : key_(mix64(seed)) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (one output per two uniforms).
  double normal();
  /// Uniform integer on [0, n). Consumes at least one draw, even for n <= 1.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform sample in the closed ball B(center, radius): isotropic Gaussian
/// direction scaled by radius * u^(1/dim).
Vector sample_ball(const Vector& center, double radius, Rng& rng);

}  // namespace nsdyn
