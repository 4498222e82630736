#include "nsdyn/rng.hpp"

#include <cmath>
#include <numbers>

namespace nsdyn {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + kGolden));
}

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // 1 - u keeps the logarithm argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) {
    next_u64();  // keep one draw per call regardless of n
    return 0;
  }
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t r = next_u64();
  while (r >= limit) r = next_u64();
  return r % n;
}

Vector sample_ball(const Vector& center, double radius, Rng& rng) {
  const std::size_t n = center.dim();
  Vector dir(n);
  double norm = 0.0;
  while (norm == 0.0) {
    for (std::size_t i = 0; i < n; ++i) dir[i] = rng.normal();
    norm = dir.norm();
  }
  const double scale = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n)) / norm;
  Vector x = center;
  for (std::size_t i = 0; i < n; ++i) x[i] += scale * dir[i];
  return x;
}

}  // namespace nsdyn
