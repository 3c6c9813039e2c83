#include "gmc/noise.hpp"

#include <cmath>
#include <numbers>

namespace gmc::rng {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

double uniform(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t bits = mix64(key + (counter + 1) * 0x9E3779B97F4A7C15ULL);
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double gaussian(std::uint64_t key, std::uint64_t index) {
  const std::uint64_t pair = index / 2;
  const double r = std::sqrt(-2.0 * std::log(uniform(key, 2 * pair)));
  const double t = 2.0 * std::numbers::pi * uniform(key, 2 * pair + 1);
  return (index % 2 == 0) ? r * std::cos(t) : r * std::sin(t);
}

}  // namespace gmc::rng
