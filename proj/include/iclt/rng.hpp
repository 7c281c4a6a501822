#pragma once

#include <cstdint>
#include <numbers>

namespace iclt::rng {

// Counter-based generation: value j of stream s is a pure function of
// (seed, s, j), so results do not depend on evaluation order or thread count.

constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ stream) ^ index);
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>(hash(seed, stream, index) >> 11) * 0x1.0p-53;
}

/// Uniform angle in [0, 2π).
constexpr double angle(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return 2.0 * std::numbers::pi * uniform(seed, stream, index);
}

}  // namespace iclt::rng
