#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace uape {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h) { return h; }

template <typename... Rest>
constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t x, Rest... rest) {
  return hash_combine(splitmix64(h ^ x), rest...);
}

// Double in [0, 1) from the top 53 bits.
inline double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound). Consumes raw mt19937_64 output only, so the
// result is identical on every platform (std distributions are not).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t zone =
      bound * (std::numeric_limits<std::uint64_t>::max() / bound);
  while (true) {
    const std::uint64_t x = rng();
    if (x < zone) return x % bound;
  }
}

}  // namespace uape
