#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace steplab {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive statistically independent seeds from
// (seed, purpose, indices) without maintaining long-lived RNG streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = mix64(seed);
  for (char c : purpose) h = mix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::string_view purpose,
                    std::uint64_t a = 0, std::uint64_t b = 0) {
  return Rng(derive_seed(seed, purpose, a, b));
}

// Uniform double in [0, 1) with 53 bits; avoids the implementation-defined
// behaviour of std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {  // inclusive bounds
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

// Standard normal via Box-Muller; stateless so sampling order is explicit.
inline double normal01(Rng& rng) {
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace steplab
