// Seed derivation and portable random draws.
//
// All stochastic components consume a single sequential std::mt19937_64
// stream through the helpers below, so a (seed, draw-order) pair fully
// determines every result. Sub-seeds are derived with splitmix64 over the
// parent seed XOR a tag hash; the scheme is documented in
// docs/file-formats.md and must not change between releases.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace camid {

using Rng = std::mt19937_64;

namespace seeds {

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Sub-seed for a named role ("init", "theta", "noise", ...).
constexpr std::uint64_t derive(std::uint64_t seed, std::string_view tag) {
  return mix(seed ^ fnv1a(tag));
}

// Sub-seed for the index-th item of a named role (scenario j, run r, ...).
constexpr std::uint64_t derive(std::uint64_t seed, std::string_view tag,
                               std::uint64_t index) {
  return mix(seed ^ fnv1a(tag) ^ mix(index + 0x51ed2701ULL));
}

}  // namespace seeds

namespace draw {

// Uniform double in [0, 1) with 53 significant bits.
inline double u01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection-sampled, no modulo bias.
inline std::uint64_t index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Standard normal via Box-Muller. Stateless: two uniforms per draw, the
// second output is discarded so the stream layout stays predictable.
inline double standard_normal(Rng& rng) {
  double u1;
  do {
    u1 = u01(rng);
  } while (u1 <= 0.0);
  const double u2 = u01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline double normal(Rng& rng, double mean, double stddev) {
  return mean + stddev * standard_normal(rng);
}

}  // namespace draw

}  // namespace camid
