// Counter-based random numbers: every draw is a pure function of
// (seed, stream, coordinates), so samplers are reproducible and can be split
// across threads in any way without changing their output.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace lowdeg::rng {

enum class Stream : std::uint64_t {
  labels = 0x6c61626cULL,
  noise = 0x6e6f6973ULL,
  bernoulli = 0x6265726eULL,
  monte_carlo = 0x6d6f6e74ULL,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash(std::uint64_t seed, Stream stream, std::uint64_t a,
                             std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ (b * 0x2545f4914f6cdd1dULL));
  return splitmix64(h ^ (c * 0x9e3779b97f4a7c15ULL));
}

/// Uniform on [0, 1).
constexpr double uniform(std::uint64_t seed, Stream stream, std::uint64_t a,
                         std::uint64_t b = 0, std::uint64_t c = 0) {
  return static_cast<double>(hash(seed, stream, a, b, c) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two counter draws.
inline double normal(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b = 0,
                     std::uint64_t c = 0) {
  const double u1 = 1.0 - uniform(seed, stream, a, b, 2 * c);  // (0, 1]
  const double u2 = uniform(seed, stream, a, b, 2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Stable 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Per-task seed from the master seed, a task label and a replicate index.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view task,
                                    std::uint64_t replicate) {
  return splitmix64(splitmix64(master ^ fnv1a(task)) + replicate);
}

}  // namespace lowdeg::rng
