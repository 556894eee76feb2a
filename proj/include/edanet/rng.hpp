#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace edanet {

/// Seeded random stream used by every stochastic component.
///
/// All draws go through uniform() / uniform_int() rather than the
/// standard-library distributions, whose output is implementation defined.
/// This keeps seeded runs byte-reproducible across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : raw_(seed) {}

  /// Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_int(std::uint64_t bound) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Number of raw engine words consumed so far. Sampling contracts
  /// (one uniform per gene) are checked against this in tests.
  std::uint64_t draw_count() const { return draws_taken_; }

 private:
  std::uint64_t next() {
    ++draws_taken_;
    return raw_();
  }

  std::mt19937_64 raw_;
  std::uint64_t draws_taken_ = 0;
};

/// FNV-1a over a byte string; used to derive per-run seeds from
/// (master seed, problem, algorithm, repetition) so that runs are
/// independent of scheduling order.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t mix_seed(std::uint64_t master, std::string_view problem,
                              std::string_view algorithm, std::uint64_t rep) {
  char buf[16];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(master >> (8 * i));
  for (int i = 0; i < 8; ++i) buf[8 + i] = static_cast<char>(rep >> (8 * i));
  std::uint64_t h = fnv1a64({buf, 16});
  h = fnv1a64(problem, h);
  h = fnv1a64("/", h);
  h = fnv1a64(algorithm, h);
  // Final avalanche (splitmix64) so nearby master seeds do not collide.
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

}  // namespace edanet
