#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace d2means {

// splitmix64 step. Advances `state` and returns the next scrambled word.
inline std::uint64_t mix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seed of an independent substream, as a fixed function of (master_seed,
// stream). Substreams are reproducible regardless of execution order, which
// is what makes parallel restarts and trials deterministic.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream) {
  std::uint64_t s = master_seed ^ (0x632be59bd9b4e019ull * (stream + 1));
  mix64(s);
  mix64(s);
  return mix64(s);
}

// Seedable deterministic stream of 64-bit words (xoshiro256**, seeded via
// splitmix64). Identical seeds give identical sequences on every platform;
// standard-library distributions are avoided throughout the project because
// their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = mix64(s);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, n). n must be >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t word = next();
      if (word >= threshold) return word % n;
    }
  }

  // Standard normal variate (Box-Muller).
  double next_gaussian() {
    double u = next_double();
    if (u <= 0.0) u = 0x1.0p-53;
    const double v = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u));
    return radius * std::cos(6.283185307179586476925286766559 * v);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace d2means
