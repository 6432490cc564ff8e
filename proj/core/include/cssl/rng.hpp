#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cssl {

// Deterministic cross-platform generator: xoshiro256++ state seeded through
// SplitMix64. The standard <random> distributions are implementation-defined,
// which would break bitwise seed reproducibility across toolchains, so the
// uniform and normal transforms are fixed here: 53-bit uniforms in [0,1) and
// Box-Muller (cosine branch, two uniforms per variate, no cached spare).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  // Independent stream for (master seed, stream index) pairs; used for
  // per-run derivation in the benchmark harness.
  static Rng derive(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t sm = master;
    std::uint64_t a = splitmix64(sm);
    sm = stream ^ 0x9E3779B97F4A7C15ULL;
    std::uint64_t b = splitmix64(sm);
    return Rng(a ^ (b + 0x2545F4914F6CDD1DULL));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal() {
    // 1 - uniform() lies in (0,1], keeping the log argument positive.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, bound). Bias is below 2^-53 for desk-scale bounds.
  std::uint64_t below(std::uint64_t bound) {
    auto v = static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
    return v < bound ? v : bound - 1;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace cssl
