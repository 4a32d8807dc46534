#ifndef FASTMI_RNG_HPP
#define FASTMI_RNG_HPP

#include <cstdint>

#include "fastmi/math.hpp"

namespace fastmi::rng {

// SplitMix64: stateless-style mixer used for seeding and stream derivation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Collision-resistant per-task seed: passes (seed, index) through the
// SplitMix64 mixer so derived seeds share no arithmetic structure.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0x2545F4914F6CDD1DULL + index * 0x9E3779B97F4A7C15ULL));
  return mix.next();
}

// xoshiro256++ with splittable streams: (seed, stream) pairs yield
// statistically independent generators, so replicate r of a study can be
// seeded as {master_seed, r} regardless of execution order.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream = 0) {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL + stream * 0x9E3779B97F4A7C15ULL));
    s_[0] = mix.next();
    s_[1] = mix.next();
    s_[2] = mix.next();
    s_[3] = mix.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // forbidden state
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform draw strictly inside (0,1): 53 random bits centered on the
  // half-ulp lattice, so 0 and 1 are unreachable.
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal by inversion; deterministic and platform-portable,
  // unlike std::normal_distribution.
  double normal() { return math::normal_quantile(uniform()); }

  // Exp(1).
  double exponential() { return -std::log(uniform()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace fastmi::rng

#endif  // FASTMI_RNG_HPP
