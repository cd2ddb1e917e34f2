#pragma once

#include <cstdint>
#include <string_view>

namespace sropt {

// Every random choice in the project flows from one root seed through named
// child streams (see Rng::child), so any run is replayable exactly. Draws are
// implemented by hand on top of xoshiro256** instead of <random> distributions
// so the byte stream does not depend on the standard library in use.

inline uint64_t splitmix64_next(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {
    uint64_t x = seed;
    for (auto& w : s_) w = splitmix64_next(x);
  }

  uint64_t seed() const { return seed_; }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Unbiased integer in [0, n). n must be > 0.
  uint64_t uniform_int(uint64_t n) {
    const uint64_t threshold = (~n + 1) % n;  // (2^64 - n) % n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform_real() < p; }

  // Derive an independent stream from this rng's seed (not its current
  // state), identified by a name and up to two indices.
  Rng child(std::string_view name, uint64_t i = 0, uint64_t j = 0) const {
    uint64_t x = seed_ ^ fnv1a64(name);
    uint64_t m = splitmix64_next(x);
    x ^= i * 0x9e3779b97f4a7c15ULL;
    m ^= splitmix64_next(x);
    x ^= j * 0xbf58476d1ce4e5b9ULL;
    m ^= splitmix64_next(x);
    return Rng(m);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t seed_;
  uint64_t s_[4];
};

}  // namespace sropt
