#pragma once

#include <cstdint>

namespace typekg {

// Deterministic 64-bit generator used everywhere randomness is needed.
// xoshiro256** (Blackman/Vigna), state seeded through splitmix64, so the
// same seed produces the same stream on every platform. std::mt19937 and
// the standard distributions are deliberately avoided: their output is not
// pinned down tightly enough for bit-for-bit replica reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
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

  // Uniform in [0, n) without modulo bias (rejection sampling).
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t x = next();
    while (x < threshold) x = next();
    return x % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool coin() { return (next() >> 63) != 0; }

  // splitmix64 step; also used standalone to derive per-stream seeds.
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Seed for an auxiliary stream (e.g. the corruption sampler of a replica)
  // decorrelated from the stream seeded with `seed` itself.
  static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0xA0761D6478BD642FULL * (stream + 1));
    return splitmix64(x);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace typekg
