#pragma once

#include <cstdint>
#include <string_view>

namespace amrf {

// Sampling goes through the fully specified generators below rather than
// <random> distributions, whose mapping is implementation-defined; run
// outputs have to be reproducible byte for byte.

/// 64-bit finalizer (murmur3 fmix64). Bijective, strong avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xFF51AFD7ED558CCDull;
  z ^= z >> 33;
  z *= 0xC4CEB9FE1A85EC53ull;
  z ^= z >> 33;
  return z;
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Deterministic per-sample seed; distinct ids and distinct global seeds
/// decorrelate through a 64-bit hash mix.
constexpr std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view sample_id) {
  return mix64(mix64(global_seed) ^ fnv1a64(sample_id));
}

/// splitmix64 stream generator.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform in [0, n). Modulo bias is negligible for the small n used here.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace amrf
