#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace mmd2d {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Hashes an ordered tuple of keys into a seed. Used to derive independent
/// streams from (base seed, trial index, frame, node ids, ...).
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = 0x6A09E667F3BCC908ULL;
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

/// Counter-based generator for keyed one-off draws (per node pair, per frame).
/// Cheap to construct, unlike mt19937_64.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1) from the top 53 bits.
template <class Gen>
double uniform01(Gen& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace mmd2d
