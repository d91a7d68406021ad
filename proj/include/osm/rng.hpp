#pragma once

#include <cstdint>
#include <random>

namespace osm {

// Deterministic seedable RNG. mt19937_64 is fully specified by the standard,
// and every derived draw below avoids the implementation-defined standard
// distributions, so streams reproduce bit-identically across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(split_mix(seed)) {}

  // Independent stream for one Monte Carlo replication.
  static Rng for_replication(std::uint64_t seed, std::uint64_t replication) {
    return Rng(seed ^ split_mix(0x9E3779B97F4A7C15ULL + replication));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  static std::uint64_t split_mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 eng_;
};

}  // namespace osm
