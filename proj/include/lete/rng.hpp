#pragma once

#include <cmath>
#include <cstdint>

namespace lete {

/// Deterministic, platform-independent PRNG used for every seeded draw in the
/// library (parameter init, synthetic data, event trains).
///
/// Algorithm: splitmix64 over a 64-bit counter state. Doubles are produced by
/// taking the top 53 bits of the next output (uniform in [0,1)); normals use
/// the Box-Muller transform with a cached spare. std:: distributions are
/// deliberately avoided because their output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  /// Derive an independent sub-stream of `seed`. Streams with different ids
  /// are decorrelated by mixing the id into the state before the first draw.
  Rng(uint64_t seed, uint64_t stream) : state_(seed) {
    state_ ^= 0x9E3779B97F4A7C15ULL * (stream + 1);
    (void)next_u64();
  }

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] (inclusive). Uses rejection-free modulo over
  /// a 64-bit draw; bias is < 2^-53 for the small ranges used here.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lete
