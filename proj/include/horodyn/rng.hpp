#pragma once

// Deterministic random numbers. A SplitMix64 core with counter-based stream
// derivation: given one master seed, stream k is seeded from mix(master, k),
// so per-task generators are independent of scheduling and thread count, and
// uniform doubles are built from the high 53 bits (identical on every
// platform; the standard-library distributions are not).

#include <cstdint>

namespace horodyn {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream `stream` of the generator family identified by `master`.
inline Rng derive_stream(std::uint64_t master, std::uint64_t stream) {
  return Rng(mix_seed(master, stream));
}

}  // namespace horodyn
