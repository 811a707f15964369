#pragma once

#include <cstdint>

namespace marg {

// Deterministic 64-bit generator (splitmix64). Outputs feed seed displacement,
// random seed selection, synthetic noise and sample mixing; region maps and
// exports must reproduce bit-for-bit across platforms, so std:: distributions
// (implementation-defined sequences) are not used anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, bound) via power-of-two rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

  // Inclusive range draw.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi) - lo + 1));
  }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Independent stream for (seed, index) pairs, e.g. one per mix sample.
  static Rng split(std::uint64_t seed, std::uint64_t stream) {
    Rng mixer(seed ^ (0xA0761D6478BD642Full * (stream + 1)));
    return Rng(mixer.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace marg
