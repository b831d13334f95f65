#pragma once

#include <cstdint>

namespace immlab {

// Counter-based generator (splitmix64). All randomized procedures in the
// toolkit draw from this generator so that outputs are byte-identical across
// platforms for a fixed seed. The draw order of each consumer is documented
// at its definition.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // One uniform bit (top bit of the next word).
  int bit() { return static_cast<int>(next() >> 63); }

  // Uniform in [0, n) via rejection; n >= 1.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Derivation seed for trial k of a seeded experiment: trials can be run in
// any order (or in parallel) and still reproduce the same stream.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k) {
  SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
  return g.next();
}

}  // namespace immlab
