#pragma once

#include <cstdint>

namespace diter {

// splitmix64 (Steele, Lea, Flood). Every seeded draw in the library goes
// through this generator so outputs are reproducible bit-for-bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n) other than `excluded`: value mod (n - 1),
  // shifted by one at or above the excluded slot. Requires n >= 2.
  std::uint64_t next_excluding(std::uint64_t n, std::uint64_t excluded) {
    const std::uint64_t r = next() % (n - 1);
    return r < excluded ? r : r + 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace diter
