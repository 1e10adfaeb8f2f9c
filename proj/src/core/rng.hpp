#pragma once

#include <cstdint>

namespace sigmalab {

// splitmix64. Deliberately not std::mt19937 + std distributions: the test
// suite freezes expected values derived from seeded streams, and those must
// not depend on the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(uint64_t seed) : s_(seed) {}

  uint64_t next() {
    uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n >= 1. Rejection sampling keeps it unbiased.
  uint64_t below(uint64_t n) {
    uint64_t limit = ~0ull - ~0ull % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  // Uniform in [lo, hi] inclusive.
  uint64_t in(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return next() & 1; }

private:
  uint64_t s_;
};

}  // namespace sigmalab
