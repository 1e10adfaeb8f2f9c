#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace sigmalab {

// Every mod-p computation in the library runs over a prime modulus that was
// validated once, at the boundary. Internal code that enumerates known primes
// may aggregate-initialize Modulus{p} directly.
struct Modulus {
  uint64_t p = 2;

  static Modulus checked(uint64_t p);      // throws not_prime
  static Modulus checked_odd(uint64_t p);  // additionally rejects p = 2
  bool operator==(const Modulus&) const = default;
};

bool is_prime_u64(uint64_t n);
std::vector<uint64_t> primes_up_to(uint64_t n);

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t p) {
  uint64_t s = a + b;  // a, b < p <= 2^63 here, so no overflow
  return s >= p ? s - p : s;
}

inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

inline uint64_t neg_mod(uint64_t a, uint64_t p) { return a == 0 ? 0 : p - a; }

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>((__uint128_t)a * b % p);
}

uint64_t pow_mod(uint64_t a, uint64_t e, uint64_t p);

// Inverse by extended Euclid; requires a != 0 mod p.
uint64_t inv_mod(uint64_t a, uint64_t p);

}  // namespace sigmalab
