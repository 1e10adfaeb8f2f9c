#include "modulus.hpp"

#include <string>

namespace sigmalab {

uint64_t pow_mod(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

uint64_t inv_mod(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) fail(ErrorCode::domain, "inverse of 0 mod " + std::to_string(p));
  // Extended Euclid on (a, p); p prime so gcd is 1.
  int64_t t = 0, newt = 1;
  uint64_t r = p, newr = a;
  while (newr != 0) {
    uint64_t q = r / newr;
    int64_t tmpt = t - static_cast<int64_t>(q) * newt;
    t = newt;
    newt = tmpt;
    uint64_t tmpr = r - q * newr;
    r = newr;
    newr = tmpr;
  }
  if (r != 1) fail(ErrorCode::internal, "inv_mod: modulus not prime");
  return t < 0 ? static_cast<uint64_t>(t + static_cast<int64_t>(p)) : static_cast<uint64_t>(t);
}

namespace {

// Deterministic Miller-Rabin; this base set is exact for all 64-bit inputs.
constexpr uint64_t kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool mr_witness(uint64_t a, uint64_t d, uint32_t s, uint64_t n) {
  uint64_t x = pow_mod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (uint32_t i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;  // a witnesses compositeness
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  uint64_t d = n - 1;
  uint32_t s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : kMrBases)
    if (mr_witness(a, d, s, n)) return false;
  return true;
}

std::vector<uint64_t> primes_up_to(uint64_t n) {
  std::vector<uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> sieve(n + 1, true);
  for (uint64_t i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (uint64_t j = i * i; j <= n; j += i) sieve[j] = false;
  }
  return out;
}

Modulus Modulus::checked(uint64_t p) {
  if (!is_prime_u64(p))
    fail(ErrorCode::not_prime, "modulus " + std::to_string(p) + " is not prime");
  if (p > (1ull << 62))
    fail(ErrorCode::domain, "modulus too large");
  return Modulus{p};
}

Modulus Modulus::checked_odd(uint64_t p) {
  Modulus m = checked(p);
  if (p == 2) fail(ErrorCode::domain, "modulus must be an odd prime");
  return m;
}

}  // namespace sigmalab
