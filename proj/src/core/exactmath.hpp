#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace sigmalab {

// Exact arithmetic building blocks. Everything downstream (determinants,
// coefficient formulas) computes in Z or Q and never rounds.
using BigInt = mpz_class;
using BigNat = mpz_class;  // non-negative by construction at the call sites
using BigRat = mpq_class;

BigNat factorial(uint64_t n);

// Results up to this n are memoized; larger inputs are computed from the
// memo tail without being cached. Test hook more than a tuning knob.
void set_factorial_memo_limit(uint64_t n);
uint64_t factorial_memo_limit();

// C(n, k), with the convention C(n, k) = 0 for k < 0 or k > n.
BigNat binomial(uint64_t n, int64_t k);

using Matrix = std::vector<std::vector<BigInt>>;

// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
// Takes the matrix by value; elimination happens in place on the copy.
BigInt big_det(Matrix m);

BigInt pow2(uint64_t e);

}  // namespace sigmalab
