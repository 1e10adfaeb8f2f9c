#pragma once

#include <cstdint>
#include <vector>

#include "exactmath.hpp"

namespace sigmalab {

// A binomial determinant: det of the d x d matrix with entries C(top[i],
// bottom[j]). Tuples are arbitrary naturals and the matrix is evaluated
// literally; the identities in verify.cpp need strictly increasing tuples,
// but evaluation itself does not.
struct BinDet {
  std::vector<uint64_t> top, bottom;
};

BigInt bindet_eval(const BinDet& bd);

// Index (d, i) into the determinant family behind the subsum bounds:
//   top row    d-1, d, ..., 2d-1 with the entry d-1+i removed (d values)
//   bottom row 0, 2, ..., 2(d-1)
// Valid for d >= 1 and 0 <= i <= d.
struct FamilyIndex {
  uint32_t d = 1;
  uint32_t i = 0;
};

BinDet family_tuples(FamilyIndex idx);

// Evaluation of the family determinant via the product formula
//   2^(d(d-1)/2 - i) * C(d,i) * (d+i) / d.
// The division by d and, for (1,1) and (2,2), by a positive power of two are
// exact; the result is always a non-negative integer.
BigInt family_closed_form(FamilyIndex idx);

// The family value with the power of two stripped: C(d,i) + C(d-1,i-1).
BigInt family_normalized(FamilyIndex idx);

// Right-hand side of the two-term recurrence
//   2^(d-1) (d-1)/(d-2+i) * F(d-1,i-1)  +  2^(d-1) (d-1)/(d-1+i) * F(d-1,i)
// for d >= 2 and 1 <= i <= d, computed in exact rationals. F(d-1,d) has no
// matrix realization and is taken as 0, consistent with C(d-1,d) = 0; the
// identity holds on the whole range under that convention.
BigRat family_recurrence_rhs(FamilyIndex idx);

}  // namespace sigmalab
