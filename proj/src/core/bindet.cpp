#include "bindet.hpp"

#include <string>

#include "errors.hpp"

namespace sigmalab {

BigInt bindet_eval(const BinDet& bd) {
  const size_t d = bd.top.size();
  if (bd.bottom.size() != d)
    fail(ErrorCode::mismatch, "bindet: top and bottom tuples differ in length");
  Matrix m(d, std::vector<BigInt>(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      m[i][j] = binomial(bd.top[i], static_cast<int64_t>(bd.bottom[j]));
  return big_det(std::move(m));
}

namespace {

void check_index(FamilyIndex idx) {
  if (idx.d < 1)
    fail(ErrorCode::domain, "family index requires d >= 1");
  if (idx.i > idx.d)
    fail(ErrorCode::domain, "family index requires 0 <= i <= d, got i = " +
                                std::to_string(idx.i) + ", d = " + std::to_string(idx.d));
}

}  // namespace

BinDet family_tuples(FamilyIndex idx) {
  check_index(idx);
  BinDet bd;
  const uint64_t d = idx.d;
  for (uint64_t a = d - 1; a <= 2 * d - 1; ++a)
    if (a != d - 1 + idx.i) bd.top.push_back(a);
  for (uint64_t j = 0; j < d; ++j) bd.bottom.push_back(2 * j);
  return bd;
}

BigInt family_closed_form(FamilyIndex idx) {
  check_index(idx);
  const uint64_t d = idx.d;
  const int64_t e = static_cast<int64_t>(d) * (d - 1) / 2 - idx.i;
  BigInt base = binomial(d, idx.i) * (d + idx.i);
  // base = C(d,i) (d+i) gets scaled by 2^e / d. For (1,1) and (2,2) the
  // exponent is -1; the quotient is still an integer in every valid case.
  BigInt num = e >= 0 ? BigInt(base * pow2(static_cast<uint64_t>(e))) : base;
  BigInt den = e >= 0 ? BigInt(d) : BigInt(d * pow2(static_cast<uint64_t>(-e)));
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
    fail(ErrorCode::internal, "family closed form: non-exact division");
  BigInt r;
  mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

BigInt family_normalized(FamilyIndex idx) {
  check_index(idx);
  return binomial(idx.d, idx.i) +
         binomial(idx.d - 1, static_cast<int64_t>(idx.i) - 1);
}

BigRat family_recurrence_rhs(FamilyIndex idx) {
  check_index(idx);
  if (idx.d < 2 || idx.i < 1)
    fail(ErrorCode::domain, "recurrence requires d >= 2 and 1 <= i <= d");
  const uint64_t d = idx.d, i = idx.i;
  const BigInt scale = pow2(d - 1) * (d - 1);
  BigRat lhs_term(scale, BigInt(d - 2 + i));
  lhs_term.canonicalize();
  BigRat rhs_term(scale, BigInt(d - 1 + i));
  rhs_term.canonicalize();
  BigInt f_prev_lo = bindet_eval(family_tuples({idx.d - 1, idx.i - 1}));
  BigInt f_prev_hi = i <= d - 1 ? bindet_eval(family_tuples({idx.d - 1, idx.i})) : BigInt(0);
  return lhs_term * BigRat(f_prev_lo) + rhs_term * BigRat(f_prev_hi);
}

}  // namespace sigmalab
