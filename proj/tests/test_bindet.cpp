#include <doctest.h>

#include "core/bindet.hpp"
#include "core/errors.hpp"
#include "core/modulus.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

using namespace sigmalab;

namespace {

mpz_class oracle_bindet(const std::vector<uint64_t>& top,
                        const std::vector<uint64_t>& bottom) {
  std::vector<std::vector<mpz_class>> m;
  for (uint64_t a : top) {
    std::vector<mpz_class> row;
    for (uint64_t b : bottom) row.push_back(oracle::binom(a, static_cast<int64_t>(b)));
    m.push_back(std::move(row));
  }
  return oracle::det_cofactor(m);
}

ErrorCode code_of(void (*fn)()) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;  // sentinel: nothing was thrown
}

}  // namespace

TEST_CASE("family tuples at (3, 1)") {
  BinDet t = family_tuples({3, 1});
  CHECK(t.top == std::vector<uint64_t>{2, 4, 5});
  CHECK(t.bottom == std::vector<uint64_t>{0, 2, 4});
}

TEST_CASE("frozen family values") {
  auto val = [](uint32_t d, uint32_t i) { return bindet_eval(family_tuples({d, i})); };
  CHECK(val(1, 0) == 1);
  CHECK(val(1, 1) == 1);
  CHECK(val(2, 0) == 2);
  CHECK(val(2, 1) == 3);
  CHECK(val(2, 2) == 1);
  CHECK(val(3, 0) == 8);
  CHECK(val(3, 1) == 16);
  CHECK(val(3, 2) == 10);
  CHECK(val(3, 3) == 2);
  CHECK(val(4, 1) == 160);
}

TEST_CASE("bindet_eval against the cofactor oracle on the family") {
  for (uint32_t d = 1; d <= 6; ++d)
    for (uint32_t i = 0; i <= d; ++i) {
      BinDet t = family_tuples({d, i});
      CHECK(bindet_eval(t) == oracle_bindet(t.top, t.bottom));
    }
}

TEST_CASE("bindet_eval against the cofactor oracle on random tuples") {
  Rng rng(99123);
  for (int trial = 0; trial < 250; ++trial) {
    size_t n = 1 + rng.below(4);
    std::vector<uint64_t> top, bottom;
    for (size_t k = 0; k < n; ++k) {
      top.push_back(rng.below(16));
      bottom.push_back(rng.below(16));
    }
    CHECK(bindet_eval({top, bottom}) == oracle_bindet(top, bottom));
  }
}

TEST_CASE("closed form equals the determinant") {
  for (uint32_t d = 1; d <= 8; ++d)
    for (uint32_t i = 0; i <= d; ++i)
      CHECK(family_closed_form({d, i}) == bindet_eval(family_tuples({d, i})));
}

TEST_CASE("normalized value strips exactly the power of two") {
  for (uint32_t d = 1; d <= 8; ++d)
    for (uint32_t i = 0; i <= d; ++i) {
      BigInt norm = family_normalized({d, i});
      CHECK(norm == binomial(d, i) + binomial(d - 1, static_cast<int64_t>(i) - 1));
      int64_t e = static_cast<int64_t>(d) * (d - 1) / 2 - static_cast<int64_t>(i);
      BigRat expect = e >= 0 ? BigRat(pow2(static_cast<uint64_t>(e)) * norm)
                             : BigRat(norm, pow2(static_cast<uint64_t>(-e)));
      expect.canonicalize();
      CHECK(BigRat(bindet_eval(family_tuples({d, i}))) == expect);
    }
}

TEST_CASE("normalized values satisfy the Pascal rule") {
  // D'(d, i) = D'(d-1, i-1) + D'(d-1, i); at i = d the second term has no
  // family member and contributes 0, matching C(d-1, d) = 0.
  for (uint32_t d = 2; d <= 9; ++d)
    for (uint32_t i = 1; i <= d; ++i) {
      BigInt rhs = family_normalized({d - 1, i - 1});
      if (i <= d - 1) rhs += family_normalized({d - 1, i});
      CHECK(family_normalized({d, i}) == rhs);
    }
}

TEST_CASE("two-term recurrence on the full index range") {
  for (uint32_t d = 2; d <= 10; ++d)
    for (uint32_t i = 1; i <= d; ++i)
      CHECK(BigRat(bindet_eval(family_tuples({d, i}))) == family_recurrence_rhs({d, i}));
}

TEST_CASE("no prime factor exceeds 2d") {
  for (uint32_t d = 1; d <= 9; ++d)
    for (uint32_t i = 0; i <= d; ++i) {
      BigInt rest = bindet_eval(family_tuples({d, i}));
      REQUIRE(rest > 0);
      for (uint64_t q : primes_up_to(2 * d))
        while (rest % static_cast<unsigned long>(q) == 0)
          rest /= static_cast<unsigned long>(q);
      CHECK(rest == 1);
    }
}

TEST_CASE("index validation") {
  CHECK(code_of([] { family_tuples({0, 0}); }) == ErrorCode::domain);
  CHECK(code_of([] { family_tuples({3, 4}); }) == ErrorCode::domain);
  CHECK(code_of([] { bindet_eval({{1, 2}, {0}}); }) == ErrorCode::mismatch);
}
