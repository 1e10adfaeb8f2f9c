#include "exactmath.hpp"

#include <mutex>
#include <string>

#include "errors.hpp"

namespace sigmalab {

namespace {

std::mutex g_memo_mutex;
std::vector<BigNat> g_memo = {BigNat(1)};  // g_memo[n] = n!
uint64_t g_memo_limit = 512;

}  // namespace

void set_factorial_memo_limit(uint64_t n) {
  std::lock_guard lock(g_memo_mutex);
  g_memo_limit = n;
  if (g_memo.size() > n + 1) g_memo.resize(n + 1);
}

uint64_t factorial_memo_limit() {
  std::lock_guard lock(g_memo_mutex);
  return g_memo_limit;
}

BigNat factorial(uint64_t n) {
  std::lock_guard lock(g_memo_mutex);
  if (n < g_memo.size()) return g_memo[n];
  BigNat acc = g_memo.back();
  for (uint64_t k = g_memo.size(); k <= n; ++k) {
    acc *= k;
    if (k <= g_memo_limit) g_memo.push_back(acc);
  }
  return acc;
}

BigNat binomial(uint64_t n, int64_t k) {
  if (k < 0 || static_cast<uint64_t>(k) > n) return 0;
  BigNat r;
  mpz_bin_uiui(r.get_mpz_t(), n, static_cast<uint64_t>(k));
  return r;
}

BigInt pow2(uint64_t e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

BigInt big_det(Matrix m) {
  const size_t n = m.size();
  if (n == 0) return 1;  // empty determinant
  for (const auto& row : m)
    if (row.size() != n) fail(ErrorCode::mismatch, "big_det: matrix not square");

  // Bareiss: after step k every entry is an exact k x k minor, so the
  // division by the previous pivot is exact and intermediate growth stays
  // polynomial. A zero pivot forces a row swap (sign flip) or a zero det.
  BigInt sign = 1;
  BigInt prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        BigInt t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace sigmalab
