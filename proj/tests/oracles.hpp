#pragma once

// Independent reference implementations for the tests. Everything here
// computes the slow, obvious way: Pascal's triangle, cofactor expansion,
// power-set enumeration. The library must agree with these on every
// instance the suite can afford to enumerate; none of this code shares an
// algorithm with the code under test.

#include <gmpxx.h>

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

// C(n, k) straight off Pascal's triangle.
inline mpz_class binom(uint64_t n, int64_t k) {
  if (k < 0 || static_cast<uint64_t>(k) > n) return 0;
  std::vector<mpz_class> row{1};
  for (uint64_t r = 1; r <= n; ++r) {
    row.push_back(0);
    for (uint64_t j = r; j > 0; --j) row[j] += row[j - 1];
  }
  return row[static_cast<size_t>(k)];
}

// Determinant by cofactor expansion along the first row.
inline mpz_class det_cofactor(const std::vector<std::vector<mpz_class>>& m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  mpz_class acc = 0;
  for (size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    std::vector<std::vector<mpz_class>> minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<mpz_class> row;
      for (size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      minor.push_back(std::move(row));
    }
    mpz_class term = m[0][c] * det_cofactor(minor);
    if (c % 2)
      acc -= term;
    else
      acc += term;
  }
  return acc;
}

// Subset sums of a set mod p, over 2^k subsets.
inline std::set<uint64_t> sigma_naive(uint64_t p, const std::vector<uint64_t>& elems,
                                      bool include_empty) {
  std::set<uint64_t> out;
  const size_t k = elems.size();
  for (uint64_t mask = 0; mask < (1ull << k); ++mask) {
    if (mask == 0 && !include_empty) continue;
    uint64_t s = 0;
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) s = (s + elems[i]) % p;
    out.insert(s);
  }
  return out;
}

inline bool zero_sum_free_naive(uint64_t p, const std::vector<uint64_t>& elems) {
  return sigma_naive(p, elems, false).count(0) == 0;
}

inline std::set<uint64_t> sumset_naive(uint64_t p, const std::vector<uint64_t>& a,
                                       const std::vector<uint64_t>& b) {
  std::set<uint64_t> out;
  for (uint64_t x : a)
    for (uint64_t y : b) out.insert((x + y) % p);
  return out;
}

// Sums of exactly h pairwise distinct elements: masks with popcount h.
inline std::set<uint64_t> hfold_naive(uint64_t p, const std::vector<uint64_t>& elems,
                                      uint64_t h) {
  std::set<uint64_t> out;
  const size_t k = elems.size();
  for (uint64_t mask = 0; mask < (1ull << k); ++mask) {
    if (static_cast<uint64_t>(__builtin_popcountll(mask)) != h) continue;
    uint64_t s = 0;
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) s = (s + elems[i]) % p;
    out.insert(s);
  }
  return out;
}

// Submultiset sums: odometer over 0..count copies of each value.
inline std::set<uint64_t> msigma_naive(uint64_t p,
                                       const std::vector<std::pair<uint64_t, uint64_t>>& items,
                                       bool include_empty) {
  std::set<uint64_t> out;
  const size_t n = items.size();
  std::vector<uint64_t> take(n, 0);
  for (;;) {
    uint64_t total = 0, s = 0;
    for (size_t i = 0; i < n; ++i) {
      total += take[i];
      s = (s + take[i] % p * (items[i].first % p)) % p;
    }
    if (total > 0 || include_empty) out.insert(s);
    size_t i = 0;
    while (i < n && ++take[i] > items[i].second) take[i++] = 0;
    if (i == n) break;
  }
  return out;
}

inline std::vector<uint64_t> to_vec(const std::set<uint64_t>& s) {
  return std::vector<uint64_t>(s.begin(), s.end());
}

}  // namespace oracle
