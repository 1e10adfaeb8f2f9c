#include "polyring.hpp"

#include <algorithm>

#include "bindet.hpp"
#include "exactmath.hpp"

namespace sigmalab {

SparsePoly::SparsePoly(Modulus m, uint32_t nvars) : mod_(m), nvars_(nvars) {}

SparsePoly SparsePoly::constant(Modulus m, uint32_t nvars, uint64_t c) {
  SparsePoly q(m, nvars);
  q.add_term(ExpVec(nvars, 0), c);
  return q;
}

SparsePoly SparsePoly::variable(Modulus m, uint32_t nvars, uint32_t index) {
  if (index >= nvars) fail(ErrorCode::domain, "variable index out of range");
  SparsePoly q(m, nvars);
  ExpVec e(nvars, 0);
  e[index] = 1;
  q.add_term(e, 1);
  return q;
}

SparsePoly SparsePoly::sum_of_variables(Modulus m, uint32_t nvars) {
  SparsePoly q(m, nvars);
  for (uint32_t j = 0; j < nvars; ++j) {
    ExpVec e(nvars, 0);
    e[j] = 1;
    q.add_term(e, 1);
  }
  return q;
}

uint64_t SparsePoly::total_degree() const {
  uint64_t deg = 0;
  for (auto& [e, c] : terms_) {
    uint64_t d = 0;
    for (uint32_t x : e) d += x;
    deg = std::max(deg, d);
  }
  return deg;
}

uint64_t SparsePoly::coefficient(const ExpVec& exps) const {
  if (exps.size() != nvars_) fail(ErrorCode::mismatch, "exponent vector arity mismatch");
  auto it = terms_.find(exps);
  return it == terms_.end() ? 0 : it->second;
}

uint64_t SparsePoly::eval(const std::vector<uint64_t>& point) const {
  if (point.size() != nvars_) fail(ErrorCode::mismatch, "evaluation point arity mismatch");
  const uint64_t p = mod_.p;
  uint64_t acc = 0;
  for (auto& [e, c] : terms_) {
    uint64_t t = c;
    for (uint32_t j = 0; j < nvars_; ++j)
      if (e[j]) t = mul_mod(t, pow_mod(point[j] % p, e[j], p), p);
    acc = add_mod(acc, t, p);
  }
  return acc;
}

void SparsePoly::add_term(const ExpVec& exps, uint64_t c) {
  if (exps.size() != nvars_) fail(ErrorCode::mismatch, "exponent vector arity mismatch");
  c %= mod_.p;
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second = add_mod(it->second, c, mod_.p);
    if (it->second == 0) terms_.erase(it);
  }
}

SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) {
  if (!(a.mod_ == b.mod_)) fail(ErrorCode::mismatch, "polynomial moduli differ");
  if (a.nvars_ != b.nvars_) fail(ErrorCode::mismatch, "polynomial arities differ");
  SparsePoly out = a;
  for (auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  if (!(a.mod_ == b.mod_)) fail(ErrorCode::mismatch, "polynomial moduli differ");
  if (a.nvars_ != b.nvars_) fail(ErrorCode::mismatch, "polynomial arities differ");
  SparsePoly out(a.mod_, a.nvars_);
  ExpVec e(a.nvars_);
  for (auto& [ea, ca] : a.terms_)
    for (auto& [eb, cb] : b.terms_) {
      for (uint32_t j = 0; j < a.nvars_; ++j) e[j] = ea[j] + eb[j];
      out.add_term(e, mul_mod(ca, cb, a.mod_.p));
    }
  return out;
}

SparsePoly poly_pow(const SparsePoly& base, uint64_t e) {
  SparsePoly acc = SparsePoly::constant(base.modulus(), base.nvars(), 1);
  for (uint64_t k = 0; k < e; ++k) acc = acc * base;
  return acc;
}

SparsePoly vandermonde_squares(uint32_t d, Modulus m) {
  SparsePoly acc = SparsePoly::constant(m, d, 1);
  for (uint32_t j = 1; j < d; ++j)
    for (uint32_t i = 0; i < j; ++i) {
      SparsePoly f(m, d);
      ExpVec e(d, 0);
      e[j] = 2;
      f.add_term(e, 1);
      e[j] = 0;
      e[i] = 2;
      f.add_term(e, m.p - 1);
      acc = acc * f;
    }
  return acc;
}

SparsePoly vandermonde(uint32_t d, Modulus m) {
  SparsePoly acc = SparsePoly::constant(m, d, 1);
  for (uint32_t j = 1; j < d; ++j)
    for (uint32_t i = 0; i < j; ++i) {
      SparsePoly f(m, d);
      ExpVec e(d, 0);
      e[j] = 1;
      f.add_term(e, 1);
      e[j] = 0;
      e[i] = 1;
      f.add_term(e, m.p - 1);
      acc = acc * f;
    }
  return acc;
}

SparsePoly expanded_power_vandermonde(uint32_t d, uint32_t t, Modulus m) {
  if (d < 1) fail(ErrorCode::domain, "expansion requires d >= 1");
  if (t >= m.p)
    fail(ErrorCode::domain, "expansion requires t < p (t! must be a unit)");
  return poly_pow(SparsePoly::sum_of_variables(m, d), t) * vandermonde_squares(d, m);
}

namespace {

uint64_t mod_of(const BigInt& v, uint64_t p) {
  BigInt r = v % static_cast<unsigned long>(p);
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

}  // namespace

uint64_t power_vandermonde_coefficient(uint32_t d, uint32_t t,
                                       const std::vector<uint64_t>& b, Modulus m) {
  if (b.size() != d) fail(ErrorCode::mismatch, "exponent tuple arity mismatch");
  if (t >= m.p) fail(ErrorCode::domain, "coefficient formula requires t < p");
  uint64_t total = 0;
  for (uint64_t bi : b) {
    if (bi >= m.p)
      fail(ErrorCode::domain, "coefficient formula requires every exponent < p");
    total += bi;
  }
  if (total != t + static_cast<uint64_t>(d) * (d - 1))
    fail(ErrorCode::domain, "exponent tuple does not have total degree t + d(d-1)");

  // t! prod (2i)! / prod b_i! * det[C(b_i, 2j)], evaluated exactly in Q and
  // reduced mod p. The quotient is p-integral under the constraints above.
  BigRat scale(factorial(t));
  for (uint32_t i = 0; i < d; ++i) scale *= BigRat(factorial(2 * i));
  for (uint64_t bi : b) scale /= BigRat(factorial(bi));
  scale.canonicalize();

  BinDet det;
  det.top = b;
  for (uint32_t j = 0; j < d; ++j) det.bottom.push_back(2 * j);
  BigRat value = scale * BigRat(bindet_eval(det));
  value.canonicalize();

  BigInt den = value.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), m.p))
    fail(ErrorCode::internal, "coefficient formula: denominator not a unit mod p");
  uint64_t num_mod = mod_of(value.get_num(), m.p);
  uint64_t den_mod = mod_of(den, m.p);
  return mul_mod(num_mod, inv_mod(den_mod, m.p), m.p);
}

AnrVerdict anr_verdict(const std::vector<ResidueSet>& sets, const SparsePoly& r) {
  const uint32_t d = static_cast<uint32_t>(sets.size());
  if (d == 0) fail(ErrorCode::domain, "need at least one set");
  if (r.nvars() != d) fail(ErrorCode::mismatch, "polynomial arity != number of sets");
  Modulus m = r.modulus();
  for (const auto& a : sets) {
    if (!(a.modulus() == m)) fail(ErrorCode::mismatch, "set modulus != polynomial modulus");
    if (a.empty()) fail(ErrorCode::domain, "sets must be nonempty");
  }
  if (r.is_zero()) fail(ErrorCode::domain, "polynomial must be nonzero");

  uint64_t size_sum = 0;
  for (const auto& a : sets) size_sum += a.cardinality() - 1;
  uint64_t deg = r.total_degree();
  if (size_sum < deg)
    fail(ErrorCode::domain, "degenerate instance: sum(|A_i|-1) < deg R");

  AnrVerdict v;
  v.m = size_sum - deg;
  SparsePoly certificate = poly_pow(SparsePoly::sum_of_variables(m, d), v.m) * r;
  ExpVec target(d);
  for (uint32_t j = 0; j < d; ++j)
    target[j] = static_cast<uint32_t>(sets[j].cardinality() - 1);
  v.coefficient = certificate.coefficient(target);
  v.guaranteed_min = v.coefficient ? v.m + 1 : 0;

  // Brute-force witness: iterate the product of the sets, keep sums of the
  // tuples where r does not vanish.
  std::vector<std::vector<uint64_t>> elems;
  for (const auto& a : sets) elems.push_back(a.elements());
  std::vector<size_t> odo(d, 0);
  std::vector<uint64_t> point(d);
  ResidueSet sums(m);
  for (;;) {
    uint64_t s = 0;
    for (uint32_t j = 0; j < d; ++j) {
      point[j] = elems[j][odo[j]];
      s = add_mod(s, point[j], m.p);
    }
    if (r.eval(point) != 0) sums.insert(s);
    uint32_t j = 0;
    while (j < d && ++odo[j] == elems[j].size()) odo[j++] = 0;
    if (j == d) break;
  }
  v.witness_cardinality = sums.cardinality();
  v.holds = v.coefficient == 0 || v.witness_cardinality >= v.m + 1;
  return v;
}

MonicPoly::MonicPoly(Modulus m, std::vector<uint64_t> lower_coeffs)
    : mod_(m), coeffs_(std::move(lower_coeffs)) {
  for (auto& c : coeffs_) c %= mod_.p;
}

uint64_t MonicPoly::eval(uint64_t x) const {
  const uint64_t p = mod_.p;
  x %= p;
  uint64_t acc = 1;  // leading monic term
  for (size_t j = coeffs_.size(); j-- > 0;) acc = add_mod(mul_mod(acc, x, p), coeffs_[j], p);
  return acc;
}

LiuSunVerdict liu_sun_verdict(const std::vector<ResidueSet>& sets,
                              const std::vector<MonicPoly>& polys) {
  const size_t n = sets.size();
  if (n == 0) fail(ErrorCode::domain, "need at least one set");
  if (polys.size() != n) fail(ErrorCode::mismatch, "need one polynomial per set");
  Modulus m = sets[0].modulus();
  for (const auto& a : sets)
    if (!(a.modulus() == m)) fail(ErrorCode::mismatch, "sets live over different moduli");
  for (const auto& q : polys)
    if (!(q.modulus() == m)) fail(ErrorCode::mismatch, "polynomial modulus != set modulus");

  LiuSunVerdict v;
  const uint64_t deg = polys[0].degree();
  auto reject = [&v](const std::string& why) {
    if (v.applicable) {
      v.applicable = false;
      v.reason = why;
    }
  };
  if (deg < 1) reject("polynomials must have degree >= 1");
  for (const auto& q : polys)
    if (q.degree() != deg) reject("polynomials must share one degree");
  for (size_t i = 0; i + 1 < n; ++i) {
    uint64_t lo = sets[i].cardinality(), hi = sets[i + 1].cardinality();
    if (hi < lo || hi > lo + 1) reject("set sizes must be nondecreasing in steps of 0 or 1");
  }
  for (const auto& a : sets)
    if (a.empty()) reject("sets must be nonempty");

  const uint64_t k = sets[n - 1].cardinality();
  if (!(k > deg * (n - 1))) reject("requires |A_n| > m(n-1)");
  v.K = static_cast<int64_t>((k - 1) * n) -
        static_cast<int64_t>((deg + 1) * (n * (n - 1) / 2));
  if (v.applicable && static_cast<int64_t>(m.p) <= v.K) reject("requires p > K");

  // The restricted sum set is computed regardless, so a hypothesis-violating
  // instance can still be replayed and inspected.
  std::vector<std::vector<uint64_t>> elems;
  for (const auto& a : sets) elems.push_back(a.elements());
  std::vector<size_t> odo(n, 0);
  std::vector<uint64_t> img(n);
  ResidueSet sums(m);
  for (;;) {
    bool ok = true;
    uint64_t s = 0;
    for (size_t j = 0; j < n; ++j) {
      uint64_t a = elems[j][odo[j]];
      img[j] = polys[j].eval(a);
      s = add_mod(s, a, m.p);
    }
    for (size_t i = 0; ok && i < n; ++i)
      for (size_t j = i + 1; ok && j < n; ++j)
        if (img[i] == img[j]) ok = false;
    if (ok) sums.insert(s);
    size_t j = 0;
    while (j < n && ++odo[j] == elems[j].size()) odo[j++] = 0;
    if (j == n) break;
  }
  v.cardinality = sums.cardinality();
  v.holds = static_cast<int64_t>(v.cardinality) >= v.K + 1;
  return v;
}

}  // namespace sigmalab
