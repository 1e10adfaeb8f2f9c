#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modulus.hpp"
#include "subsums.hpp"

namespace sigmalab {

// Exponent vector of a monomial, one entry per variable.
using ExpVec = std::vector<uint32_t>;

// Sparse multivariate polynomial over Z/pZ. Terms with coefficient 0 are
// never stored; the map keeps a deterministic term order for printing and
// for reproducible reports.
class SparsePoly {
public:
  SparsePoly(Modulus m, uint32_t nvars);  // the zero polynomial
  static SparsePoly constant(Modulus m, uint32_t nvars, uint64_t c);
  static SparsePoly variable(Modulus m, uint32_t nvars, uint32_t index);
  static SparsePoly sum_of_variables(Modulus m, uint32_t nvars);

  Modulus modulus() const { return mod_; }
  uint32_t nvars() const { return nvars_; }
  size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  uint64_t total_degree() const;  // 0 for the zero polynomial

  // Coefficient of the monomial with these exponents; 0 when absent.
  uint64_t coefficient(const ExpVec& exps) const;
  uint64_t eval(const std::vector<uint64_t>& point) const;
  const std::map<ExpVec, uint64_t>& terms() const { return terms_; }

  void add_term(const ExpVec& exps, uint64_t c);  // accumulates mod p

  friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b);
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);

private:
  Modulus mod_;
  uint32_t nvars_;
  std::map<ExpVec, uint64_t> terms_;
};

SparsePoly poly_pow(const SparsePoly& base, uint64_t e);

// prod_{0 <= i < j < d} (X_j^2 - X_i^2); the constant 1 for d <= 1.
SparsePoly vandermonde_squares(uint32_t d, Modulus m);

// prod_{0 <= i < j < d} (X_j - X_i); the constant 1 for d <= 1.
SparsePoly vandermonde(uint32_t d, Modulus m);

// (X_0 + ... + X_{d-1})^t * vandermonde_squares(d), fully expanded mod p.
// Requires t < p. Homogeneous of degree t + d(d-1).
SparsePoly expanded_power_vandermonde(uint32_t d, uint32_t t, Modulus m);

// Predicted coefficient of prod X_i^{b_i} in expanded_power_vandermonde:
//   t! * prod_i (2i)! / prod_i b_i!  *  det[ C(b_i, 2j) ]  (mod p)
// Requires t < p, every b_i < p, and sum b_i = t + d(d-1); for exponent
// vectors meeting those constraints the prediction equals the coefficient.
uint64_t power_vandermonde_coefficient(uint32_t d, uint32_t t,
                                       const std::vector<uint64_t>& b, Modulus m);

// Polynomial-method verdict: with m = sum(|A_i| - 1) - deg R, a nonzero
// coefficient of prod X_i^{|A_i|-1} in (sum X_i)^m * R certifies that
// {a_0 + ... + a_{d-1} : a_i in A_i, R(a) != 0} has at least m+1 elements.
struct AnrVerdict {
  uint64_t m = 0;
  uint64_t coefficient = 0;          // of the target monomial, mod p
  uint64_t guaranteed_min = 0;       // m + 1 when the coefficient is nonzero
  uint64_t witness_cardinality = 0;  // brute-force count of the sum set
  bool holds = false;                // coefficient == 0, or witness >= m+1
};

AnrVerdict anr_verdict(const std::vector<ResidueSet>& sets, const SparsePoly& r);

// Monic univariate polynomial x^deg + sum coeffs[j] x^j over Z/pZ.
class MonicPoly {
public:
  MonicPoly(Modulus m, std::vector<uint64_t> lower_coeffs);
  Modulus modulus() const { return mod_; }
  uint64_t degree() const { return coeffs_.size(); }
  const std::vector<uint64_t>& lower_coeffs() const { return coeffs_; }
  uint64_t eval(uint64_t x) const;

private:
  Modulus mod_;
  std::vector<uint64_t> coeffs_;
};

// Distinct-images sumset bound: with n sets A_1 <= ... <= A_n (sizes
// nondecreasing in steps of 0 or 1), k = |A_n| > m(n-1), monic degree-m
// polynomials P_i, and K = (k-1)n - (m+1) C(n,2), a prime p > K forces
//   |{a_1 + ... + a_n : a_i in A_i, P_i(a_i) != P_j(a_j) for i != j}| >= K+1.
// Hypothesis failures yield applicable = false with a reason; that outcome
// is distinct from a counterexample.
struct LiuSunVerdict {
  bool applicable = true;
  std::string reason;        // first violated hypothesis, when any
  int64_t K = 0;             // nonnegative whenever applicable
  uint64_t cardinality = 0;  // brute-force count of the restricted sum set
  bool holds = false;        // cardinality >= K+1
};

LiuSunVerdict liu_sun_verdict(const std::vector<ResidueSet>& sets,
                              const std::vector<MonicPoly>& polys);

}  // namespace sigmalab
