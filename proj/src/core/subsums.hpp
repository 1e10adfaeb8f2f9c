#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <vector>

#include "modulus.hpp"

namespace sigmalab {

// Subset-sum machinery over Z/pZ.
//
// A subset of Z/pZ is a length-p bit vector (bit r set iff r is in the set).
// Translation r + A is a cyclic rotation of the bit vector, so the subsum set
// of A = {a_1, ..., a_k} is built in k vectorized steps S <- S | rot(S, a_i)
// starting from {0}. That one kernel powers the sumset, the subsum sets, the
// restricted sumset powers, and all exhaustive sweeps.

class ResidueSet {
public:
  explicit ResidueSet(Modulus m);
  ResidueSet(Modulus m, std::initializer_list<uint64_t> elems);
  static ResidueSet of(Modulus m, const std::vector<uint64_t>& elems);
  static ResidueSet full(Modulus m);

  Modulus modulus() const { return mod_; }
  void insert(uint64_t r);
  void erase(uint64_t r);
  bool contains(uint64_t r) const;
  uint64_t cardinality() const;
  bool empty() const { return cardinality() == 0; }
  bool is_full() const { return cardinality() == mod_.p; }
  std::vector<uint64_t> elements() const;

  const std::vector<uint64_t>& words() const { return w_; }
  std::vector<uint64_t>& words() { return w_; }

  friend bool operator==(const ResidueSet& a, const ResidueSet& b) {
    return a.mod_ == b.mod_ && a.w_ == b.w_;
  }

private:
  Modulus mod_;
  std::vector<uint64_t> w_;
};

ResidueSet negated(const ResidueSet& a);                 // {-x : x in A}
ResidueSet translated(const ResidueSet& a, uint64_t r);  // r + A
ResidueSet sumset(const ResidueSet& a, const ResidueSet& b);

ResidueSet sigma(const ResidueSet& a);       // all subset sums, empty one included
ResidueSet sigma_star(const ResidueSet& a);  // sums over nonempty subsets only

// Sums of exactly h pairwise distinct elements of a. h = 0 gives {0};
// h > |a| gives the empty set (no such selection exists).
ResidueSet restricted_power(const ResidueSet& a, uint64_t h);

bool is_zero_sum_free(const ResidueSet& a);

// Finite sequence over Z/pZ \ {0}, stored as residue -> multiplicity.
class Multiset {
public:
  explicit Multiset(Modulus m) : mod_(m) {}
  static Multiset of(Modulus m, const std::vector<std::pair<uint64_t, uint64_t>>& items);

  Modulus modulus() const { return mod_; }
  void add(uint64_t r, uint64_t count = 1);  // rejects residue 0
  uint64_t multiplicity(uint64_t r) const;
  uint64_t length() const;  // total number of terms, multiplicities included
  ResidueSet support() const;
  const std::map<uint64_t, uint64_t>& entries() const { return items_; }

  // Multiplicities of the pairs {x, -x}: for each unordered pair with at
  // least one occurrence, the count mult(x) + mult(-x), sorted descending.
  std::vector<uint64_t> common_multiplicities() const;

private:
  Modulus mod_;
  std::map<uint64_t, uint64_t> items_;
};

ResidueSet sigma(const Multiset& s);
ResidueSet sigma_star(const Multiset& s);
bool is_zero_sum_free(const Multiset& s);

// A set with A and -A disjoint (in particular 0 is excluded). Construction
// validates; the underlying set is then usable wherever ResidueSet is.
class AsymmetricSet {
public:
  explicit AsymmetricSet(ResidueSet a);
  const ResidueSet& set() const { return set_; }

private:
  ResidueSet set_;
};

// Deterministic work slice for the exhaustive searches: this call handles
// task `index` out of `count` equal-by-construction strata. Results from all
// slices merge associatively, so a driver can fan slices across threads.
struct Partition {
  uint64_t index = 0;
  uint64_t count = 1;
};

struct SearchOptions {
  uint64_t budget = 0;              // 0 = resolve the per-search default
  bool symmetry_reduction = false;  // scan orbit representatives only
  Partition part;
};

// Builtin instance budget for a single exhaustive search, 3^15. The
// environment variable SIGMA_LAB_BUDGET, when set to a positive integer,
// replaces it. Explicit budgets in options win over both.
uint64_t default_instance_budget();

// The SIGMA_LAB_BUDGET value, or 0 when unset or unparsable. Lets callers
// with operation-specific builtin defaults apply the same override order.
uint64_t instance_budget_override();

// Instance count 3^((p-1)/2) of a full pair sweep, saturating at UINT64_MAX.
uint64_t pair_sweep_estimate(Modulus m);

struct MaxZeroSumFreeResult {
  uint64_t k = 0;               // largest zero-sum-free cardinality found
  std::vector<uint64_t> witness;
  uint64_t stratum = 0;         // smallest element of the witness
  uint64_t nodes = 0;           // search tree nodes visited in this slice
  bool found = false;           // false only when the slice is empty
};

// Exhaustive search for the largest zero-sum-free subset of Z/pZ. The slice
// covers subsets whose smallest element falls in the stratum part.index.
MaxZeroSumFreeResult max_zero_sum_free_size(Modulus m, const SearchOptions& opt = {});

struct AcrScan {
  bool any_nonfull = false;
  uint64_t max_nonfull_card = 0;  // largest |A|, A asymmetric, sigma(A) != Z/pZ
  uint64_t leaves = 0;            // asymmetric sets decided by this slice
  std::vector<uint64_t> witness;  // a set attaining max_nonfull_card
  // Position of the witness leaf in the canonical unsliced scan order. Ties
  // on cardinality merge toward the smallest ordinal, so the reported
  // witness is the same however the work was sliced.
  uint64_t witness_ordinal = UINT64_MAX;
};

// Slicing-invariant preference order on slice results.
inline bool acr_improves(const AcrScan& a, const AcrScan& b) {
  if (!a.any_nonfull) return false;
  if (!b.any_nonfull) return true;
  if (a.max_nonfull_card != b.max_nonfull_card)
    return a.max_nonfull_card > b.max_nonfull_card;
  return a.witness_ordinal < b.witness_ordinal;
}

// One slice of the asymmetric-set scan behind acr(). Slices stratify the
// pair choices by base-3 prefix.
AcrScan acr_scan(Modulus m, const SearchOptions& opt = {});

// Asymmetric critical number: least l such that every asymmetric A with
// |A| >= l has sigma(A) = Z/pZ. Defined for p >= 7; exhaustive computation.
uint64_t acr(Modulus m, const SearchOptions& opt = {});

// Single-word kernels for the exhaustive sweeps, which all run at p <= 61
// where a length-p bit vector fits one machine word.
namespace smallp {

inline uint64_t mask(uint64_t p) { return p >= 64 ? ~0ull : (1ull << p) - 1; }

inline uint64_t rot(uint64_t bits, uint64_t a, uint64_t p) {
  return a == 0 ? bits : (((bits << a) | (bits >> (p - a))) & mask(p));
}

// Incremental (Sigma, Sigma*) state along a stack of appended elements.
struct SigmaPair {
  uint64_t sig = 1;  // Sigma of the stack; starts at {0}
  uint64_t ne = 0;   // Sigma* of the stack
};

inline SigmaPair extend(SigmaPair s, uint64_t a, uint64_t p) {
  uint64_t r = rot(s.sig, a, p);
  return {s.sig | r, s.ne | r};
}

}  // namespace smallp

}  // namespace sigmalab
