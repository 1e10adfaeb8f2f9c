#include "subsums.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>

namespace sigmalab {

namespace {

constexpr uint64_t kBuiltinBudget = 14348907;  // 3^15

size_t word_count(uint64_t p) { return (p + 63) / 64; }

void mask_top_word(std::vector<uint64_t>& w, uint64_t p) {
  if (uint64_t rem = p % 64) w.back() &= (1ull << rem) - 1;
}

// dst |= (src << s), bits at positions >= p discarded. s < p.
void or_shl(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src, uint64_t s) {
  const size_t W = dst.size();
  const size_t ws = s / 64;
  const unsigned bs = s % 64;
  for (size_t w = W; w-- > ws;) {
    uint64_t v = src[w - ws] << bs;
    if (bs && w - ws > 0) v |= src[w - ws - 1] >> (64 - bs);
    dst[w] |= v;
  }
}

// dst |= (src >> s). Bits above p-1 in src are zero by invariant.
void or_shr(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src, uint64_t s) {
  const size_t W = dst.size();
  const size_t ws = s / 64;
  const unsigned bs = s % 64;
  for (size_t w = 0; w + ws < W; ++w) {
    uint64_t v = src[w + ws] >> bs;
    if (bs && w + ws + 1 < W) v |= src[w + ws + 1] << (64 - bs);
    dst[w] |= v;
  }
}

// dst |= rot(src, r): the length-p bit vector of src cyclically shifted up
// by r. This is the translation kernel: bit x of src sets bit (x+r) mod p.
void or_rotated(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src,
                uint64_t r, uint64_t p) {
  r %= p;
  if (r == 0) {
    for (size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
    return;
  }
  or_shl(dst, src, r);
  or_shr(dst, src, p - r);
  mask_top_word(dst, p);
}

uint64_t popcount_words(const std::vector<uint64_t>& w) {
  uint64_t n = 0;
  for (uint64_t v : w) n += std::popcount(v);
  return n;
}

}  // namespace

ResidueSet::ResidueSet(Modulus m) : mod_(m), w_(word_count(m.p), 0) {}

ResidueSet::ResidueSet(Modulus m, std::initializer_list<uint64_t> elems) : ResidueSet(m) {
  for (uint64_t r : elems) insert(r);
}

ResidueSet ResidueSet::of(Modulus m, const std::vector<uint64_t>& elems) {
  ResidueSet s(m);
  for (uint64_t r : elems) s.insert(r);
  return s;
}

ResidueSet ResidueSet::full(Modulus m) {
  ResidueSet s(m);
  for (auto& w : s.w_) w = ~0ull;
  mask_top_word(s.w_, m.p);
  return s;
}

void ResidueSet::insert(uint64_t r) {
  if (r >= mod_.p)
    fail(ErrorCode::invalid_argument,
         "residue " + std::to_string(r) + " out of range for modulus " + std::to_string(mod_.p));
  w_[r / 64] |= 1ull << (r % 64);
}

void ResidueSet::erase(uint64_t r) {
  if (r >= mod_.p)
    fail(ErrorCode::invalid_argument, "residue out of range");
  w_[r / 64] &= ~(1ull << (r % 64));
}

bool ResidueSet::contains(uint64_t r) const {
  return r < mod_.p && (w_[r / 64] >> (r % 64)) & 1;
}

uint64_t ResidueSet::cardinality() const { return popcount_words(w_); }

std::vector<uint64_t> ResidueSet::elements() const {
  std::vector<uint64_t> out;
  for (size_t w = 0; w < w_.size(); ++w) {
    uint64_t bits = w_[w];
    while (bits) {
      out.push_back(w * 64 + std::countr_zero(bits));
      bits &= bits - 1;
    }
  }
  return out;
}

ResidueSet negated(const ResidueSet& a) {
  ResidueSet out(a.modulus());
  for (uint64_t x : a.elements()) out.insert(neg_mod(x, a.modulus().p));
  return out;
}

ResidueSet translated(const ResidueSet& a, uint64_t r) {
  ResidueSet out(a.modulus());
  or_rotated(out.words(), a.words(), r, a.modulus().p);
  return out;
}

ResidueSet sumset(const ResidueSet& a, const ResidueSet& b) {
  if (!(a.modulus() == b.modulus()))
    fail(ErrorCode::mismatch, "sumset: operands live over different moduli");
  ResidueSet out(a.modulus());
  for (uint64_t x : a.elements()) or_rotated(out.words(), b.words(), x, a.modulus().p);
  return out;
}

ResidueSet sigma(const ResidueSet& a) {
  const uint64_t p = a.modulus().p;
  ResidueSet s(a.modulus());
  s.insert(0);
  std::vector<uint64_t> snap(s.words().size());
  for (uint64_t x : a.elements()) {
    if (x == 0) continue;  // adding 0 to any subset sum changes nothing
    snap = s.words();
    or_rotated(s.words(), snap, x, p);
  }
  return s;
}

ResidueSet sigma_star(const ResidueSet& a) {
  const uint64_t p = a.modulus().p;
  ResidueSet s(a.modulus()), star(a.modulus());
  s.insert(0);
  std::vector<uint64_t> rot(s.words().size());
  for (uint64_t x : a.elements()) {
    std::fill(rot.begin(), rot.end(), 0);
    or_rotated(rot, s.words(), x, p);
    // rot holds sums of subsets that use x; they are nonempty by definition.
    for (size_t w = 0; w < rot.size(); ++w) {
      star.words()[w] |= rot[w];
      s.words()[w] |= rot[w];
    }
  }
  return star;
}

ResidueSet restricted_power(const ResidueSet& a, uint64_t h) {
  const uint64_t p = a.modulus().p;
  std::vector<uint64_t> elems = a.elements();
  // layers[j] = sums of exactly j distinct elements among those processed.
  std::vector<ResidueSet> layers(h + 1, ResidueSet(a.modulus()));
  layers[0].insert(0);
  std::vector<uint64_t> rot(layers[0].words().size());
  uint64_t processed = 0;
  for (uint64_t x : elems) {
    ++processed;
    for (uint64_t j = std::min(h, processed); j >= 1; --j) {
      std::fill(rot.begin(), rot.end(), 0);
      or_rotated(rot, layers[j - 1].words(), x, p);
      for (size_t w = 0; w < rot.size(); ++w) layers[j].words()[w] |= rot[w];
    }
  }
  return layers[h];  // stays empty when h exceeds |a|: no such selection
}

bool is_zero_sum_free(const ResidueSet& a) { return !sigma_star(a).contains(0); }

Multiset Multiset::of(Modulus m, const std::vector<std::pair<uint64_t, uint64_t>>& items) {
  Multiset s(m);
  for (auto [r, c] : items) s.add(r, c);
  return s;
}

void Multiset::add(uint64_t r, uint64_t count) {
  if (r >= mod_.p)
    fail(ErrorCode::invalid_argument, "residue out of range for modulus " + std::to_string(mod_.p));
  if (r == 0) fail(ErrorCode::domain, "multiset terms must be nonzero residues");
  if (count == 0) return;
  items_[r] += count;
}

uint64_t Multiset::multiplicity(uint64_t r) const {
  auto it = items_.find(r);
  return it == items_.end() ? 0 : it->second;
}

uint64_t Multiset::length() const {
  uint64_t n = 0;
  for (auto& [r, c] : items_) n += c;
  return n;
}

ResidueSet Multiset::support() const {
  ResidueSet s(mod_);
  for (auto& [r, c] : items_) s.insert(r);
  return s;
}

std::vector<uint64_t> Multiset::common_multiplicities() const {
  std::vector<uint64_t> out;
  const uint64_t p = mod_.p;
  for (uint64_t x = 1; 2 * x <= p; ++x) {
    uint64_t l = multiplicity(x);
    if (x != p - x) l += multiplicity(p - x);
    if (l > 0) out.push_back(l);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

ResidueSet sigma(const Multiset& s) {
  const uint64_t p = s.modulus().p;
  ResidueSet acc(s.modulus());
  acc.insert(0);
  std::vector<uint64_t> snap(acc.words().size());
  for (auto& [r, c] : s.entries())
    for (uint64_t k = 0; k < c; ++k) {
      snap = acc.words();
      or_rotated(acc.words(), snap, r, p);
    }
  return acc;
}

ResidueSet sigma_star(const Multiset& s) {
  const uint64_t p = s.modulus().p;
  ResidueSet acc(s.modulus()), star(s.modulus());
  acc.insert(0);
  std::vector<uint64_t> rot(acc.words().size());
  for (auto& [r, c] : s.entries())
    for (uint64_t k = 0; k < c; ++k) {
      std::fill(rot.begin(), rot.end(), 0);
      or_rotated(rot, acc.words(), r, p);
      for (size_t w = 0; w < rot.size(); ++w) {
        star.words()[w] |= rot[w];
        acc.words()[w] |= rot[w];
      }
    }
  return star;
}

bool is_zero_sum_free(const Multiset& s) { return !sigma_star(s).contains(0); }

AsymmetricSet::AsymmetricSet(ResidueSet a) : set_(a.modulus()) {
  const uint64_t p = a.modulus().p;
  for (uint64_t x : a.elements()) {
    if (x == 0 || a.contains(neg_mod(x, p)))
      fail(ErrorCode::domain,
           "set is not asymmetric: contains " + std::to_string(x) + " and its negation");
  }
  set_ = std::move(a);
}

uint64_t instance_budget_override() {
  const char* env = std::getenv("SIGMA_LAB_BUDGET");
  if (!env || !*env) return 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') return 0;
  return static_cast<uint64_t>(v);
}

uint64_t default_instance_budget() {
  uint64_t env = instance_budget_override();
  return env ? env : kBuiltinBudget;
}

uint64_t pair_sweep_estimate(Modulus m) {
  uint64_t est = 1;
  for (uint64_t k = 0; k < (m.p - 1) / 2; ++k) {
    if (est > UINT64_MAX / 3) return UINT64_MAX;
    est *= 3;
  }
  return est;
}

namespace {

uint64_t resolve_budget(const SearchOptions& opt) {
  return opt.budget ? opt.budget : default_instance_budget();
}

void check_budget(uint64_t estimate, uint64_t budget, const std::string& what) {
  if (estimate > budget)
    throw BudgetError(estimate, budget,
                      what + ": estimated " + std::to_string(estimate) +
                          " instances exceeds budget " + std::to_string(budget) +
                          " (raise --budget or SIGMA_LAB_BUDGET to at least the estimate)");
}

using smallp::SigmaPair;
using smallp::extend;

void require_search_modulus(Modulus m) {
  if (m.p > 61)
    fail(ErrorCode::domain, "exhaustive searches support p <= 61");
}

struct ZsfDfs {
  uint64_t p;
  uint64_t k = 0;
  std::vector<uint64_t> witness;
  uint64_t nodes = 0;
  std::vector<uint64_t> stack;

  void visit(SigmaPair s, uint64_t last) {
    ++nodes;
    if (witness.empty() || stack.size() > k) {
      k = stack.size();
      witness = stack;
    }
    // A zero-sum-free set is asymmetric (a symmetric pair or 0 sums to 0),
    // so |Sigma*| >= min(p, k(k+1)/2) by the independently verified subsum
    // bound. Once (k+1)(k+2)/2 >= p no extension can stay zero-sum-free;
    // skip the doomed pushes. The ne test below would reject them anyway.
    uint64_t k1 = stack.size() + 1;
    if (k1 * (k1 + 1) / 2 >= p) return;
    for (uint64_t e = last + 1; e < p; ++e) {
      SigmaPair child = extend(s, e, p);
      if (child.ne & 1) continue;  // zero subset sum appeared
      stack.push_back(e);
      visit(child, e);
      stack.pop_back();
    }
  }
};

}  // namespace

MaxZeroSumFreeResult max_zero_sum_free_size(Modulus m, const SearchOptions& opt) {
  require_search_modulus(m);
  check_budget(pair_sweep_estimate(m), resolve_budget(opt), "max zero-sum-free search");
  if (opt.part.count == 0 || opt.part.index >= opt.part.count)
    fail(ErrorCode::invalid_argument, "bad work partition");

  const uint64_t p = m.p;
  MaxZeroSumFreeResult best;
  // Strata by smallest element; under symmetry reduction only stratum 1 is
  // scanned (every orbit under A -> cA has a representative containing 1,
  // and scaling by c permutes Sigma* without moving 0).
  for (uint64_t s = 1; s < p; ++s) {
    if ((s - 1) % opt.part.count != opt.part.index) continue;
    if (opt.symmetry_reduction && s != 1) continue;
    SigmaPair root = extend(SigmaPair{}, s, p);
    if (root.ne & 1) continue;
    ZsfDfs dfs{p, 0, {}, 0, {}};
    dfs.stack.push_back(s);
    dfs.visit(root, s);
    best.nodes += dfs.nodes;
    // Strata are visited in ascending order, so under equal k the witness
    // with the smallest least element is kept. Cross-slice merges apply the
    // same (k desc, stratum asc) key and land on the same witness.
    if (!best.found || dfs.k > best.k) {
      best.k = dfs.k;
      best.witness = dfs.witness;
      best.stratum = s;
      best.found = true;
    }
  }
  return best;
}

namespace {

struct AcrDfs {
  uint64_t p;
  uint64_t full;
  uint64_t base;  // canonical ordinal of this task's first leaf
  AcrScan out;
  std::vector<uint64_t> stack;

  // Pairs are {x, p-x} for x = 1..(p-1)/2; depth j handles pair x = j+1.
  // Children are visited in digit order (skip, x, p-x), so decided leaves
  // accumulate in canonical base-3 order and base + out.leaves is the
  // ordinal of the leaf about to be decided.
  void visit(SigmaPair s, uint64_t next_pair, uint64_t npairs) {
    if (s.sig == full) {
      // Sigma only grows along an extension, so every leaf below is full
      // too and none can improve the nonfull maximum. Count them as decided.
      uint64_t skipped = 1;
      for (uint64_t j = next_pair; j < npairs; ++j) skipped *= 3;
      out.leaves += skipped;
      return;
    }
    if (next_pair == npairs) {
      if (!out.any_nonfull || stack.size() > out.max_nonfull_card) {
        out.any_nonfull = true;
        out.max_nonfull_card = stack.size();
        out.witness = stack;
        out.witness_ordinal = base + out.leaves;
      }
      ++out.leaves;
      return;
    }
    uint64_t x = next_pair + 1;
    visit(s, next_pair + 1, npairs);
    stack.push_back(x);
    visit(extend(s, x, p), next_pair + 1, npairs);
    stack.pop_back();
    stack.push_back(p - x);
    visit(extend(s, p - x, p), next_pair + 1, npairs);
    stack.pop_back();
  }
};

}  // namespace

AcrScan acr_scan(Modulus m, const SearchOptions& opt) {
  require_search_modulus(m);
  if (m.p % 2 == 0) fail(ErrorCode::domain, "asymmetric scan requires an odd prime");
  check_budget(pair_sweep_estimate(m), resolve_budget(opt), "asymmetric-set scan");
  if (opt.part.count == 0 || opt.part.index >= opt.part.count)
    fail(ErrorCode::invalid_argument, "bad work partition");

  const uint64_t p = m.p;
  const uint64_t npairs = (p - 1) / 2;
  const uint64_t first_pair = opt.symmetry_reduction ? 1 : 0;
  const uint64_t avail = npairs - first_pair;
  // Stratify by a base-3 prefix over the first L free pairs, 3^L >= count
  // when enough pairs exist. Slices merge by max, so order never matters,
  // but tasks are processed in ascending order to pin the witness choice.
  uint64_t L = 0, tasks = 1;
  while (tasks < opt.part.count && L < avail) {
    tasks *= 3;
    ++L;
  }

  uint64_t leaves_per_task = 1;
  for (uint64_t j = 0; j < avail - L; ++j) leaves_per_task *= 3;

  AcrScan merged;
  for (uint64_t t = 0; t < tasks; ++t) {
    if (t % opt.part.count != opt.part.index) continue;
    AcrDfs dfs{p, smallp::mask(p), t * leaves_per_task, {}, {}};
    SigmaPair s;
    if (opt.symmetry_reduction) {
      s = extend(s, 1, p);
      dfs.stack.push_back(1);
    }
    uint64_t rem = t;
    uint64_t div = tasks;
    for (uint64_t j = 0; j < L; ++j) {
      div /= 3;
      uint64_t digit = rem / div;
      rem %= div;
      uint64_t pair_x = first_pair + j + 1;
      if (digit == 1) {
        s = extend(s, pair_x, p);
        dfs.stack.push_back(pair_x);
      } else if (digit == 2) {
        s = extend(s, p - pair_x, p);
        dfs.stack.push_back(p - pair_x);
      }
    }
    dfs.visit(s, first_pair + L, npairs);
    if (t == 0 && opt.symmetry_reduction) {
      // The empty set is no scaling representative, so check it here. Its
      // sigma is {0}, never full; it matters only as a decided leaf since
      // any singleton representative beats cardinality 0.
      if (!dfs.out.any_nonfull) {
        dfs.out.any_nonfull = true;
        dfs.out.max_nonfull_card = 0;
        dfs.out.witness.clear();
        dfs.out.witness_ordinal = UINT64_MAX;
      }
      ++dfs.out.leaves;
    }
    if (acr_improves(dfs.out, merged)) {
      merged.any_nonfull = dfs.out.any_nonfull;
      merged.max_nonfull_card = dfs.out.max_nonfull_card;
      merged.witness = dfs.out.witness;
      merged.witness_ordinal = dfs.out.witness_ordinal;
    }
    merged.leaves += dfs.out.leaves;
  }
  return merged;
}

uint64_t acr(Modulus m, const SearchOptions& opt) {
  if (m.p < 7)
    fail(ErrorCode::undefined,
         "asymmetric critical number undefined for p < 7 (no room for nonfull sigma)");
  AcrScan scan = acr_scan(m, opt);
  return scan.max_nonfull_card + 1;
}

}  // namespace sigmalab
