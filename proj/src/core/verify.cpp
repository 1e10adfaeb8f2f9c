#include "verify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cinttypes>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "bindet.hpp"
#include "errors.hpp"
#include "exactmath.hpp"
#include "polyring.hpp"
#include "rng.hpp"
#include "subsums.hpp"

namespace sigmalab::verify {

namespace {

using smallp::SigmaPair;

// Builtin per-operation budgets; SIGMA_LAB_BUDGET and explicit Config
// budgets override them uniformly (see Config doc).
constexpr uint64_t kMainBudget = 4782969;          // 3^14, pair sweep <= p=29
constexpr uint64_t kSearchBudget = 14348907;       // 3^15, searches <= p=31
constexpr uint64_t kBackgroundBudget = 268435456;  // 2^28, exhaustive <= p=13

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

uint64_t effective_budget(const Config& cfg, uint64_t op_default) {
  if (cfg.budget) return cfg.budget;
  if (uint64_t env = instance_budget_override()) return env;
  return op_default;
}

[[noreturn]] void refuse(const std::string& what, uint64_t estimate, uint64_t budget) {
  throw BudgetError(estimate, budget,
                    what + ": estimated " + std::to_string(estimate) +
                        " instances exceeds budget " + std::to_string(budget) +
                        " (raise --budget or SIGMA_LAB_BUDGET to at least the estimate)");
}

void require_small_modulus(Modulus m) {
  if (m.p > 61) fail(ErrorCode::domain, "exhaustive sweeps support p <= 61");
}

// Count of multisets over an alphabet of p-1 symbols with length <= max_len,
// i.e. C(max_len + p - 1, p - 1), saturating at UINT64_MAX.
uint64_t multiset_sweep_estimate(uint64_t p, uint64_t max_len) {
  BigNat c = binomial(max_len + p - 1, static_cast<int64_t>(p - 1));
  if (!c.fits_ulong_p()) return UINT64_MAX;
  return c.get_ui();
}

// Compositions of n into d parts, ignoring the per-part cap: a safe
// overestimate of the expansion comparison domain.
uint64_t composition_estimate(uint64_t n, uint64_t d) {
  BigNat c = binomial(n + d - 1, static_cast<int64_t>(d - 1));
  if (!c.fits_ulong_p()) return UINT64_MAX;
  return c.get_ui();
}

int64_t ceil_div(int64_t a, int64_t b) {  // b > 0
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

std::string dec(const BigInt& x) { return x.get_str(); }

// Runs fn(0..nslices-1), fanning across at most `jobs` threads. Slice
// results come back indexed, so merging in ascending slice order is
// reproducible no matter how the threads interleaved.
template <class R, class Fn>
std::vector<R> run_sliced(uint64_t nslices, uint32_t jobs, const Fn& fn) {
  std::vector<R> out(nslices);
  uint64_t workers = std::min<uint64_t>(jobs ? jobs : 1, nslices);
  if (workers <= 1) {
    for (uint64_t i = 0; i < nslices; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<uint64_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (uint64_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        for (;;) {
          uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
          if (i >= nslices) return;
          out[i] = fn(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

uint64_t slice_count(uint32_t jobs, uint64_t cap) {
  if (jobs <= 1) return 1;
  uint64_t n = static_cast<uint64_t>(jobs) * 4;
  if (cap && n > cap) n = cap;
  return n ? n : 1;
}

// Base-3 prefix task plan over the pair choices {skip, x, p-x}, shared by
// the pair-indexed exhaustive scans. Task t covers the contiguous leaf range
// [t * leaves_per_task, (t+1) * leaves_per_task) of the canonical scan.
struct PairPlan {
  uint64_t p = 0, npairs = 0, first_pair = 0, avail = 0;
  uint64_t L = 0, tasks = 1, leaves_per_task = 1;
  bool symmetry = false;
};

PairPlan plan_pairs(uint64_t p, bool symmetry, uint64_t want) {
  PairPlan pl;
  pl.p = p;
  pl.symmetry = symmetry;
  pl.npairs = (p - 1) / 2;
  pl.first_pair = symmetry ? 1 : 0;
  pl.avail = pl.npairs - pl.first_pair;
  while (pl.tasks < want && pl.L < pl.avail) {
    pl.tasks *= 3;
    ++pl.L;
  }
  for (uint64_t j = 0; j < pl.avail - pl.L; ++j) pl.leaves_per_task *= 3;
  return pl;
}

struct TaskState {
  SigmaPair s;
  std::vector<uint64_t> stack;
};

TaskState materialize_task(const PairPlan& pl, uint64_t t) {
  TaskState st;
  if (pl.symmetry) {
    st.s = smallp::extend(st.s, 1, pl.p);
    st.stack.push_back(1);
  }
  uint64_t rem = t, div = pl.tasks;
  for (uint64_t j = 0; j < pl.L; ++j) {
    div /= 3;
    uint64_t digit = rem / div;
    rem %= div;
    uint64_t x = pl.first_pair + j + 1;
    if (digit == 1) {
      st.s = smallp::extend(st.s, x, pl.p);
      st.stack.push_back(x);
    } else if (digit == 2) {
      st.s = smallp::extend(st.s, pl.p - x, pl.p);
      st.stack.push_back(pl.p - x);
    }
  }
  return st;
}

// ---------------------------------------------------------------- main scan

struct MainSlice {
  uint64_t leaves = 0;
  int64_t min_slack_sigma = INT64_MAX;
  int64_t min_slack_star = INT64_MAX;
  int64_t min_slack_olson = INT64_MAX;
  std::vector<uint64_t> tight_witness;  // attains min_slack_sigma
  uint64_t tight_ordinal = UINT64_MAX;
  Json ce;
  uint64_t ce_ordinal = UINT64_MAX;
};

struct MainDfs {
  uint64_t p, npairs, base;
  MainSlice out;
  std::vector<uint64_t> stack;

  void leaf(SigmaPair s) {
    uint64_t ord = base + out.leaves;
    ++out.leaves;
    int64_t pp = static_cast<int64_t>(p);
    int64_t k = static_cast<int64_t>(stack.size());
    int64_t cs = std::popcount(s.sig);
    int64_t cn = std::popcount(s.ne);
    int64_t half = k * (k + 1) / 2;
    int64_t b_sigma = std::min(pp, 1 + half);
    int64_t b_star = std::min(pp, half);
    int64_t b_olson = std::min((pp + 3) / 2, half);
    int64_t sl_sigma = cs - b_sigma;
    int64_t sl_star = cn - b_star;
    int64_t sl_olson = cs - b_olson;
    if (sl_sigma < out.min_slack_sigma) {
      out.min_slack_sigma = sl_sigma;
      out.tight_witness = stack;
      out.tight_ordinal = ord;
    }
    out.min_slack_star = std::min(out.min_slack_star, sl_star);
    out.min_slack_olson = std::min(out.min_slack_olson, sl_olson);
    if ((sl_sigma < 0 || sl_star < 0 || sl_olson < 0) && ord < out.ce_ordinal) {
      Json violated = Json::array();
      if (sl_sigma < 0) violated.push_back("sigma");
      if (sl_star < 0) violated.push_back("sigma_star");
      if (sl_olson < 0) violated.push_back("olson");
      out.ce = Json{{"p", p},
                    {"set", stack},
                    {"cardinality_sigma", cs},
                    {"cardinality_sigma_star", cn},
                    {"bound_sigma", b_sigma},
                    {"bound_sigma_star", b_star},
                    {"bound_olson", b_olson},
                    {"violated", violated}};
      out.ce_ordinal = ord;
    }
  }

  void visit(SigmaPair s, uint64_t next_pair) {
    if (next_pair == npairs) {
      leaf(s);
      return;
    }
    uint64_t x = next_pair + 1;
    visit(s, next_pair + 1);
    stack.push_back(x);
    visit(smallp::extend(s, x, p), next_pair + 1);
    stack.pop_back();
    stack.push_back(p - x);
    visit(smallp::extend(s, p - x, p), next_pair + 1);
    stack.pop_back();
  }
};

void merge_main(MainSlice& m, const MainSlice& s) {
  m.leaves += s.leaves;
  if (s.min_slack_sigma < m.min_slack_sigma ||
      (s.min_slack_sigma == m.min_slack_sigma && s.tight_ordinal < m.tight_ordinal)) {
    m.min_slack_sigma = s.min_slack_sigma;
    m.tight_witness = s.tight_witness;
    m.tight_ordinal = s.tight_ordinal;
  }
  m.min_slack_star = std::min(m.min_slack_star, s.min_slack_star);
  m.min_slack_olson = std::min(m.min_slack_olson, s.min_slack_olson);
  if (s.ce_ordinal < m.ce_ordinal) {
    m.ce = s.ce;
    m.ce_ordinal = s.ce_ordinal;
  }
}

}  // namespace

Verdict verify_main_theorem(Modulus m, const Config& cfg) {
  Timer timer;
  if (m.p == 2) fail(ErrorCode::domain, "the subsum sweep requires an odd prime");
  require_small_modulus(m);
  uint64_t budget = effective_budget(cfg, kMainBudget);
  uint64_t estimate = pair_sweep_estimate(m);
  if (estimate > budget) refuse("asymmetric subsum sweep", estimate, budget);

  PairPlan pl = plan_pairs(m.p, cfg.symmetry_reduction, slice_count(cfg.jobs, 0));
  auto slices = run_sliced<MainSlice>(pl.tasks, cfg.jobs, [&](uint64_t t) {
    TaskState st = materialize_task(pl, t);
    MainDfs dfs{m.p, pl.npairs, t * pl.leaves_per_task, {}, std::move(st.stack)};
    dfs.visit(st.s, pl.first_pair + pl.L);
    return std::move(dfs.out);
  });
  MainSlice merged;
  for (const MainSlice& s : slices) merge_main(merged, s);

  if (cfg.symmetry_reduction) {
    // The empty set is no scaling representative; its slacks are 0, 0, 1.
    ++merged.leaves;
    if (0 < merged.min_slack_sigma) {
      merged.min_slack_sigma = 0;
      merged.tight_witness.clear();
      merged.tight_ordinal = UINT64_MAX - 1;
    }
    merged.min_slack_star = std::min<int64_t>(merged.min_slack_star, 0);
    merged.min_slack_olson = std::min<int64_t>(merged.min_slack_olson, 1);
  }

  Verdict v;
  v.claim = "subsum.main_theorem";
  v.params = Json{{"p", m.p}, {"symmetry_reduction", cfg.symmetry_reduction}};
  v.instances_checked = merged.leaves;
  v.holds = merged.ce.is_null();
  v.counterexample = merged.ce;
  v.detail = Json{{"min_slack_sigma", merged.min_slack_sigma},
                  {"min_slack_sigma_star", merged.min_slack_star},
                  {"min_slack_olson", merged.min_slack_olson},
                  {"tight_witness", merged.tight_witness}};
  v.elapsed_ms = timer.ms();
  return v;
}

// ------------------------------------------------------------ multiset scan

namespace {

// Enumerates multisets over {1, ..., p-1} of length <= the remaining budget,
// one stratum = one fixed multiplicity of the element 1. leaf(mult, s, len)
// sees the multiplicity table, the (Sigma, Sigma*) pair, and the length.
template <class LeafFn>
void mset_stratum(uint64_t p, uint64_t max_len, uint64_t m1, bool symmetry_empty_only,
                  LeafFn&& leaf) {
  std::vector<uint32_t> mult(p, 0);
  SigmaPair s;
  if (symmetry_empty_only) {
    leaf(mult, s, 0);
    return;
  }
  mult[1] = static_cast<uint32_t>(m1);
  for (uint64_t c = 0; c < m1; ++c) s = smallp::extend(s, 1, p);

  // Iterative value walk would obscure the rollback; recursion depth is < p.
  auto rec = [&](auto&& self, uint64_t e, uint64_t remaining, SigmaPair cur,
                 uint64_t len) -> void {
    if (e == p) {
      leaf(mult, cur, len);
      return;
    }
    self(self, e + 1, remaining, cur, len);
    SigmaPair ext = cur;
    for (uint64_t c = 1; c <= remaining; ++c) {
      ext = smallp::extend(ext, e, p);
      ++mult[e];
      self(self, e + 1, remaining - c, ext, len + c);
    }
    mult[e] -= static_cast<uint32_t>(remaining);
  };
  rec(rec, 2, max_len - m1, s, m1);
}

// Descending multiplicities of the pairs {x, p-x} present in mult.
std::vector<uint64_t> pair_multiplicities(const std::vector<uint32_t>& mult, uint64_t p) {
  std::vector<uint64_t> l;
  for (uint64_t x = 1; 2 * x < p; ++x) {
    uint64_t c = static_cast<uint64_t>(mult[x]) + mult[p - x];
    if (c) l.push_back(c);
  }
  std::sort(l.begin(), l.end(), std::greater<>());
  return l;
}

Json mult_to_json(const std::vector<uint32_t>& mult) {
  Json arr = Json::array();
  for (uint64_t r = 1; r < mult.size(); ++r)
    if (mult[r]) arr.push_back(Json::array({r, mult[r]}));
  return arr;
}

struct SeqSlice {
  uint64_t instances = 0;
  int64_t min_slack_sigma = INT64_MAX;
  int64_t min_slack_star = INT64_MAX;
  Json ce;
  uint64_t ce_stratum = UINT64_MAX;
};

struct StructSlice {
  uint64_t enumerated = 0;
  uint64_t zero_sum_free = 0;
  uint64_t instances = 0;  // (S, k) bound checks plus corollary checks
  int64_t min_slack = INT64_MAX;
  Json ce;
  uint64_t ce_stratum = UINT64_MAX;
};

}  // namespace

Verdict verify_sequence_theorem(Modulus m, uint64_t max_len, const Config& cfg) {
  Timer timer;
  if (m.p == 2) fail(ErrorCode::domain, "the sequence sweep requires an odd prime");
  require_small_modulus(m);
  uint64_t budget = effective_budget(cfg, kSearchBudget);
  uint64_t estimate = multiset_sweep_estimate(m.p, max_len);
  if (estimate > budget) refuse("sequence subsum sweep", estimate, budget);

  const uint64_t p = m.p;
  const int64_t pp = static_cast<int64_t>(p);
  auto slices = run_sliced<SeqSlice>(max_len + 1, cfg.jobs, [&](uint64_t m1) {
    SeqSlice out;
    bool empty_only = cfg.symmetry_reduction && m1 == 0;
    mset_stratum(p, max_len, m1, empty_only,
                 [&](const std::vector<uint32_t>& mult, SigmaPair s, uint64_t) {
                   std::vector<uint64_t> l = pair_multiplicities(mult, p);
                   int64_t b = 0;
                   for (uint64_t i = 0; i < l.size(); ++i)
                     b += static_cast<int64_t>(i + 1) * static_cast<int64_t>(l[i]);
                   int64_t cs = std::popcount(s.sig);
                   int64_t cn = std::popcount(s.ne);
                   int64_t b_sigma = std::min(pp, 1 + b);
                   int64_t b_star = std::min(pp, b);
                   out.min_slack_sigma = std::min(out.min_slack_sigma, cs - b_sigma);
                   out.min_slack_star = std::min(out.min_slack_star, cn - b_star);
                   ++out.instances;
                   if ((cs < b_sigma || cn < b_star) && out.ce.is_null()) {
                     out.ce = Json{{"p", p},
                                   {"multiset", mult_to_json(mult)},
                                   {"pair_multiplicities", l},
                                   {"cardinality_sigma", cs},
                                   {"cardinality_sigma_star", cn},
                                   {"bound_sigma", b_sigma},
                                   {"bound_sigma_star", b_star}};
                     out.ce_stratum = m1;
                   }
                 });
    return out;
  });

  SeqSlice merged;
  for (const SeqSlice& s : slices) {
    merged.instances += s.instances;
    merged.min_slack_sigma = std::min(merged.min_slack_sigma, s.min_slack_sigma);
    merged.min_slack_star = std::min(merged.min_slack_star, s.min_slack_star);
    if (s.ce_stratum < merged.ce_stratum) {
      merged.ce = s.ce;
      merged.ce_stratum = s.ce_stratum;
    }
  }

  Verdict v;
  v.claim = "subsum.sequence_theorem";
  v.params = Json{{"p", p}, {"max_len", max_len}, {"symmetry_reduction", cfg.symmetry_reduction}};
  v.instances_checked = merged.instances;
  v.holds = merged.ce.is_null();
  v.counterexample = merged.ce;
  v.detail = Json{{"min_slack_sigma", merged.min_slack_sigma},
                  {"min_slack_sigma_star", merged.min_slack_star}};
  v.elapsed_ms = timer.ms();
  return v;
}

Verdict verify_structural_multiplicity(Modulus m, uint64_t max_len, uint64_t k_max,
                                       const Config& cfg) {
  Timer timer;
  if (m.p == 2) fail(ErrorCode::domain, "the multiplicity sweep requires an odd prime");
  require_small_modulus(m);
  if (k_max < 1) fail(ErrorCode::invalid_argument, "k_max must be >= 1");
  uint64_t budget = effective_budget(cfg, kSearchBudget);
  uint64_t estimate = multiset_sweep_estimate(m.p, max_len);
  if (estimate > budget) refuse("zero-sum-free multiplicity sweep", estimate, budget);

  const uint64_t p = m.p;
  auto slices = run_sliced<StructSlice>(max_len + 1, cfg.jobs, [&](uint64_t m1) {
    StructSlice out;
    bool empty_only = cfg.symmetry_reduction && m1 == 0;
    mset_stratum(
        p, max_len, m1, empty_only,
        [&](const std::vector<uint32_t>& mult, SigmaPair s, uint64_t len) {
          ++out.enumerated;
          if (s.ne & 1) return;  // some subset sums to zero
          ++out.zero_sum_free;
          int64_t max_mult = 0, support = 0;
          for (uint64_t r = 1; r < p; ++r) {
            max_mult = std::max<int64_t>(max_mult, mult[r]);
            support += mult[r] ? 1 : 0;
          }
          for (uint64_t k = 1; k <= k_max; ++k) {
            int64_t num = 2 * static_cast<int64_t>(k + 1) * static_cast<int64_t>(len) -
                          2 * static_cast<int64_t>(p - 1);
            int64_t bound = ceil_div(num, static_cast<int64_t>(k * (k + 1)));
            ++out.instances;
            out.min_slack = std::min(out.min_slack, max_mult - bound);
            if (max_mult < bound && out.ce.is_null()) {
              out.ce = Json{{"p", p},
                            {"multiset", mult_to_json(mult)},
                            {"k", k},
                            {"max_multiplicity", max_mult},
                            {"required", bound}};
              out.ce_stratum = m1;
            }
          }
          if (len == p - 1) {
            // A zero-sum-free multiset of maximal length is constant.
            ++out.instances;
            if (support != 1 && out.ce.is_null()) {
              out.ce = Json{{"p", p},
                            {"multiset", mult_to_json(mult)},
                            {"support_size", support},
                            {"corollary", "maximal length forces a constant sequence"}};
              out.ce_stratum = m1;
            }
          }
        });
    return out;
  });

  StructSlice merged;
  for (const StructSlice& s : slices) {
    merged.enumerated += s.enumerated;
    merged.zero_sum_free += s.zero_sum_free;
    merged.instances += s.instances;
    merged.min_slack = std::min(merged.min_slack, s.min_slack);
    if (s.ce_stratum < merged.ce_stratum) {
      merged.ce = s.ce;
      merged.ce_stratum = s.ce_stratum;
    }
  }

  Verdict v;
  v.claim = "subsum.structural_multiplicity";
  v.params = Json{{"p", p},
                  {"max_len", max_len},
                  {"k_max", k_max},
                  {"symmetry_reduction", cfg.symmetry_reduction}};
  v.instances_checked = merged.instances;
  v.holds = merged.ce.is_null();
  v.counterexample = merged.ce;
  v.detail = Json{{"multisets_enumerated", merged.enumerated},
                  {"zero_sum_free", merged.zero_sum_free},
                  {"min_slack", merged.min_slack}};
  v.elapsed_ms = timer.ms();
  return v;
}

// ------------------------------------------------------------------ search

Verdict verify_selfridge(Modulus m, const Config& cfg) {
  Timer timer;
  require_small_modulus(m);
  uint64_t budget = effective_budget(cfg, kSearchBudget);
  uint64_t estimate = pair_sweep_estimate(m);
  if (estimate > budget) refuse("max zero-sum-free search", estimate, budget);

  uint64_t nslices = slice_count(cfg.jobs, m.p - 1);
  auto slices = run_sliced<MaxZeroSumFreeResult>(nslices, cfg.jobs, [&](uint64_t i) {
    SearchOptions opt;
    opt.budget = budget;
    opt.symmetry_reduction = cfg.symmetry_reduction;
    opt.part = {i, nslices};
    return max_zero_sum_free_size(m, opt);
  });
  MaxZeroSumFreeResult best;
  for (const MaxZeroSumFreeResult& r : slices) {
    best.nodes += r.nodes;
    if (r.found && (!best.found || r.k > best.k ||
                    (r.k == best.k && r.stratum < best.stratum))) {
      best.k = r.k;
      best.witness = r.witness;
      best.stratum = r.stratum;
      best.found = true;
    }
  }

  uint64_t kf = 1;
  while ((kf + 1) * (kf + 2) / 2 < m.p) ++kf;

  bool witness_ok = best.found && best.witness.size() == best.k &&
                    is_zero_sum_free(ResidueSet::of(m, best.witness));
  Verdict v;
  v.claim = "subsum.selfridge";
  v.params = Json{{"p", m.p}, {"symmetry_reduction", cfg.symmetry_reduction}};
  v.instances_checked = best.nodes;
  v.holds = best.found && best.k == kf && witness_ok;
  v.detail = Json{{"search_k", best.k},
                  {"formula_k", kf},
                  {"witness", best.witness},
                  {"witness_valid", witness_ok},
                  {"nodes", best.nodes}};
  if (!v.holds)
    v.counterexample = Json{{"p", m.p},
                            {"search_k", best.k},
                            {"formula_k", kf},
                            {"witness", best.witness}};
  v.elapsed_ms = timer.ms();
  return v;
}

Verdict verify_acr(Modulus m, const Config& cfg) {
  Timer timer;
  Verdict v;
  v.claim = "subsum.acr";
  v.params = Json{{"p", m.p}, {"symmetry_reduction", cfg.symmetry_reduction}};

  if (m.p == 2) {
    // 1 = -1 here, so the empty set is the only asymmetric set, and its
    // subsum set {0} misses 1: no cardinality threshold forces fullness.
    v.applicable = false;
    v.holds = true;
    v.instances_checked = 1;
    v.detail = Json{{"reason", "undefined below 7"},
                    {"max_nonfull_card", 0},
                    {"largest_asymmetric_size", 0}};
    v.elapsed_ms = timer.ms();
    return v;
  }

  require_small_modulus(m);
  uint64_t budget = effective_budget(cfg, kSearchBudget);
  uint64_t estimate = pair_sweep_estimate(m);
  if (estimate > budget) refuse("asymmetric-set scan", estimate, budget);

  uint64_t nslices = slice_count(cfg.jobs, 0);
  auto slices = run_sliced<AcrScan>(nslices, cfg.jobs, [&](uint64_t i) {
    SearchOptions opt;
    opt.budget = budget;
    opt.symmetry_reduction = cfg.symmetry_reduction;
    opt.part = {i, nslices};
    return acr_scan(m, opt);
  });
  AcrScan merged;
  for (const AcrScan& s : slices) {
    if (acr_improves(s, merged)) {
      merged.any_nonfull = s.any_nonfull;
      merged.max_nonfull_card = s.max_nonfull_card;
      merged.witness = s.witness;
      merged.witness_ordinal = s.witness_ordinal;
    }
    merged.leaves += s.leaves;
  }

  uint64_t npairs = (m.p - 1) / 2;
  v.instances_checked = merged.leaves;

  if (m.p < 7) {
    // Undefined: even a maximum-size asymmetric set leaves Sigma short of
    // the full group, so every threshold holds only vacuously.
    v.applicable = false;
    v.holds = merged.any_nonfull && merged.max_nonfull_card == npairs;
    v.detail = Json{{"reason", "undefined below 7"},
                    {"max_nonfull_card", merged.max_nonfull_card},
                    {"largest_asymmetric_size", npairs}};
    if (!v.holds)
      v.counterexample = Json{{"p", m.p}, {"max_nonfull_card", merged.max_nonfull_card}};
    v.elapsed_ms = timer.ms();
    return v;
  }

  uint64_t formula = 1;
  while (formula * (formula + 1) / 2 < m.p - 1) ++formula;
  uint64_t a = merged.max_nonfull_card + 1;

  bool witness_ok = false;
  if (merged.any_nonfull && merged.witness.size() == merged.max_nonfull_card) {
    try {
      AsymmetricSet checked(ResidueSet::of(m, merged.witness));
      witness_ok = !sigma(checked.set()).is_full();
    } catch (const Error&) {
      witness_ok = false;
    }
  }

  v.holds = a == formula && witness_ok;
  v.detail = Json{{"acr", a},
                  {"formula", formula},
                  {"max_nonfull_card", merged.max_nonfull_card},
                  {"witness", merged.witness},
                  {"witness_valid", witness_ok}};
  if (!v.holds)
    v.counterexample =
        Json{{"p", m.p}, {"acr", a}, {"formula", formula}, {"witness", merged.witness}};
  v.elapsed_ms = timer.ms();
  return v;
}

// -------------------------------------------------------------- det suite

namespace {

std::vector<uint64_t> sample_distinct_sorted(Rng& rng, uint64_t count, uint64_t lo,
                                             uint64_t hi) {
  std::vector<uint64_t> v;
  while (v.size() < count) {
    uint64_t x = rng.in(lo, hi);
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<uint64_t> run_without(uint64_t first, uint64_t last, uint64_t missing) {
  std::vector<uint64_t> v;
  for (uint64_t a = first; a <= last; ++a)
    if (a != missing) v.push_back(a);
  return v;
}

BigInt product_of(const std::vector<uint64_t>& xs) {
  BigInt r = 1;
  for (uint64_t x : xs) r *= BigInt(x);
  return r;
}

std::vector<uint64_t> shifted_down(const std::vector<uint64_t>& xs) {
  std::vector<uint64_t> v;
  v.reserve(xs.size());
  for (uint64_t x : xs) v.push_back(x - 1);
  return v;
}

// Determinant-backed normalized family value D_{d,i} / 2^(d(d-1)/2 - i),
// with the out-of-family convention value 0 at i = d+1.
BigRat dprime_from_det(uint64_t d, uint64_t i) {
  if (i > d) return BigRat(0);
  BigInt det = bindet_eval(family_tuples({static_cast<uint32_t>(d), static_cast<uint32_t>(i)}));
  int64_t e = static_cast<int64_t>(d * (d - 1) / 2) - static_cast<int64_t>(i);
  BigRat r = e >= 0 ? BigRat(det, pow2(static_cast<uint64_t>(e)))
                    : BigRat(det * pow2(static_cast<uint64_t>(-e)));
  r.canonicalize();
  return r;
}

}  // namespace

Verdict verify_det_identities(uint64_t max_d, uint64_t trials_per_lemma, const Config& cfg) {
  Timer timer;
  if (max_d < 2) fail(ErrorCode::invalid_argument, "the determinant suite requires max_d >= 2");
  Verdict v;
  v.claim = "det.identities";
  v.params = Json{{"max_d", max_d}, {"trials_per_lemma", trials_per_lemma}, {"seed", cfg.seed}};

  Json ce;
  auto record = [&](const char* identity, Json inst) {
    if (!ce.is_null()) return;
    inst["identity"] = identity;
    ce = std::move(inst);
  };
  uint64_t n_closed = 0, n_norm = 0, n_factor = 0, n_pascal = 0, n_rec = 0;

  for (uint64_t d = 1; d <= max_d; ++d) {
    for (uint64_t i = 0; i <= d; ++i) {
      FamilyIndex idx{static_cast<uint32_t>(d), static_cast<uint32_t>(i)};
      BigInt det = bindet_eval(family_tuples(idx));

      ++n_closed;
      BigInt cf = family_closed_form(idx);
      if (det != cf)
        record("closed_form", Json{{"d", d},
                                   {"i", i},
                                   {"determinant", dec(det)},
                                   {"closed_form", dec(cf)}});

      // det == 2^(d(d-1)/2 - i) * (C(d,i) + C(d-1,i-1)) over the rationals
      ++n_norm;
      int64_t e = static_cast<int64_t>(d * (d - 1) / 2) - static_cast<int64_t>(i);
      BigInt norm = family_normalized(idx);
      BigRat lhs(det);
      BigRat rhs = e >= 0 ? BigRat(pow2(static_cast<uint64_t>(e)) * norm)
                          : BigRat(norm, pow2(static_cast<uint64_t>(-e)));
      rhs.canonicalize();
      if (lhs != rhs)
        record("normalization",
               Json{{"d", d}, {"i", i}, {"determinant", dec(det)}, {"normalized", dec(norm)}});

      ++n_factor;
      BigInt rest = det;
      for (uint64_t q : primes_up_to(2 * d))
        while (rest % static_cast<unsigned long>(q) == 0)
          rest /= static_cast<unsigned long>(q);
      if (rest != 1)
        record("prime_factor_bound",
               Json{{"d", d}, {"i", i}, {"determinant", dec(det)}, {"cofactor", dec(rest)}});
    }
  }

  for (uint64_t d = 2; d <= max_d; ++d) {
    for (uint64_t i = 1; i <= d; ++i) {
      ++n_pascal;
      if (dprime_from_det(d, i) != dprime_from_det(d - 1, i - 1) + dprime_from_det(d - 1, i))
        record("pascal", Json{{"d", d}, {"i", i}});

      ++n_rec;
      FamilyIndex idx{static_cast<uint32_t>(d), static_cast<uint32_t>(i)};
      if (BigRat(bindet_eval(family_tuples(idx))) != family_recurrence_rhs(idx))
        record("recurrence", Json{{"d", d}, {"i", i}});
    }
  }

  // Randomized reduction identities on strictly increasing tuples.
  Rng rng(cfg.seed ^ 0xb1d4e7ull);
  for (uint64_t trial = 0; trial < trials_per_lemma; ++trial) {
    uint64_t d = rng.in(1, 6);
    auto a = sample_distinct_sorted(rng, d, 1, 28);
    auto b = sample_distinct_sorted(rng, d, 1, 28);
    BigInt lhs = product_of(b) * bindet_eval({a, b});
    BigInt rhs = product_of(a) * bindet_eval({shifted_down(a), shifted_down(b)});
    if (lhs != rhs) record("scaling", Json{{"a", a}, {"b", b}});
  }
  for (uint64_t trial = 0; trial < trials_per_lemma; ++trial) {
    uint64_t d = rng.in(2, 7);
    uint64_t x = rng.in(0, 18);
    auto br = sample_distinct_sorted(rng, d - 1, 1, 24);
    std::vector<uint64_t> bottom = {0};
    bottom.insert(bottom.end(), br.begin(), br.end());
    BigInt lhs = bindet_eval({run_without(x, x + d - 1, x + d), bottom});
    BigInt rhs = bindet_eval({run_without(x, x + d - 2, x + d), shifted_down(br)});
    if (lhs != rhs)
      record("consecutive_reduction", Json{{"x", x}, {"d", d}, {"bottom", bottom}});
  }
  for (uint64_t trial = 0; trial < trials_per_lemma; ++trial) {
    uint64_t d = rng.in(2, 7);
    uint64_t i = rng.in(1, d - 1);
    uint64_t x = rng.in(0, 18);
    auto br = sample_distinct_sorted(rng, d - 1, 1, 24);
    std::vector<uint64_t> bottom = {0};
    bottom.insert(bottom.end(), br.begin(), br.end());
    auto lower = shifted_down(br);
    BigInt lhs = bindet_eval({run_without(x, x + d, x + i), bottom});
    BigInt rhs = bindet_eval({run_without(x, x + d - 1, x + i - 1), lower}) +
                 bindet_eval({run_without(x, x + d - 1, x + i), lower});
    if (lhs != rhs)
      record("gap_reduction", Json{{"x", x}, {"i", i}, {"d", d}, {"bottom", bottom}});
  }

  v.instances_checked =
      n_closed + n_norm + n_factor + n_pascal + n_rec + 3 * trials_per_lemma;
  v.holds = ce.is_null();
  v.counterexample = ce;
  v.detail = Json{{"per_identity",
                   Json{{"closed_form", n_closed},
                        {"normalization", n_norm},
                        {"prime_factor_bound", n_factor},
                        {"pascal", n_pascal},
                        {"recurrence", n_rec},
                        {"scaling", trials_per_lemma},
                        {"consecutive_reduction", trials_per_lemma},
                        {"gap_reduction", trials_per_lemma}}}};
  v.elapsed_ms = timer.ms();
  return v;
}

// -------------------------------------------------------------- expansion

namespace {

struct ExpansionStats {
  uint64_t compositions = 0;
  uint64_t out_of_domain = 0;
  Json ce;
};

// Compare predicted against expanded coefficients over every exponent
// vector with sum t + d(d-1) and all parts < p. Enumeration is lexicographic,
// so the first mismatch is deterministic.
ExpansionStats expansion_compare(uint64_t d, uint64_t t, Modulus m) {
  ExpansionStats st;
  SparsePoly expanded = expanded_power_vandermonde(static_cast<uint32_t>(d),
                                                   static_cast<uint32_t>(t), m);
  for (const auto& [exps, coeff] : expanded.terms()) {
    (void)coeff;
    if (*std::max_element(exps.begin(), exps.end()) >= m.p) ++st.out_of_domain;
  }

  const uint64_t n = t + d * (d - 1);
  std::vector<uint64_t> b(d, 0);
  auto rec = [&](auto&& self, uint64_t idx, uint64_t remaining) -> void {
    if (idx == d - 1) {
      if (remaining >= m.p) return;
      b[idx] = remaining;
      ++st.compositions;
      uint64_t predicted = power_vandermonde_coefficient(static_cast<uint32_t>(d),
                                                         static_cast<uint32_t>(t), b, m);
      ExpVec e(b.begin(), b.end());
      uint64_t actual = expanded.coefficient(e);
      if (predicted != actual && st.ce.is_null())
        st.ce = Json{{"d", d},
                     {"t", t},
                     {"p", m.p},
                     {"b", b},
                     {"predicted", predicted},
                     {"actual", actual}};
      return;
    }
    uint64_t cap = std::min(remaining, m.p - 1);
    for (uint64_t val = 0; val <= cap; ++val) {
      b[idx] = val;
      self(self, idx + 1, remaining - val);
    }
  };
  rec(rec, 0, n);
  return st;
}

}  // namespace

Verdict verify_key_expansion(uint64_t d, uint64_t t, Modulus m, const Config& cfg) {
  Timer timer;
  if (d < 1) fail(ErrorCode::invalid_argument, "expansion requires d >= 1");
  if (t >= m.p) fail(ErrorCode::domain, "expansion hypothesis requires t < p");
  uint64_t budget = effective_budget(cfg, kSearchBudget);
  uint64_t estimate = composition_estimate(t + d * (d - 1), d);
  if (estimate > budget) refuse("expansion comparison", estimate, budget);

  ExpansionStats st = expansion_compare(d, t, m);
  Verdict v;
  v.claim = "poly.key_expansion";
  v.params = Json{{"p", m.p}, {"d", d}, {"t", t}};
  v.instances_checked = st.compositions;
  v.holds = st.ce.is_null();
  v.counterexample = st.ce;
  v.detail = Json{{"out_of_domain_terms", st.out_of_domain},
                  {"literal_identity_holds", st.out_of_domain == 0 && v.holds}};
  v.elapsed_ms = timer.ms();
  return v;
}

Verdict verify_key_expansion_grid(Modulus m, uint64_t max_d, uint64_t max_t,
                                  const Config& cfg) {
  Timer timer;
  if (max_d < 1) fail(ErrorCode::invalid_argument, "expansion requires max_d >= 1");
  uint64_t budget = effective_budget(cfg, kSearchBudget);

  Verdict v;
  v.claim = "poly.key_expansion";
  v.params = Json{{"p", m.p}, {"max_d", max_d}, {"max_t", max_t}};
  uint64_t cells = 0, out_of_domain = 0;
  Json ce;
  for (uint64_t d = 1; d <= max_d; ++d) {
    for (uint64_t t = 0; t <= max_t && t < m.p; ++t) {
      uint64_t estimate = composition_estimate(t + d * (d - 1), d);
      if (estimate > budget) refuse("expansion comparison", estimate, budget);
      ExpansionStats st = expansion_compare(d, t, m);
      ++cells;
      v.instances_checked += st.compositions;
      out_of_domain += st.out_of_domain;
      if (ce.is_null() && !st.ce.is_null()) ce = st.ce;
    }
  }
  v.holds = ce.is_null();
  v.counterexample = ce;
  v.detail = Json{{"grid_cells", cells}, {"out_of_domain_terms", out_of_domain}};
  v.elapsed_ms = timer.ms();
  return v;
}

// -------------------------------------------------------------- background

namespace {

// Brute-force cardinality of {sum x_i : x_i in A_i, x_i != +-x_j for i < j}.
uint64_t nonopposite_sum_count(const std::vector<std::vector<uint64_t>>& sets, uint64_t p) {
  const size_t d = sets.size();
  std::set<uint64_t> out;
  std::vector<size_t> pos(d, 0);
  for (;;) {
    bool ok = true;
    for (size_t i = 0; i < d && ok; ++i)
      for (size_t j = i + 1; j < d && ok; ++j) {
        uint64_t xi = sets[i][pos[i]], xj = sets[j][pos[j]];
        if (xi == xj || xi == (p - xj) % p) ok = false;
      }
    if (ok) {
      uint64_t sum = 0;
      for (size_t i = 0; i < d; ++i) sum = (sum + sets[i][pos[i]]) % p;
      out.insert(sum);
    }
    size_t idx = 0;
    while (idx < d && ++pos[idx] == sets[idx].size()) pos[idx++] = 0;
    if (idx == d) break;
  }
  return out.size();
}

std::vector<uint64_t> sample_subset(Rng& rng, uint64_t p, uint64_t size) {
  std::vector<uint64_t> v;
  while (v.size() < size) {
    uint64_t x = rng.below(p);
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

Json sets_to_json(const std::vector<std::vector<uint64_t>>& sets) {
  Json arr = Json::array();
  for (const auto& s : sets) arr.push_back(s);
  return arr;
}

}  // namespace

Verdict verify_background(Modulus m, BackgroundMode mode, uint64_t trials,
                          const Config& cfg) {
  Timer timer;
  const uint64_t p = m.p;
  Verdict v;
  v.claim = "background.bounds";
  v.params = Json{{"p", p},
                  {"mode", mode == BackgroundMode::exhaustive ? "exhaustive" : "sampled"},
                  {"trials", trials},
                  {"seed", cfg.seed}};
  Json ce;
  auto record = [&](const char* family, Json inst) {
    if (!ce.is_null()) return;
    inst["family"] = family;
    ce = std::move(inst);
  };
  uint64_t n_cd = 0, n_dh = 0, n_nonopp = 0, n_images = 0;

  if (mode == BackgroundMode::exhaustive) {
    if (p > 13) fail(ErrorCode::domain, "exhaustive background bounds support p <= 13");
    const uint64_t full = (1ull << p) - 1;
    uint64_t estimate = full * full + p * (1ull << (p - 1));
    uint64_t budget = effective_budget(cfg, kBackgroundBudget);
    if (estimate > budget) refuse("exhaustive background bounds", estimate, budget);

    auto mask_elems = [&](uint64_t mask) {
      std::vector<uint64_t> e;
      for (uint64_t t2 = mask; t2; t2 &= t2 - 1)
        e.push_back(static_cast<uint64_t>(std::countr_zero(t2)));
      return e;
    };

    for (uint64_t am = 1; am <= full; ++am) {
      int64_t ka = std::popcount(am);
      for (uint64_t bm = 1; bm <= full; ++bm) {
        uint64_t sum = 0;
        for (uint64_t t2 = bm; t2; t2 &= t2 - 1)
          sum |= smallp::rot(am, static_cast<uint64_t>(std::countr_zero(t2)), p);
        int64_t need =
            std::min<int64_t>(static_cast<int64_t>(p), ka + std::popcount(bm) - 1);
        ++n_cd;
        if (std::popcount(sum) < need)
          record("cauchy_davenport", Json{{"p", p},
                                          {"a", mask_elems(am)},
                                          {"b", mask_elems(bm)},
                                          {"cardinality", std::popcount(sum)},
                                          {"required", need}});
      }
    }

    std::vector<uint64_t> dp(p + 1, 0);
    for (uint64_t am = 1; am <= full; ++am) {
      auto elems = mask_elems(am);
      const uint64_t ka = elems.size();
      std::fill(dp.begin(), dp.begin() + ka + 1, 0);
      dp[0] = 1;  // the empty selection sums to 0
      for (uint64_t idx = 0; idx < ka; ++idx)
        for (uint64_t j = std::min(ka, idx + 1); j >= 1; --j)
          dp[j] |= smallp::rot(dp[j - 1], elems[idx], p);
      for (uint64_t h = 1; h <= ka; ++h) {
        int64_t need = std::min<int64_t>(static_cast<int64_t>(p),
                                         static_cast<int64_t>(h * (ka - h) + 1));
        ++n_dh;
        if (std::popcount(dp[h]) < need)
          record("distinct_summands", Json{{"p", p},
                                           {"a", elems},
                                           {"h", h},
                                           {"cardinality", std::popcount(dp[h])},
                                           {"required", need}});
      }
    }
  } else {
    Rng rng(cfg.seed ^ (p * 0x9e3779b97f4a7c15ull));
    for (uint64_t trial = 0; trial < trials; ++trial) {
      uint64_t ka = rng.in(1, std::min<uint64_t>(p, 16));
      uint64_t kb = rng.in(1, std::min<uint64_t>(p, 16));
      auto a = sample_subset(rng, p, ka);
      auto b = sample_subset(rng, p, kb);
      uint64_t card =
          sumset(ResidueSet::of(m, a), ResidueSet::of(m, b)).cardinality();
      uint64_t need = std::min(p, ka + kb - 1);
      ++n_cd;
      if (card < need)
        record("cauchy_davenport",
               Json{{"p", p}, {"a", a}, {"b", b}, {"cardinality", card}, {"required", need}});
    }
    for (uint64_t trial = 0; trial < trials; ++trial) {
      uint64_t ka = rng.in(1, std::min<uint64_t>(p, 14));
      uint64_t h = rng.in(1, ka);
      auto a = sample_subset(rng, p, ka);
      uint64_t card = restricted_power(ResidueSet::of(m, a), h).cardinality();
      uint64_t need = std::min(p, h * (ka - h) + 1);
      ++n_dh;
      if (card < need)
        record("distinct_summands",
               Json{{"p", p}, {"a", a}, {"h", h}, {"cardinality", card}, {"required", need}});
    }
  }

  if (trials > 0 && p >= 3) {
    // Non-opposite-summands bound on seeded admissible instances: sizes k_i,
    // t = sum(k_i - 1) - d(d-1) in [0, p), and det[C(k_i - 1, 2j)] != 0 mod p.
    Rng rng(cfg.seed ^ (p << 16) ^ 0x6e50ull);
    for (uint64_t trial = 0; trial < trials; ++trial) {
      std::vector<uint64_t> sizes;
      uint64_t t = 0;
      for (int attempt = 0; attempt < 200; ++attempt) {
        uint64_t dd = 1 + rng.below(std::min<uint64_t>(3, (p - 1) / 2));
        std::vector<uint64_t> ks;
        uint64_t sum = 0;
        for (uint64_t i = 0; i < dd; ++i) {
          ks.push_back(rng.in(dd, std::min(p, 2 * dd + 3)));
          sum += ks.back() - 1;
        }
        uint64_t tt = sum - dd * (dd - 1);  // >= 0 since every k_i >= d
        if (tt >= p) continue;
        BinDet bd;
        for (uint64_t k : ks) bd.top.push_back(k - 1);
        for (uint64_t j = 0; j < dd; ++j) bd.bottom.push_back(2 * j);
        BigInt det = bindet_eval(bd) % static_cast<unsigned long>(p);
        if (det == 0) continue;
        sizes = ks;
        t = tt;
        break;
      }
      if (sizes.empty()) {
        // d = 1 is always admissible: the determinant is C(k-1, 0) = 1.
        sizes = {rng.in(1, std::min<uint64_t>(p, 5))};
        t = sizes[0] - 1;
      }
      std::vector<std::vector<uint64_t>> sets;
      for (uint64_t k : sizes) sets.push_back(sample_subset(rng, p, k));
      uint64_t card = nonopposite_sum_count(sets, p);
      ++n_nonopp;
      if (card < t + 1)
        record("nonopposite_summands", Json{{"p", p},
                                            {"sizes", sizes},
                                            {"sets", sets_to_json(sets)},
                                            {"t", t},
                                            {"cardinality", card},
                                            {"required", t + 1}});
    }

    // Distinct-images bound on seeded admissible instances.
    Rng rng2(cfg.seed ^ (p << 24) ^ 0x115eull);
    for (uint64_t trial = 0; trial < trials; ++trial) {
      std::vector<ResidueSet> sets;
      std::vector<MonicPoly> polys;
      int64_t bound_k = -1;
      for (int attempt = 0; attempt < 200 && bound_k < 0; ++attempt) {
        uint64_t n = 1 + rng2.below(3);
        uint64_t deg = 1 + rng2.below(2);
        uint64_t kmin = deg * (n - 1) + 1;
        uint64_t k = kmin + rng2.below(4);
        if (k > p) continue;
        int64_t K = static_cast<int64_t>(k - 1) * static_cast<int64_t>(n) -
                    static_cast<int64_t>((deg + 1) * n * (n - 1) / 2);
        if (K < 1 || static_cast<int64_t>(p) <= K) continue;
        std::vector<uint64_t> sizes(n, k);
        for (uint64_t i = n - 1; i-- > 0;)
          sizes[i] = sizes[i + 1] - (sizes[i + 1] > 1 && rng2.coin() ? 1 : 0);
        sets.clear();
        polys.clear();
        for (uint64_t i = 0; i < n; ++i) {
          sets.push_back(ResidueSet::of(m, sample_subset(rng2, p, sizes[i])));
          std::vector<uint64_t> coeffs(deg);
          for (auto& c : coeffs) c = rng2.below(p);
          polys.emplace_back(m, coeffs);
        }
        bound_k = K;
      }
      if (bound_k < 0) {
        // n = 1, degree 1, |A| = 2 is always admissible for p >= 3.
        sets = {ResidueSet::of(m, sample_subset(rng2, p, 2))};
        polys = {MonicPoly(m, {rng2.below(p)})};
      }
      LiuSunVerdict lv = liu_sun_verdict(sets, polys);
      ++n_images;
      if (!lv.applicable || !lv.holds) {
        Json jsets = Json::array(), jpolys = Json::array();
        for (const auto& s : sets) jsets.push_back(s.elements());
        for (const auto& q : polys) jpolys.push_back(q.lower_coeffs());
        record("distinct_images", Json{{"p", p},
                                       {"sets", jsets},
                                       {"polys", jpolys},
                                       {"applicable", lv.applicable},
                                       {"reason", lv.reason},
                                       {"K", lv.K},
                                       {"cardinality", lv.cardinality}});
      }
    }
  }

  v.instances_checked = n_cd + n_dh + n_nonopp + n_images;
  v.holds = ce.is_null();
  v.counterexample = ce;
  v.detail = Json{{"cauchy_davenport", n_cd},
                  {"distinct_summands", n_dh},
                  {"nonopposite_summands", n_nonopp},
                  {"distinct_images", n_images}};
  v.elapsed_ms = timer.ms();
  return v;
}

// ------------------------------------------------------------------ replay

namespace {

std::vector<uint64_t> u64s(const Json& j) { return j.get<std::vector<uint64_t>>(); }

bool replay_main(const Json& ce) {
  Modulus m = Modulus::checked(ce.at("p").get<uint64_t>());
  auto set = u64s(ce.at("set"));
  ResidueSet a = ResidueSet::of(m, set);
  int64_t pp = static_cast<int64_t>(m.p);
  int64_t k = static_cast<int64_t>(set.size());
  int64_t half = k * (k + 1) / 2;
  int64_t cs = static_cast<int64_t>(sigma(a).cardinality());
  int64_t cn = static_cast<int64_t>(sigma_star(a).cardinality());
  return cs < std::min(pp, 1 + half) || cn < std::min(pp, half) ||
         cs < std::min((pp + 3) / 2, half);
}

Multiset mset_from_json(Modulus m, const Json& j) {
  Multiset s(m);
  for (const auto& pair : j) s.add(pair.at(0).get<uint64_t>(), pair.at(1).get<uint64_t>());
  return s;
}

bool replay_sequence(const Json& ce) {
  Modulus m = Modulus::checked(ce.at("p").get<uint64_t>());
  Multiset s = mset_from_json(m, ce.at("multiset"));
  auto l = s.common_multiplicities();
  int64_t b = 0;
  for (uint64_t i = 0; i < l.size(); ++i)
    b += static_cast<int64_t>(i + 1) * static_cast<int64_t>(l[i]);
  int64_t pp = static_cast<int64_t>(m.p);
  int64_t cs = static_cast<int64_t>(sigma(s).cardinality());
  int64_t cn = static_cast<int64_t>(sigma_star(s).cardinality());
  return cs < std::min(pp, 1 + b) || cn < std::min(pp, b);
}

bool replay_structural(const Json& ce) {
  Modulus m = Modulus::checked(ce.at("p").get<uint64_t>());
  Multiset s = mset_from_json(m, ce.at("multiset"));
  if (!is_zero_sum_free(s)) return false;  // hypothesis gone, nothing violated
  if (ce.contains("corollary"))
    return s.length() == m.p - 1 && s.support().cardinality() != 1;
  int64_t k = ce.at("k").get<int64_t>();
  int64_t len = static_cast<int64_t>(s.length());
  int64_t bound =
      ceil_div(2 * (k + 1) * len - 2 * static_cast<int64_t>(m.p - 1), k * (k + 1));
  int64_t max_mult = 0;
  for (const auto& [r, c] : s.entries())
    max_mult = std::max<int64_t>(max_mult, static_cast<int64_t>(c));
  return max_mult < bound;
}

bool replay_expansion(const Json& ce) {
  Modulus m = Modulus::checked(ce.at("p").get<uint64_t>());
  uint64_t d = ce.at("d").get<uint64_t>();
  uint64_t t = ce.at("t").get<uint64_t>();
  auto b = u64s(ce.at("b"));
  uint64_t predicted = power_vandermonde_coefficient(static_cast<uint32_t>(d),
                                                     static_cast<uint32_t>(t), b, m);
  SparsePoly expanded = expanded_power_vandermonde(static_cast<uint32_t>(d),
                                                   static_cast<uint32_t>(t), m);
  ExpVec e(b.begin(), b.end());
  return expanded.coefficient(e) != predicted;
}

bool replay_det(const Json& ce) {
  const std::string id = ce.at("identity").get<std::string>();
  if (id == "scaling") {
    auto a = u64s(ce.at("a")), b = u64s(ce.at("b"));
    return product_of(b) * bindet_eval({a, b}) !=
           product_of(a) * bindet_eval({shifted_down(a), shifted_down(b)});
  }
  if (id == "consecutive_reduction") {
    uint64_t x = ce.at("x").get<uint64_t>(), d = ce.at("d").get<uint64_t>();
    auto bottom = u64s(ce.at("bottom"));
    std::vector<uint64_t> br(bottom.begin() + 1, bottom.end());
    return bindet_eval({run_without(x, x + d - 1, x + d), bottom}) !=
           bindet_eval({run_without(x, x + d - 2, x + d), shifted_down(br)});
  }
  if (id == "gap_reduction") {
    uint64_t x = ce.at("x").get<uint64_t>(), d = ce.at("d").get<uint64_t>();
    uint64_t i = ce.at("i").get<uint64_t>();
    auto bottom = u64s(ce.at("bottom"));
    std::vector<uint64_t> br(bottom.begin() + 1, bottom.end());
    auto lower = shifted_down(br);
    return bindet_eval({run_without(x, x + d, x + i), bottom}) !=
           bindet_eval({run_without(x, x + d - 1, x + i - 1), lower}) +
               bindet_eval({run_without(x, x + d - 1, x + i), lower});
  }
  uint64_t d = ce.at("d").get<uint64_t>(), i = ce.at("i").get<uint64_t>();
  FamilyIndex idx{static_cast<uint32_t>(d), static_cast<uint32_t>(i)};
  BigInt det = bindet_eval(family_tuples(idx));
  if (id == "closed_form") return det != family_closed_form(idx);
  if (id == "normalization" || id == "pascal") {
    if (id == "pascal")
      return dprime_from_det(d, i) !=
             dprime_from_det(d - 1, i - 1) + dprime_from_det(d - 1, i);
    int64_t e = static_cast<int64_t>(d * (d - 1) / 2) - static_cast<int64_t>(i);
    BigRat rhs = e >= 0 ? BigRat(pow2(static_cast<uint64_t>(e)) * family_normalized(idx))
                        : BigRat(family_normalized(idx), pow2(static_cast<uint64_t>(-e)));
    rhs.canonicalize();
    return BigRat(det) != rhs;
  }
  if (id == "recurrence") return BigRat(det) != family_recurrence_rhs(idx);
  if (id == "prime_factor_bound") {
    BigInt rest = det;
    for (uint64_t q : primes_up_to(2 * d))
      while (rest % static_cast<unsigned long>(q) == 0) rest /= static_cast<unsigned long>(q);
    return rest != 1;
  }
  fail(ErrorCode::invalid_argument, "unknown determinant identity: " + id);
}

bool replay_background(const Json& ce) {
  Modulus m = Modulus::checked(ce.at("p").get<uint64_t>());
  const std::string family = ce.at("family").get<std::string>();
  if (family == "cauchy_davenport") {
    auto a = u64s(ce.at("a")), b = u64s(ce.at("b"));
    uint64_t card = sumset(ResidueSet::of(m, a), ResidueSet::of(m, b)).cardinality();
    return card < std::min(m.p, a.size() + b.size() - 1);
  }
  if (family == "distinct_summands") {
    auto a = u64s(ce.at("a"));
    uint64_t h = ce.at("h").get<uint64_t>();
    uint64_t card = restricted_power(ResidueSet::of(m, a), h).cardinality();
    return card < std::min(m.p, h * (a.size() - h) + 1);
  }
  if (family == "nonopposite_summands") {
    std::vector<std::vector<uint64_t>> sets;
    for (const auto& s : ce.at("sets")) sets.push_back(u64s(s));
    return nonopposite_sum_count(sets, m.p) < ce.at("t").get<uint64_t>() + 1;
  }
  if (family == "distinct_images") {
    std::vector<ResidueSet> sets;
    std::vector<MonicPoly> polys;
    for (const auto& s : ce.at("sets")) sets.push_back(ResidueSet::of(m, u64s(s)));
    for (const auto& q : ce.at("polys")) polys.emplace_back(m, u64s(q));
    LiuSunVerdict lv = liu_sun_verdict(sets, polys);
    return !lv.holds;
  }
  fail(ErrorCode::invalid_argument, "unknown background family: " + family);
}

}  // namespace

bool replay_counterexample(const Verdict& v) {
  if (v.counterexample.is_null())
    fail(ErrorCode::invalid_argument, "verdict carries no counterexample");
  const Json& ce = v.counterexample;
  if (v.claim == "subsum.main_theorem") return replay_main(ce);
  if (v.claim == "subsum.sequence_theorem") return replay_sequence(ce);
  if (v.claim == "subsum.structural_multiplicity") return replay_structural(ce);
  if (v.claim == "subsum.selfridge")
    return !verify_selfridge(Modulus::checked(ce.at("p").get<uint64_t>())).holds;
  if (v.claim == "subsum.acr")
    return !verify_acr(Modulus::checked(ce.at("p").get<uint64_t>())).holds;
  if (v.claim == "poly.key_expansion") return replay_expansion(ce);
  if (v.claim == "det.identities") return replay_det(ce);
  if (v.claim == "background.bounds") return replay_background(ce);
  fail(ErrorCode::invalid_argument, "unknown claim: " + v.claim);
}

// ------------------------------------------------------------------ sweeps

namespace {

Json config_echo(const Config& cfg) {
  return Json{{"budget", cfg.budget},
              {"jobs", cfg.jobs},
              {"seed", cfg.seed},
              {"symmetry_reduction", cfg.symmetry_reduction}};
}

template <class Fn>
void attempt(SweepReport& rep, const std::string& claim, Json params, Fn&& fn) {
  try {
    Verdict v = fn();
    rep.pass = rep.pass && v.holds;
    rep.verdicts.push_back(std::move(v));
  } catch (const BudgetError& e) {
    rep.refusals.push_back({claim, std::move(params), e.required(), e.budget(), e.what()});
  }
}

}  // namespace

SweepReport selfridge_sweep(uint64_t max_p, const Config& cfg) {
  SweepReport rep;
  rep.command = "selfridge";
  rep.params = config_echo(cfg);
  rep.params["max_p"] = max_p;
  for (uint64_t p : primes_up_to(max_p)) {
    Modulus m = Modulus::checked(p);
    attempt(rep, "subsum.selfridge", Json{{"p", p}},
            [&] { return verify_selfridge(m, cfg); });
  }
  return rep;
}

SweepReport acr_sweep(uint64_t max_p, const Config& cfg) {
  SweepReport rep;
  rep.command = "acr";
  rep.params = config_echo(cfg);
  rep.params["max_p"] = max_p;
  for (uint64_t p : primes_up_to(max_p)) {
    Modulus m = Modulus::checked(p);
    attempt(rep, "subsum.acr", Json{{"p", p}}, [&] { return verify_acr(m, cfg); });
  }
  return rep;
}

SweepReport verify_all(uint64_t max_p, const Config& cfg) {
  SweepReport rep;
  rep.command = "verify-all";
  rep.params = config_echo(cfg);
  rep.params["max_p"] = max_p;

  attempt(rep, "det.identities", Json{{"max_d", 12}},
          [&] { return verify_det_identities(12, 200, cfg); });

  const std::vector<uint64_t> expansion_primes = {5, 7, 11, 13};
  for (uint64_t p : expansion_primes) {
    if (p > max_p) continue;
    Modulus m = Modulus::checked(p);
    attempt(rep, "poly.key_expansion", Json{{"p", p}},
            [&] { return verify_key_expansion_grid(m, 4, 6, cfg); });
  }

  for (uint64_t p : primes_up_to(max_p)) {
    if (p == 2) continue;
    Modulus m = Modulus::checked(p);
    attempt(rep, "subsum.main_theorem", Json{{"p", p}},
            [&] { return verify_main_theorem(m, cfg); });
  }

  for (uint64_t p : expansion_primes) {
    if (p > max_p) continue;
    Modulus m = Modulus::checked(p);
    attempt(rep, "subsum.sequence_theorem", Json{{"p", p}, {"max_len", 7}},
            [&] { return verify_sequence_theorem(m, 7, cfg); });
  }

  for (uint64_t p : {uint64_t{5}, uint64_t{7}, uint64_t{11}}) {
    if (p > max_p) continue;
    Modulus m = Modulus::checked(p);
    attempt(rep, "subsum.structural_multiplicity",
            Json{{"p", p}, {"max_len", p - 1}, {"k_max", 3}},
            [&] { return verify_structural_multiplicity(m, p - 1, 3, cfg); });
  }

  for (uint64_t p : primes_up_to(max_p)) {
    Modulus m = Modulus::checked(p);
    attempt(rep, "subsum.selfridge", Json{{"p", p}},
            [&] { return verify_selfridge(m, cfg); });
  }

  for (uint64_t p : primes_up_to(max_p)) {
    Modulus m = Modulus::checked(p);
    attempt(rep, "subsum.acr", Json{{"p", p}}, [&] { return verify_acr(m, cfg); });
  }

  for (uint64_t p : primes_up_to(std::min<uint64_t>(max_p, 13))) {
    Modulus m = Modulus::checked(p);
    uint64_t trials = p >= 5 ? 250 : 0;
    attempt(rep, "background.bounds", Json{{"p", p}},
            [&] { return verify_background(m, BackgroundMode::exhaustive, trials, cfg); });
  }

  return rep;
}

// --------------------------------------------------------------- rendering

Json verdict_to_json(const Verdict& v) {
  return Json{{"claim", v.claim},
              {"params", v.params},
              {"holds", v.holds},
              {"applicable", v.applicable},
              {"instances_checked", v.instances_checked},
              {"counterexample", v.counterexample},
              {"detail", v.detail},
              {"elapsed_ms", v.elapsed_ms}};
}

Json report_to_json(const SweepReport& r) {
  Json verdicts = Json::array();
  for (const Verdict& v : r.verdicts) verdicts.push_back(verdict_to_json(v));
  Json refusals = Json::array();
  for (const Refusal& f : r.refusals)
    refusals.push_back(Json{{"claim", f.claim},
                            {"params", f.params},
                            {"required_budget", f.required_budget},
                            {"budget", f.budget},
                            {"message", f.message}});
  return Json{{"command", r.command},
              {"params", r.params},
              {"verdicts", verdicts},
              {"refusals", refusals},
              {"pass", r.pass}};
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';  // RFC 4180 doubling
    out += c;
  }
  out += "\"";
  return out;
}

// Compact k=v rendering of the scalar parameters, for the text report.
std::string params_brief(const Json& params) {
  std::string out;
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!it.value().is_primitive()) continue;
    if (!out.empty()) out += " ";
    out += it.key();
    out += "=";
    out += it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
  }
  return out;
}

}  // namespace

std::string report_to_csv(const SweepReport& r) {
  std::ostringstream out;
  out << "status,claim,holds,applicable,instances_checked,elapsed_ms,params,counterexample\n";
  for (const Verdict& v : r.verdicts) {
    const char* status = !v.applicable ? "na" : v.holds ? "ok" : "fail";
    out << status << ',' << v.claim << ',' << (v.holds ? "true" : "false") << ','
        << (v.applicable ? "true" : "false") << ',' << v.instances_checked << ','
        << v.elapsed_ms << ',' << csv_quote(v.params.dump()) << ','
        << csv_quote(v.counterexample.is_null() ? "" : v.counterexample.dump()) << '\n';
  }
  for (const Refusal& f : r.refusals) {
    Json params = f.params;
    params["required_budget"] = f.required_budget;
    params["budget"] = f.budget;
    out << "refused," << f.claim << ",,,0,0," << csv_quote(params.dump()) << ",\n";
  }
  return out.str();
}

std::string report_to_text(const SweepReport& r) {
  std::ostringstream out;
  out << "command: " << r.command << "\n";
  out << "params: " << r.params.dump() << "\n";
  uint64_t ok = 0, failed = 0, na = 0;
  for (const Verdict& v : r.verdicts) {
    const char* status = !v.applicable ? "na  " : v.holds ? "ok  " : "FAIL";
    (!v.applicable ? na : v.holds ? ok : failed) += 1;
    out << "  " << status << "  ";
    out.width(34);
    out << std::left << v.claim;
    out.width(0);
    std::string brief = params_brief(v.params);
    out << " " << brief;
    out << "  instances=" << v.instances_checked;
    char buf[32];
    snprintf(buf, sizeof buf, "%.1f", v.elapsed_ms);
    out << "  " << buf << " ms";
    if (!v.holds && !v.counterexample.is_null())
      out << "\n        counterexample: " << v.counterexample.dump();
    out << "\n";
  }
  for (const Refusal& f : r.refusals) {
    out << "  REFUSED  " << f.claim << " " << params_brief(f.params)
        << "  needs budget " << f.required_budget << " (have " << f.budget << ")\n";
  }
  out << "pass: " << (r.pass ? "true" : "false") << " (" << ok << " ok, " << failed
      << " fail, " << na << " na, " << r.refusals.size() << " refused)\n";
  return out.str();
}

int report_exit_code(const SweepReport& r) {
  if (!r.pass) return 1;
  if (!r.refusals.empty()) return 3;
  return 0;
}

}  // namespace sigmalab::verify
