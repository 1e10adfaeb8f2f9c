#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "modulus.hpp"

namespace sigmalab::verify {

using Json = nlohmann::json;

// Shared knobs for every verification operation. budget = 0 resolves to
// SIGMA_LAB_BUDGET when set, else to the operation's builtin default
// (3^14 instances for the main-theorem sweep, 3^15 for the searches and
// multiset sweeps, 2^28 pair evaluations for the exhaustive background
// bounds). seed drives every sampled instance family.
struct Config {
  uint64_t budget = 0;
  uint32_t jobs = 1;  // sweep fan-out; merges are slicing-invariant
  uint64_t seed = 1;
  bool symmetry_reduction = false;  // enumerate scaling-orbit representatives
};

// Outcome of checking one claim at one parameter point. When the claim's
// hypotheses exclude the parameters (for example the asymmetric critical
// number below p = 7), applicable is false and holds records the vacuous
// truth; instances_checked then counts the exhaustive confirmation that the
// hypotheses indeed fail.
struct Verdict {
  std::string claim;
  Json params = Json::object();
  bool holds = false;
  bool applicable = true;
  uint64_t instances_checked = 0;
  Json counterexample;  // null unless holds is false
  Json detail = Json::object();
  double elapsed_ms = 0.0;
};

// A claim that was not attempted because its instance estimate exceeds the
// effective budget. Kept apart from verdicts: nothing was checked.
struct Refusal {
  std::string claim;
  Json params = Json::object();
  uint64_t required_budget = 0;
  uint64_t budget = 0;
  std::string message;
};

struct SweepReport {
  std::string command;
  Json params = Json::object();  // config echo
  std::vector<Verdict> verdicts;
  std::vector<Refusal> refusals;
  bool pass = true;  // every verdict holds; refusals tracked separately
};

Json verdict_to_json(const Verdict& v);
Json report_to_json(const SweepReport& r);
std::string report_to_csv(const SweepReport& r);
std::string report_to_text(const SweepReport& r);

// 0 all hold, 1 counterexample, 3 at least one refusal (and no failure).
int report_exit_code(const SweepReport& r);

// Exhaustive scan of all asymmetric subsets of Z/pZ (per pair {x, -x}:
// absent / x / -x), checking the two subsum lower bounds
//   |Sigma(A)|  >= min{p, 1 + |A|(|A|+1)/2}
//   |Sigma*(A)| >= min{p, |A|(|A|+1)/2}
// and Olson's bound |Sigma(A)| >= min{(p+3)/2, |A|(|A|+1)/2}. Odd p only.
// Records minimum slacks and the tightest witness.
Verdict verify_main_theorem(Modulus m, const Config& cfg = {});

// Exhaustive scan of all multisets over (Z/pZ)* of length <= max_len,
// checking the sequence bounds with B = sum i * l_i over the descending
// common pair multiplicities l_1 >= l_2 >= ...:
//   |Sigma(S)| >= min{p, 1 + B},  |Sigma*(S)| >= min{p, B}.
Verdict verify_sequence_theorem(Modulus m, uint64_t max_len, const Config& cfg = {});

// For every zero-sum-free multiset S with |S| <= max_len and every
// k in [1, k_max]: some element has multiplicity >=
// ceil((2(k+1)|S| - 2(p-1)) / (k(k+1))). Also checks the |S| = p-1
// corollary: such a multiset is p-1 copies of one element.
Verdict verify_structural_multiplicity(Modulus m, uint64_t max_len, uint64_t k_max,
                                       const Config& cfg = {});

// Exhaustive maximum zero-sum-free set size equals the greatest k with
// k(k+1)/2 < p; the returned witness is revalidated through the generic
// bit-vector kernel.
Verdict verify_selfridge(Modulus m, const Config& cfg = {});

// Exhaustive asymmetric critical number equals the least s with
// s(s+1)/2 >= p - 1. For p < 7 the number is undefined; the verdict is
// not-applicable and instead confirms undefinedness by exhaustion (even a
// largest asymmetric set leaves Sigma short of the full group).
Verdict verify_acr(Modulus m, const Config& cfg = {});

// The whole determinant identity suite in one verdict: the closed form
// 2^(d(d-1)/2-i) C(d,i) (d+i)/d, the normalization C(d,i) + C(d-1,i-1),
// the Pascal recurrence on normalized values, the two-term recurrence, the
// prime-factor bound (no factor exceeds 2d), and the three reduction
// identities on seeded random tuples (trials_per_lemma instances each).
Verdict verify_det_identities(uint64_t max_d, uint64_t trials_per_lemma = 200,
                              const Config& cfg = {});

// Two-sided coefficient comparison for the expansion of
// (X_0+...+X_{d-1})^t * prod_{i<j} (X_j^2 - X_i^2) mod p: over every
// exponent vector b with sum = t + d(d-1) and max < p, the coefficient
// equals t! prod (2i)! / prod b_i! * det[C(b_i, 2j)] mod p. Monomials with
// an exponent >= p carry no claim; their count is reported in detail.
Verdict verify_key_expansion(uint64_t d, uint64_t t, Modulus m, const Config& cfg = {});

// The same comparison over the whole grid d <= max_d, t <= min(max_t, p-1),
// aggregated into one verdict for the sweep report.
Verdict verify_key_expansion_grid(Modulus m, uint64_t max_d, uint64_t max_t,
                                  const Config& cfg = {});

enum class BackgroundMode { exhaustive, sampled };

// The supporting bounds in one verdict: Cauchy-Davenport
// |A+B| >= min{p, |A|+|B|-1} and the distinct-summands bound
// |h^A| >= min{p, h(|A|-h)+1}, exhaustively over all subsets for p <= 13
// (mode exhaustive) or on seeded random instances (mode sampled); plus, for
// p >= 3, `trials` seeded admissible instances each of the
// non-opposite-summands bound (pairwise x_i != +-x_j under a determinant
// hypothesis mod p) and of the distinct-images sumset bound.
Verdict verify_background(Modulus m, BackgroundMode mode, uint64_t trials,
                          const Config& cfg = {});

// Recomputes the verdict's recorded counterexample through the underlying
// operation in isolation; true iff the instance still violates the claim.
bool replay_counterexample(const Verdict& v);

SweepReport selfridge_sweep(uint64_t max_p, const Config& cfg = {});
SweepReport acr_sweep(uint64_t max_p, const Config& cfg = {});

// The full battery: determinant identities, expansion grids over
// p in {5,7,11,13}, main-theorem sweeps over odd primes <= max_p, sequence
// and structural-multiplicity sweeps, maximum zero-sum-free sizes, the
// asymmetric critical number, and the background bounds. Claims whose
// estimate exceeds the effective budget become refusals, never silent skips.
SweepReport verify_all(uint64_t max_p, const Config& cfg = {});

}  // namespace sigmalab::verify
