/*
 * C interface to the sigmalab core: exact binomial determinants, polynomial
 * coefficient certificates, and subsum-set verification over Z/pZ.
 *
 * Conventions:
 *   - Every fallible call returns a sigmalab_status; SIGMALAB_OK is 0.
 *   - On failure, sigmalab_last_error() returns a message for the calling
 *     thread, valid until that thread's next failing call.
 *   - Calls that produce text write a malloc'd NUL-terminated string to
 *     *out; release it with sigmalab_string_free(). Outputs are untouched
 *     on failure.
 *   - Report-producing calls emit a JSON envelope with the fixed keys
 *     {command, params, verdicts, refusals, result, pass}. Big integers
 *     are decimal strings. A claim whose estimated instance count exceeds
 *     the budget becomes a row in "refusals" rather than an error.
 *   - budget = 0 means the built-in default for the operation, unless the
 *     SIGMA_LAB_BUDGET environment variable overrides it.
 */

#ifndef SIGMALAB_H
#define SIGMALAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sigmalab_status {
  SIGMALAB_OK = 0,
  SIGMALAB_ERR_ARGUMENT = 1,  /* malformed input (bad JSON, null pointer, ...) */
  SIGMALAB_ERR_NOT_PRIME = 2, /* modulus failed the primality check */
  SIGMALAB_ERR_DOMAIN = 3,    /* input outside the mathematical domain */
  SIGMALAB_ERR_MISMATCH = 4,  /* operands disagree (moduli, arities, ...) */
  SIGMALAB_ERR_UNDEFINED = 5, /* the requested quantity does not exist */
  SIGMALAB_ERR_BUDGET = 6,    /* instance estimate exceeds the budget */
  SIGMALAB_ERR_INTERNAL = 7
} sigmalab_status;

const char* sigmalab_version(void);

/* Message for this thread's most recent failure; never NULL. */
const char* sigmalab_last_error(void);

void sigmalab_string_free(char* s);

/* Built-in search budget after applying SIGMA_LAB_BUDGET. */
uint64_t sigmalab_default_budget(void);

/* ------------------------------------------------------------------ */
/* Binomial determinants                                               */

/* det of the n x n matrix [ C(top[r], bottom[c]) ], decimal string out. */
sigmalab_status sigmalab_bindet(const uint64_t* top, const uint64_t* bottom,
                                size_t n, char** det_out);

/*
 * Report on the family member (d, i), 1 <= d, 0 <= i <= d: determinant,
 * normalized value, closed form, and the recurrence cross-check, as a JSON
 * envelope whose "result" object holds the values.
 */
sigmalab_status sigmalab_family_report(uint32_t d, uint32_t i, char** json_out);

/* ------------------------------------------------------------------ */
/* Polynomial certificates                                             */

/*
 * Compare predicted against expanded coefficients of
 * (X_0+...+X_{d-1})^t * prod_{i<j}(X_j^2 - X_i^2) mod p, over all exponent
 * vectors with sum t + d(d-1) and every entry < p. One-verdict envelope.
 */
sigmalab_status sigmalab_expand_check(uint32_t d, uint32_t t, uint64_t p,
                                      uint64_t budget, char** json_out);

/*
 * Coefficient certificate for a restricted sumset, instance JSON in:
 *   {"p": 13, "sets": [[0,1],[2,5],...], "r": [[[1,0,...], 3], ...]}
 * where "r" lists [exponent vector, coefficient] terms of the restriction
 * polynomial (arity = number of sets). One-verdict envelope out.
 */
sigmalab_status sigmalab_anr_check(const char* instance_json, char** json_out);

/*
 * Distinct-images sumset bound, instance JSON in:
 *   {"p": 13, "sets": [[...], ...], "polys": [[c0, ..., c_{m-1}], ...]}
 * where each coefficient list gives the lower coefficients of a monic
 * degree-m polynomial (all degrees equal). One-verdict envelope out; an
 * instance that violates the hypotheses yields applicable = false.
 */
sigmalab_status sigmalab_liusun_check(const char* instance_json, char** json_out);

/* ------------------------------------------------------------------ */
/* Subsum sets over Z/pZ                                               */

typedef struct sigmalab_set sigmalab_set;   /* subset of Z/pZ */
typedef struct sigmalab_mset sigmalab_mset; /* multiset over (Z/pZ)* */

sigmalab_status sigmalab_set_new(uint64_t p, const uint64_t* elems, size_t n,
                                 sigmalab_set** out);
void sigmalab_set_free(sigmalab_set* s);

/* n parallel arrays: counts[i] copies of values[i]; counts of 0 are skipped. */
sigmalab_status sigmalab_mset_new(uint64_t p, const uint64_t* values,
                                  const uint64_t* counts, size_t n,
                                  sigmalab_mset** out);
void sigmalab_mset_free(sigmalab_mset* s);

/*
 * Sigma / Sigma* of a set with cardinalities and, for asymmetric sets, the
 * subsum lower-bound comparison. Envelope with "result" out.
 */
sigmalab_status sigmalab_subsums_report(const sigmalab_set* s, char** json_out);

/* Same for a multiset, against the weighted sequence bound. */
sigmalab_status sigmalab_msubsums_report(const sigmalab_mset* s, char** json_out);

/* ------------------------------------------------------------------ */
/* Exhaustive verification                                             */

/*
 * Search ops on a single prime; one-verdict envelope out.
 * symmetry_reduction != 0 scans one representative per scaling orbit.
 */
sigmalab_status sigmalab_max_zero_sum_free(uint64_t p, uint64_t budget,
                                           int symmetry_reduction, char** json_out);
sigmalab_status sigmalab_acr(uint64_t p, uint64_t budget, int symmetry_reduction,
                             char** json_out);

/* Sweeps over every prime <= max_p. */
sigmalab_status sigmalab_selfridge_sweep(uint64_t max_p, uint64_t budget,
                                         uint32_t jobs, int symmetry_reduction,
                                         char** json_out);
sigmalab_status sigmalab_acr_sweep(uint64_t max_p, uint64_t budget, uint32_t jobs,
                                   int symmetry_reduction, char** json_out);

/* The full battery across every claim family. */
sigmalab_status sigmalab_verify_all(uint64_t max_p, uint64_t budget, uint32_t jobs,
                                    uint64_t seed, int symmetry_reduction,
                                    char** json_out);

/* ------------------------------------------------------------------ */
/* Report utilities                                                    */

/* Render an envelope to "text", "csv", or "json" (pretty-printed). */
sigmalab_status sigmalab_report_render(const char* report_json, const char* format,
                                       char** out);

/*
 * Process exit code for an envelope: 0 all verdicts hold, 1 some verdict
 * failed, 3 refusals only. Returns -1 on malformed input.
 */
int sigmalab_report_exit_code(const char* report_json);

#ifdef __cplusplus
}
#endif

#endif /* SIGMALAB_H */
