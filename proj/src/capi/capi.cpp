#include <sigmalab/sigmalab.h>

#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "core/bindet.hpp"
#include "core/errors.hpp"
#include "core/exactmath.hpp"
#include "core/modulus.hpp"
#include "core/polyring.hpp"
#include "core/subsums.hpp"
#include "core/verify.hpp"

using sigmalab::BigInt;
using sigmalab::BigRat;
using sigmalab::ErrorCode;
using sigmalab::Modulus;
using sigmalab::Multiset;
using sigmalab::ResidueSet;
using Json = nlohmann::json;

struct sigmalab_set {
  ResidueSet set;
};

struct sigmalab_mset {
  Multiset mset;
};

namespace {

thread_local std::string g_last_error;

sigmalab_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return SIGMALAB_ERR_ARGUMENT;
    case ErrorCode::not_prime: return SIGMALAB_ERR_NOT_PRIME;
    case ErrorCode::domain: return SIGMALAB_ERR_DOMAIN;
    case ErrorCode::mismatch: return SIGMALAB_ERR_MISMATCH;
    case ErrorCode::undefined: return SIGMALAB_ERR_UNDEFINED;
    case ErrorCode::budget: return SIGMALAB_ERR_BUDGET;
    case ErrorCode::internal: return SIGMALAB_ERR_INTERNAL;
  }
  return SIGMALAB_ERR_INTERNAL;
}

template <class Fn>
sigmalab_status guarded(Fn&& fn) {
  try {
    fn();
    return SIGMALAB_OK;
  } catch (const sigmalab::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return SIGMALAB_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SIGMALAB_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const Json& j) { *out = dup_string(j.dump()); }

void require(bool ok, const char* what) {
  if (!ok) sigmalab::fail(ErrorCode::invalid_argument, what);
}

// Envelope with empty verdict lists, for commands that print values rather
// than check claims. Keys match the verdict envelopes exactly.
Json result_envelope(const char* command, Json params, Json result, bool pass) {
  return Json{{"command", command},      {"params", std::move(params)},
              {"verdicts", Json::array()}, {"refusals", Json::array()},
              {"result", std::move(result)}, {"pass", pass}};
}

// One-verdict envelope; a budget refusal becomes a refusal row, not an error.
Json single_envelope(const char* command, Json params, const std::string& claim,
                     const std::function<sigmalab::verify::Verdict()>& fn) {
  sigmalab::verify::SweepReport rep;
  rep.command = command;
  rep.params = params;
  try {
    sigmalab::verify::Verdict v = fn();
    rep.pass = v.holds;
    rep.verdicts.push_back(std::move(v));
  } catch (const sigmalab::BudgetError& e) {
    rep.refusals.push_back({claim, std::move(params), e.required(), e.budget(), e.what()});
  }
  Json j = sigmalab::verify::report_to_json(rep);
  j["result"] = nullptr;
  return j;
}

Json sweep_envelope(const sigmalab::verify::SweepReport& rep) {
  Json j = sigmalab::verify::report_to_json(rep);
  j["result"] = nullptr;
  return j;
}

sigmalab::verify::Config make_config(uint64_t budget, uint32_t jobs, uint64_t seed,
                                     int symmetry_reduction) {
  sigmalab::verify::Config cfg;
  cfg.budget = budget;
  cfg.jobs = jobs ? jobs : 1;
  cfg.seed = seed;
  cfg.symmetry_reduction = symmetry_reduction != 0;
  return cfg;
}

uint64_t tri_capped(uint64_t k, uint64_t cap) {  // min(cap, k(k+1)/2 [+1 shift below])
  unsigned __int128 half = static_cast<unsigned __int128>(k) * (k + 1) / 2;
  return half > cap ? cap : static_cast<uint64_t>(half);
}

std::vector<ResidueSet> parse_sets(Modulus m, const Json& arr) {
  require(arr.is_array() && !arr.empty(), "\"sets\" must be a nonempty array");
  std::vector<ResidueSet> sets;
  for (const Json& sj : arr)
    sets.push_back(ResidueSet::of(m, sj.get<std::vector<uint64_t>>()));
  return sets;
}

Json sets_echo(const std::vector<ResidueSet>& sets) {
  Json arr = Json::array();
  for (const ResidueSet& s : sets) arr.push_back(s.elements());
  return arr;
}

sigmalab::verify::SweepReport parse_report(const Json& j) {
  sigmalab::verify::SweepReport rep;
  rep.command = j.at("command").get<std::string>();
  rep.params = j.at("params");
  for (const Json& vj : j.at("verdicts")) {
    sigmalab::verify::Verdict v;
    v.claim = vj.at("claim").get<std::string>();
    v.params = vj.at("params");
    v.holds = vj.at("holds").get<bool>();
    v.applicable = vj.at("applicable").get<bool>();
    v.instances_checked = vj.at("instances_checked").get<uint64_t>();
    v.counterexample = vj.at("counterexample");
    v.detail = vj.at("detail");
    v.elapsed_ms = vj.at("elapsed_ms").get<double>();
    rep.verdicts.push_back(std::move(v));
  }
  for (const Json& fj : j.at("refusals")) {
    sigmalab::verify::Refusal f;
    f.claim = fj.at("claim").get<std::string>();
    f.params = fj.at("params");
    f.required_budget = fj.at("required_budget").get<uint64_t>();
    f.budget = fj.at("budget").get<uint64_t>();
    f.message = fj.at("message").get<std::string>();
    rep.refusals.push_back(std::move(f));
  }
  rep.pass = j.at("pass").get<bool>();
  return rep;
}

}  // namespace

extern "C" {

const char* sigmalab_version(void) { return "0.1.0"; }

const char* sigmalab_last_error(void) { return g_last_error.c_str(); }

void sigmalab_string_free(char* s) { std::free(s); }

uint64_t sigmalab_default_budget(void) { return sigmalab::default_instance_budget(); }

sigmalab_status sigmalab_bindet(const uint64_t* top, const uint64_t* bottom, size_t n,
                                char** det_out) {
  return guarded([&] {
    require(top && bottom && det_out, "null argument");
    require(n > 0, "matrix dimension must be positive");
    sigmalab::BinDet bd;
    bd.top.assign(top, top + n);
    bd.bottom.assign(bottom, bottom + n);
    *det_out = dup_string(sigmalab::bindet_eval(bd).get_str());
  });
}

sigmalab_status sigmalab_family_report(uint32_t d, uint32_t i, char** json_out) {
  return guarded([&] {
    require(json_out, "null argument");
    sigmalab::FamilyIndex idx{d, i};
    BigInt det = sigmalab::bindet_eval(sigmalab::family_tuples(idx));
    BigInt closed = sigmalab::family_closed_form(idx);
    BigInt norm = sigmalab::family_normalized(idx);
    int64_t e = static_cast<int64_t>(static_cast<uint64_t>(d) * (d - 1) / 2) -
                static_cast<int64_t>(i);
    BigRat norm_from_det = e >= 0
        ? BigRat(det, sigmalab::pow2(static_cast<uint64_t>(e)))
        : BigRat(det * sigmalab::pow2(static_cast<uint64_t>(-e)));
    norm_from_det.canonicalize();
    bool norm_ok = norm_from_det == BigRat(norm);

    bool rec_applicable = d >= 2 && i >= 1;
    bool rec_ok = true;
    if (rec_applicable) rec_ok = BigRat(det) == sigmalab::family_recurrence_rhs(idx);

    bool pass = det == closed && norm_ok && rec_ok;
    Json result{{"d", d},
                {"i", i},
                {"determinant", det.get_str()},
                {"closed_form", closed.get_str()},
                {"closed_form_matches", det == closed},
                {"normalized", norm.get_str()},
                {"pow2_exponent", e},
                {"normalization_matches", norm_ok},
                {"recurrence", Json{{"applicable", rec_applicable}, {"matches", rec_ok}}}};
    emit(json_out, result_envelope("bindet", Json{{"d", d}, {"i", i}}, result, pass));
  });
}

sigmalab_status sigmalab_expand_check(uint32_t d, uint32_t t, uint64_t p, uint64_t budget,
                                      char** json_out) {
  return guarded([&] {
    require(json_out, "null argument");
    Modulus m = Modulus::checked(p);
    auto cfg = make_config(budget, 1, 1, 0);
    Json params{{"d", d}, {"t", t}, {"p", p}};
    emit(json_out, single_envelope("expand-check", params, "poly.key_expansion", [&] {
           return sigmalab::verify::verify_key_expansion(d, t, m, cfg);
         }));
  });
}

sigmalab_status sigmalab_anr_check(const char* instance_json, char** json_out) {
  return guarded([&] {
    require(instance_json && json_out, "null argument");
    Json inst = Json::parse(instance_json);
    Modulus m = Modulus::checked(inst.at("p").get<uint64_t>());
    std::vector<ResidueSet> sets = parse_sets(m, inst.at("sets"));
    const uint32_t d = static_cast<uint32_t>(sets.size());
    sigmalab::SparsePoly r(m, d);
    for (const Json& term : inst.at("r")) {
      auto ev = term.at(0).get<std::vector<uint32_t>>();
      require(ev.size() == d, "exponent vector arity != number of sets");
      r.add_term(sigmalab::ExpVec(ev.begin(), ev.end()), term.at(1).get<uint64_t>());
    }

    sigmalab::AnrVerdict av = sigmalab::anr_verdict(sets, r);
    sigmalab::verify::Verdict v;
    v.claim = "poly.anr";
    Json sizes = Json::array();
    for (const ResidueSet& s : sets) sizes.push_back(s.cardinality());
    v.params = Json{{"p", m.p}, {"sizes", sizes}, {"deg_r", r.total_degree()}};
    v.holds = av.holds;
    v.instances_checked = 1;
    v.detail = Json{{"m", av.m},
                    {"coefficient", av.coefficient},
                    {"certified", av.coefficient != 0},
                    {"guaranteed_min", av.guaranteed_min},
                    {"witness_cardinality", av.witness_cardinality}};
    if (!v.holds)
      v.counterexample = Json{{"p", m.p}, {"sets", sets_echo(sets)}, {"r", inst.at("r")}};

    sigmalab::verify::SweepReport rep;
    rep.command = "anr";
    rep.params = Json{{"p", m.p}};
    rep.pass = v.holds;
    rep.verdicts.push_back(std::move(v));
    emit(json_out, sweep_envelope(rep));
  });
}

sigmalab_status sigmalab_liusun_check(const char* instance_json, char** json_out) {
  return guarded([&] {
    require(instance_json && json_out, "null argument");
    Json inst = Json::parse(instance_json);
    Modulus m = Modulus::checked(inst.at("p").get<uint64_t>());
    std::vector<ResidueSet> sets = parse_sets(m, inst.at("sets"));
    std::vector<sigmalab::MonicPoly> polys;
    for (const Json& pj : inst.at("polys"))
      polys.emplace_back(m, pj.get<std::vector<uint64_t>>());

    sigmalab::LiuSunVerdict lv = sigmalab::liu_sun_verdict(sets, polys);
    sigmalab::verify::Verdict v;
    v.claim = "poly.liu_sun";
    Json sizes = Json::array();
    for (const ResidueSet& s : sets) sizes.push_back(s.cardinality());
    v.params = Json{{"p", m.p},
                    {"sizes", sizes},
                    {"degree", polys.empty() ? 0 : polys[0].degree()}};
    v.applicable = lv.applicable;
    v.holds = lv.applicable ? lv.holds : true;
    v.instances_checked = 1;
    v.detail = Json{{"K", lv.K},
                    {"cardinality", lv.cardinality},
                    {"reason", lv.reason}};
    if (!v.holds)
      v.counterexample = Json{{"p", m.p},
                              {"sets", sets_echo(sets)},
                              {"polys", inst.at("polys")},
                              {"K", lv.K},
                              {"cardinality", lv.cardinality}};

    sigmalab::verify::SweepReport rep;
    rep.command = "liusun";
    rep.params = Json{{"p", m.p}};
    rep.pass = v.holds;
    rep.verdicts.push_back(std::move(v));
    emit(json_out, sweep_envelope(rep));
  });
}

sigmalab_status sigmalab_set_new(uint64_t p, const uint64_t* elems, size_t n,
                                 sigmalab_set** out) {
  return guarded([&] {
    require(out && (elems || n == 0), "null argument");
    Modulus m = Modulus::checked(p);
    ResidueSet s(m);
    for (size_t k = 0; k < n; ++k) s.insert(elems[k]);
    *out = new sigmalab_set{std::move(s)};
  });
}

void sigmalab_set_free(sigmalab_set* s) { delete s; }

sigmalab_status sigmalab_mset_new(uint64_t p, const uint64_t* values,
                                  const uint64_t* counts, size_t n, sigmalab_mset** out) {
  return guarded([&] {
    require(out && ((values && counts) || n == 0), "null argument");
    Modulus m = Modulus::checked(p);
    Multiset s(m);
    for (size_t k = 0; k < n; ++k) s.add(values[k], counts[k]);
    *out = new sigmalab_mset{std::move(s)};
  });
}

void sigmalab_mset_free(sigmalab_mset* s) { delete s; }

sigmalab_status sigmalab_subsums_report(const sigmalab_set* s, char** json_out) {
  return guarded([&] {
    require(s && json_out, "null argument");
    const ResidueSet& a = s->set;
    const uint64_t p = a.modulus().p;
    ResidueSet sig = sigma(a);
    ResidueSet star = sigma_star(a);
    uint64_t k = a.cardinality();

    bool asym = true;
    for (uint64_t x : a.elements())
      if (a.contains(sigmalab::neg_mod(x, p))) asym = false;

    Json bounds{{"applicable", asym}};
    bool bounds_hold = true;
    if (asym) {
      uint64_t b_sigma = tri_capped(k, p - 1) + 1;  // min(p, 1 + k(k+1)/2)
      uint64_t b_star = tri_capped(k, p);
      uint64_t b_olson = tri_capped(k, (p + 3) / 2);
      bounds_hold = sig.cardinality() >= b_sigma && star.cardinality() >= b_star &&
                    sig.cardinality() >= b_olson;
      bounds["sigma"] = b_sigma;
      bounds["sigma_star"] = b_star;
      bounds["olson"] = b_olson;
      bounds["hold"] = bounds_hold;
    }

    Json result{{"p", p},
                {"set", a.elements()},
                {"sigma", sig.elements()},
                {"sigma_star", star.elements()},
                {"cardinality_sigma", sig.cardinality()},
                {"cardinality_sigma_star", star.cardinality()},
                {"zero_sum_free", is_zero_sum_free(a)},
                {"asymmetric", asym},
                {"bounds", bounds}};
    emit(json_out, result_envelope("subsums", Json{{"p", p}, {"set", a.elements()}},
                                   result, bounds_hold));
  });
}

sigmalab_status sigmalab_msubsums_report(const sigmalab_mset* s, char** json_out) {
  return guarded([&] {
    require(s && json_out, "null argument");
    const Multiset& a = s->mset;
    const uint64_t p = a.modulus().p;
    ResidueSet sig = sigma(a);
    ResidueSet star = sigma_star(a);
    std::vector<uint64_t> l = a.common_multiplicities();
    unsigned __int128 weighted = 0;
    for (uint64_t i = 0; i < l.size(); ++i)
      weighted += static_cast<unsigned __int128>(i + 1) * l[i];
    uint64_t b_star = weighted > p ? p : static_cast<uint64_t>(weighted);
    uint64_t b_sigma = weighted + 1 > p ? p : static_cast<uint64_t>(weighted) + 1;
    bool hold = sig.cardinality() >= b_sigma && star.cardinality() >= b_star;

    Json mj = Json::array();
    for (const auto& [r, c] : a.entries()) mj.push_back(Json::array({r, c}));
    Json result{{"p", p},
                {"multiset", mj},
                {"length", a.length()},
                {"sigma", sig.elements()},
                {"sigma_star", star.elements()},
                {"cardinality_sigma", sig.cardinality()},
                {"cardinality_sigma_star", star.cardinality()},
                {"zero_sum_free", is_zero_sum_free(a)},
                {"pair_multiplicities", l},
                {"bounds", Json{{"applicable", true},
                                {"sigma", b_sigma},
                                {"sigma_star", b_star},
                                {"hold", hold}}}};
    emit(json_out,
         result_envelope("subsums", Json{{"p", p}, {"multiset", mj}}, result, hold));
  });
}

sigmalab_status sigmalab_max_zero_sum_free(uint64_t p, uint64_t budget,
                                           int symmetry_reduction, char** json_out) {
  return guarded([&] {
    require(json_out, "null argument");
    Modulus m = Modulus::checked(p);
    auto cfg = make_config(budget, 1, 1, symmetry_reduction);
    emit(json_out, single_envelope("selfridge", Json{{"p", p}}, "subsum.selfridge", [&] {
           return sigmalab::verify::verify_selfridge(m, cfg);
         }));
  });
}

sigmalab_status sigmalab_acr(uint64_t p, uint64_t budget, int symmetry_reduction,
                             char** json_out) {
  return guarded([&] {
    require(json_out, "null argument");
    Modulus m = Modulus::checked(p);
    auto cfg = make_config(budget, 1, 1, symmetry_reduction);
    emit(json_out, single_envelope("acr", Json{{"p", p}}, "subsum.acr", [&] {
           return sigmalab::verify::verify_acr(m, cfg);
         }));
  });
}

sigmalab_status sigmalab_selfridge_sweep(uint64_t max_p, uint64_t budget, uint32_t jobs,
                                         int symmetry_reduction, char** json_out) {
  return guarded([&] {
    require(json_out, "null argument");
    auto cfg = make_config(budget, jobs, 1, symmetry_reduction);
    emit(json_out, sweep_envelope(sigmalab::verify::selfridge_sweep(max_p, cfg)));
  });
}

sigmalab_status sigmalab_acr_sweep(uint64_t max_p, uint64_t budget, uint32_t jobs,
                                   int symmetry_reduction, char** json_out) {
  return guarded([&] {
    require(json_out, "null argument");
    auto cfg = make_config(budget, jobs, 1, symmetry_reduction);
    emit(json_out, sweep_envelope(sigmalab::verify::acr_sweep(max_p, cfg)));
  });
}

sigmalab_status sigmalab_verify_all(uint64_t max_p, uint64_t budget, uint32_t jobs,
                                    uint64_t seed, int symmetry_reduction,
                                    char** json_out) {
  return guarded([&] {
    require(json_out, "null argument");
    auto cfg = make_config(budget, jobs, seed, symmetry_reduction);
    emit(json_out, sweep_envelope(sigmalab::verify::verify_all(max_p, cfg)));
  });
}

sigmalab_status sigmalab_report_render(const char* report_json, const char* format,
                                       char** out) {
  return guarded([&] {
    require(report_json && format && out, "null argument");
    Json j = Json::parse(report_json);
    std::string fmt = format;
    if (fmt == "json") {
      *out = dup_string(j.dump(2));
      return;
    }
    sigmalab::verify::SweepReport rep = parse_report(j);
    if (fmt == "csv") {
      *out = dup_string(sigmalab::verify::report_to_csv(rep));
      return;
    }
    if (fmt == "text") {
      *out = dup_string(sigmalab::verify::report_to_text(rep));
      return;
    }
    sigmalab::fail(ErrorCode::invalid_argument, "unknown format: " + fmt);
  });
}

int sigmalab_report_exit_code(const char* report_json) {
  if (!report_json) return -1;
  try {
    Json j = Json::parse(report_json);
    if (!j.at("pass").get<bool>()) return 1;
    if (!j.at("refusals").empty()) return 3;
    return 0;
  } catch (...) {
    return -1;
  }
}

}  // extern "C"
