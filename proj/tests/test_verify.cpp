#include <doctest.h>

#include <functional>
#include <string>

#include "core/errors.hpp"
#include "core/verify.hpp"

using namespace sigmalab;
using namespace sigmalab::verify;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;  // sentinel: nothing was thrown
}

Json stripped(const Verdict& v) {
  Json j = verdict_to_json(v);
  j.erase("elapsed_ms");
  return j;
}

uint64_t pow3(uint64_t e) {
  uint64_t r = 1;
  while (e--) r *= 3;
  return r;
}

}  // namespace

TEST_CASE("main-theorem sweep instance counts and slack profile") {
  Verdict v3 = verify_main_theorem(Modulus{3});
  CHECK(v3.holds);
  CHECK(v3.applicable);
  CHECK(v3.instances_checked == 3);
  CHECK(v3.detail.at("min_slack_sigma").get<int64_t>() == 0);
  CHECK(v3.detail.at("min_slack_sigma_star").get<int64_t>() == 0);
  CHECK(v3.detail.at("min_slack_olson").get<int64_t>() == 1);
  CHECK(v3.counterexample.is_null());

  Verdict v7 = verify_main_theorem(Modulus{7});
  CHECK(v7.holds);
  CHECK(v7.instances_checked == 27);

  for (uint64_t p : {uint64_t{5}, uint64_t{11}, uint64_t{13}}) {
    Verdict v = verify_main_theorem(Modulus{p});
    CHECK(v.holds);
    CHECK(v.instances_checked == pow3((p - 1) / 2));
  }

  CHECK(code_of([] { verify_main_theorem(Modulus{2}); }) == ErrorCode::domain);
}

TEST_CASE("main-theorem sweep is deterministic across jobs") {
  for (uint64_t p : {uint64_t{7}, uint64_t{13}}) {
    Config one, four;
    four.jobs = 4;
    CHECK(stripped(verify_main_theorem(Modulus{p}, one)) ==
          stripped(verify_main_theorem(Modulus{p}, four)));
  }
}

TEST_CASE("main-theorem symmetry reduction preserves the verdict") {
  for (uint64_t p : {uint64_t{5}, uint64_t{7}, uint64_t{11}, uint64_t{13}}) {
    Config sym;
    sym.symmetry_reduction = true;
    Verdict a = verify_main_theorem(Modulus{p});
    Verdict b = verify_main_theorem(Modulus{p}, sym);
    CHECK(b.holds == a.holds);
    CHECK(b.instances_checked < a.instances_checked);
    // scaling permutes each orbit's subsum sets, so the extremes survive
    CHECK(b.detail.at("min_slack_sigma") == a.detail.at("min_slack_sigma"));
    CHECK(b.detail.at("min_slack_sigma_star") == a.detail.at("min_slack_sigma_star"));
    CHECK(b.detail.at("min_slack_olson") == a.detail.at("min_slack_olson"));
  }
}

TEST_CASE("main-theorem sweep refuses oversized work") {
  Config tiny;
  tiny.budget = 10;
  try {
    verify_main_theorem(Modulus{13}, tiny);
    FAIL("expected a budget refusal");
  } catch (const BudgetError& e) {
    CHECK(e.required() == 729);
    CHECK(e.budget() == 10);
  }
}

TEST_CASE("sequence sweep counts multisets exactly") {
  // multisets over (Z/pZ)* of length <= 7: C((p-1)+7, 7) of them
  Verdict v5 = verify_sequence_theorem(Modulus{5}, 7);
  CHECK(v5.holds);
  CHECK(v5.instances_checked == 330);  // C(11, 7)
  Verdict v7 = verify_sequence_theorem(Modulus{7}, 7);
  CHECK(v7.holds);
  CHECK(v7.instances_checked == 1716);  // C(13, 7)
  CHECK(v7.detail.contains("min_slack_sigma"));

  Config four;
  four.jobs = 4;
  CHECK(stripped(verify_sequence_theorem(Modulus{7}, 7, four)) ==
        stripped(verify_sequence_theorem(Modulus{7}, 7)));
}

TEST_CASE("structural multiplicity sweep") {
  for (uint64_t p : {uint64_t{5}, uint64_t{7}}) {
    Verdict v = verify_structural_multiplicity(Modulus{p}, p - 1, 3);
    CHECK(v.holds);
    CHECK(v.applicable);
    CHECK(v.detail.at("zero_sum_free").get<uint64_t>() > 0);
    CHECK(v.detail.at("multisets_enumerated").get<uint64_t>() >=
          v.detail.at("zero_sum_free").get<uint64_t>());
  }
  Config four;
  four.jobs = 4;
  CHECK(stripped(verify_structural_multiplicity(Modulus{7}, 6, 2, four)) ==
        stripped(verify_structural_multiplicity(Modulus{7}, 6, 2)));
  CHECK(code_of([] { verify_structural_multiplicity(Modulus{7}, 6, 0); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("largest zero-sum-free size verdicts") {
  for (uint64_t p : {uint64_t{2}, uint64_t{3}, uint64_t{7}, uint64_t{13}}) {
    Verdict v = verify_selfridge(Modulus{p});
    CHECK(v.holds);
    CHECK(v.detail.at("search_k") == v.detail.at("formula_k"));
    CHECK(v.detail.at("witness_valid").get<bool>());
  }
  CHECK(verify_selfridge(Modulus{7}).detail.at("search_k").get<uint64_t>() == 3);
  CHECK(verify_selfridge(Modulus{13}).detail.at("search_k").get<uint64_t>() == 4);
}

TEST_CASE("asymmetric critical number verdicts") {
  Verdict v13 = verify_acr(Modulus{13});
  CHECK(v13.holds);
  CHECK(v13.applicable);
  CHECK(v13.detail.at("acr").get<uint64_t>() == 5);
  CHECK(v13.detail.at("formula").get<uint64_t>() == 5);
  CHECK(v13.detail.at("witness_valid").get<bool>());

  // below 7 the quantity is undefined; the sweep confirms that by exhaustion
  for (uint64_t p : {uint64_t{3}, uint64_t{5}}) {
    Verdict v = verify_acr(Modulus{p});
    CHECK_FALSE(v.applicable);
    CHECK(v.holds);
    CHECK(v.instances_checked == pow3((p - 1) / 2));
    CHECK(v.detail.at("max_nonfull_card") == v.detail.at("largest_asymmetric_size"));
  }
  Verdict v2 = verify_acr(Modulus{2});
  CHECK_FALSE(v2.applicable);
  CHECK(v2.holds);
  CHECK(v2.instances_checked == 1);
}

TEST_CASE("determinant identity suite") {
  Config cfg;
  cfg.seed = 7;
  Verdict v = verify_det_identities(8, 50, cfg);
  CHECK(v.holds);
  const Json& per = v.detail.at("per_identity");
  CHECK(per.at("closed_form").get<uint64_t>() == 44);  // sum of (d+1), d <= 8
  CHECK(per.at("normalization").get<uint64_t>() == 44);
  CHECK(per.at("prime_factor_bound").get<uint64_t>() == 44);
  CHECK(per.at("pascal").get<uint64_t>() == 35);  // sum of d, 2 <= d <= 8
  CHECK(per.at("recurrence").get<uint64_t>() == 35);
  CHECK(per.at("scaling").get<uint64_t>() == 50);
  CHECK(v.instances_checked == 44 * 3 + 35 * 2 + 3 * 50);

  // seeded streams make reruns identical
  CHECK(stripped(verify_det_identities(6, 20, cfg)) ==
        stripped(verify_det_identities(6, 20, cfg)));
  CHECK(code_of([] { verify_det_identities(1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("expansion comparison inside the identity domain") {
  Verdict v = verify_key_expansion(2, 1, Modulus{5});
  CHECK(v.holds);
  CHECK(v.instances_checked == 4);
  CHECK(v.detail.at("out_of_domain_terms").get<uint64_t>() == 0);
  CHECK(v.detail.at("literal_identity_holds").get<bool>());
}

TEST_CASE("expansion comparison past the literal domain") {
  // d = 2, t = 4, p = 5: sum of exponents is 6, so monomials with an
  // exponent >= 5 exist. They carry no claim; the in-domain coefficients
  // still match, so the verdict holds while the literal identity fails.
  Verdict v = verify_key_expansion(2, 4, Modulus{5});
  CHECK(v.holds);
  CHECK(v.instances_checked == 3);  // (4,2), (3,3), (2,4)
  CHECK(v.detail.at("out_of_domain_terms").get<uint64_t>() == 4);
  CHECK_FALSE(v.detail.at("literal_identity_holds").get<bool>());
}

TEST_CASE("expansion grid aggregates cells") {
  Verdict v = verify_key_expansion_grid(Modulus{5}, 3, 4);
  CHECK(v.holds);
  CHECK(v.detail.at("grid_cells").get<uint64_t>() == 15);  // d <= 3, t <= 4
  CHECK(code_of([] { verify_key_expansion(2, 7, Modulus{5}); }) == ErrorCode::domain);
}

TEST_CASE("background bounds, exhaustive") {
  Verdict v2 = verify_background(Modulus{2}, BackgroundMode::exhaustive, 0);
  CHECK(v2.holds);
  CHECK(v2.instances_checked == 13);  // 3^2 sumset pairs + 4 layered checks
  CHECK(v2.detail.at("cauchy_davenport").get<uint64_t>() == 9);
  CHECK(v2.detail.at("distinct_summands").get<uint64_t>() == 4);

  Verdict v3 = verify_background(Modulus{3}, BackgroundMode::exhaustive, 0);
  CHECK(v3.holds);
  CHECK(v3.instances_checked == 61);

  Verdict v5 = verify_background(Modulus{5}, BackgroundMode::exhaustive, 10);
  CHECK(v5.holds);
  CHECK(v5.detail.at("cauchy_davenport").get<uint64_t>() == 961);
  CHECK(v5.detail.at("distinct_summands").get<uint64_t>() == 80);
  CHECK(v5.detail.at("nonopposite_summands").get<uint64_t>() == 10);
  CHECK(v5.detail.at("distinct_images").get<uint64_t>() == 10);
  CHECK(v5.instances_checked == 961 + 80 + 20);

  CHECK(code_of([] {
          verify_background(Modulus{17}, BackgroundMode::exhaustive, 0);
        }) == ErrorCode::domain);
}

TEST_CASE("background bounds, sampled") {
  Config cfg;
  cfg.seed = 3;
  Verdict v = verify_background(Modulus{31}, BackgroundMode::sampled, 40, cfg);
  CHECK(v.holds);
  CHECK(v.instances_checked == 160);
  CHECK(v.params.at("mode").get<std::string>() == "sampled");

  // seeded, so reruns agree
  CHECK(stripped(verify_background(Modulus{31}, BackgroundMode::sampled, 40, cfg)) ==
        stripped(verify_background(Modulus{31}, BackgroundMode::sampled, 40, cfg)));
}

TEST_CASE("replay rejects instances that do not violate the claim") {
  // a healthy set packaged as a main-theorem counterexample
  Verdict v;
  v.claim = "subsum.main_theorem";
  v.counterexample = Json{{"p", 7}, {"set", {1, 2, 3}}};
  CHECK_FALSE(replay_counterexample(v));

  // a sumset bound instance that actually meets its bound
  Verdict cd;
  cd.claim = "background.bounds";
  cd.counterexample =
      Json{{"family", "cauchy_davenport"}, {"p", 5}, {"a", {0}}, {"b", {0}}};
  CHECK_FALSE(replay_counterexample(cd));

  // hypothesis failure: the multiset is not zero-sum-free, so the
  // multiplicity claim says nothing about it
  Verdict st;
  st.claim = "subsum.structural_multiplicity";
  st.counterexample =
      Json{{"p", 7}, {"multiset", Json::array({{1, 1}, {6, 1}})}, {"k", 1}};
  CHECK_FALSE(replay_counterexample(st));

  // determinant identities re-evaluate to equality on any real instance
  Verdict det;
  det.claim = "det.identities";
  det.counterexample = Json{{"identity", "scaling"}, {"a", {2, 5}}, {"b", {1, 3}}};
  CHECK_FALSE(replay_counterexample(det));
}

TEST_CASE("replay confirms genuinely violating instances") {
  // sizes 1 and 4 break the distinct-images hypotheses, and the image set
  // {1,2,3} genuinely falls short of K + 1 = 5: replay must re-fail it
  Verdict li;
  li.claim = "background.bounds";
  li.counterexample = Json{{"family", "distinct_images"},
                           {"p", 7},
                           {"sets", Json::array({{0}, {0, 1, 2, 3}})},
                           {"polys", Json::array({{0}, {0}})}};
  CHECK(replay_counterexample(li));

  // both coordinates forced equal: no admissible tuple, 0 < t + 1
  Verdict no;
  no.claim = "background.bounds";
  no.counterexample = Json{{"family", "nonopposite_summands"},
                           {"p", 7},
                           {"sets", Json::array({{1}, {1}})},
                           {"t", 0}};
  CHECK(replay_counterexample(no));

  Verdict empty;
  empty.claim = "subsum.main_theorem";
  CHECK(code_of([&] { replay_counterexample(empty); }) == ErrorCode::invalid_argument);
}

TEST_CASE("sweep reports carry refusals separately") {
  Config tiny;
  tiny.budget = 100;
  SweepReport rep = selfridge_sweep(31, tiny);
  CHECK(rep.pass);  // small primes all hold; the rest were refused, not failed
  CHECK_FALSE(rep.refusals.empty());
  for (const Refusal& f : rep.refusals) {
    CHECK(f.required_budget > 100);
    CHECK(f.budget == 100);
    CHECK(f.message.find("budget") != std::string::npos);
  }
  CHECK(report_exit_code(rep) == 3);

  SweepReport ok = selfridge_sweep(13);
  CHECK(ok.pass);
  CHECK(ok.refusals.empty());
  CHECK(report_exit_code(ok) == 0);
  CHECK(ok.verdicts.size() == 6);  // 2, 3, 5, 7, 11, 13
}

TEST_CASE("the full battery at desk scale") {
  SweepReport rep = verify_all(7);
  CHECK(rep.pass);
  CHECK(rep.refusals.empty());
  CHECK(rep.verdicts.size() == 22);
  uint64_t na = 0;
  for (const Verdict& v : rep.verdicts) {
    if (!v.applicable) ++na;
    CHECK(v.holds);
  }
  CHECK(na == 3);  // the critical number is undefined at p = 2, 3, 5
  CHECK(report_exit_code(rep) == 0);

  // deterministic modulo timing across thread counts
  Config four;
  four.jobs = 4;
  Json a = report_to_json(verify_all(7));
  Json b = report_to_json(verify_all(7, four));
  for (Json* j : {&a, &b}) {
    for (Json& v : (*j)["verdicts"]) v.erase("elapsed_ms");
    (*j)["params"].erase("jobs");
  }
  CHECK(a == b);
}

TEST_CASE("report rendering") {
  SweepReport rep;
  rep.command = "demo";
  rep.params = Json{{"max_p", 7}};

  Verdict good;
  good.claim = "subsum.selfridge";
  good.params = Json{{"p", 7}};
  good.holds = true;
  good.instances_checked = 8;
  rep.verdicts.push_back(good);

  Verdict bad;
  bad.claim = "subsum.main_theorem";
  bad.params = Json{{"p", 11}};
  bad.holds = false;
  bad.counterexample = Json{{"p", 11}, {"set", {1, 2}}};
  rep.verdicts.push_back(bad);

  Verdict skip;
  skip.claim = "subsum.acr";
  skip.params = Json{{"p", 3}};
  skip.holds = true;
  skip.applicable = false;
  rep.verdicts.push_back(skip);

  rep.refusals.push_back(
      {"subsum.acr", Json{{"p", 31}}, 14348907, 100, "asymmetric-set scan: too big"});
  rep.pass = false;

  std::string text = report_to_text(rep);
  CHECK(text.find("command: demo") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("na") != std::string::npos);
  CHECK(text.find("REFUSED") != std::string::npos);
  CHECK(text.find("needs budget 14348907 (have 100)") != std::string::npos);
  CHECK(text.find("counterexample") != std::string::npos);
  CHECK(text.find("pass: false") != std::string::npos);

  std::string csv = report_to_csv(rep);
  CHECK(csv.find("status,claim,holds,applicable,instances_checked") == 0);
  CHECK(csv.find("ok,subsum.selfridge,true,true,8,") != std::string::npos);
  CHECK(csv.find("fail,subsum.main_theorem,") != std::string::npos);
  CHECK(csv.find("na,subsum.acr,") != std::string::npos);
  CHECK(csv.find("refused,subsum.acr,,,0,0,") != std::string::npos);
  // JSON parameter cells carry RFC 4180 doubled quotes
  CHECK(csv.find("\"{\"\"p\"\":7}\"") != std::string::npos);

  Json j = report_to_json(rep);
  CHECK(j.at("command") == "demo");
  CHECK(j.at("verdicts").size() == 3);
  CHECK(j.at("refusals").size() == 1);
  CHECK_FALSE(j.at("pass").get<bool>());

  CHECK(report_exit_code(rep) == 1);  // failure outranks the refusal
  rep.verdicts[1].holds = true;
  rep.pass = true;
  CHECK(report_exit_code(rep) == 3);
  rep.refusals.clear();
  CHECK(report_exit_code(rep) == 0);
}
