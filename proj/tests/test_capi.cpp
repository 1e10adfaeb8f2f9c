#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <sigmalab/sigmalab.h>

using Json = nlohmann::json;

namespace {

// Takes the address, not the value: the status argument's call fills *out,
// and argument evaluation order must not matter.
Json take(sigmalab_status st, char** out) {
  REQUIRE(st == SIGMALAB_OK);
  REQUIRE(*out != nullptr);
  Json j = Json::parse(*out);
  sigmalab_string_free(*out);
  *out = nullptr;
  return j;
}

void check_envelope(const Json& j, const std::string& command) {
  CHECK(j.at("command") == command);
  CHECK(j.contains("params"));
  CHECK(j.at("verdicts").is_array());
  CHECK(j.at("refusals").is_array());
  CHECK(j.contains("result"));
  CHECK(j.at("pass").is_boolean());
}

int exit_code_of(const Json& j) { return sigmalab_report_exit_code(j.dump().c_str()); }

}  // namespace

TEST_CASE("version and error plumbing") {
  CHECK(std::string(sigmalab_version()) == "0.1.0");
  CHECK(sigmalab_last_error() != nullptr);
  sigmalab_string_free(nullptr);  // must be a safe no-op

  CHECK(sigmalab_bindet(nullptr, nullptr, 2, nullptr) == SIGMALAB_ERR_ARGUMENT);
  CHECK(std::strlen(sigmalab_last_error()) > 0);
}

TEST_CASE("default budget resolution") {
  char* saved = getenv("SIGMA_LAB_BUDGET");
  std::string saved_copy = saved ? saved : "";
  unsetenv("SIGMA_LAB_BUDGET");
  CHECK(sigmalab_default_budget() == 14348907);
  setenv("SIGMA_LAB_BUDGET", "5000", 1);
  CHECK(sigmalab_default_budget() == 5000);
  unsetenv("SIGMA_LAB_BUDGET");
  if (saved) setenv("SIGMA_LAB_BUDGET", saved_copy.c_str(), 1);
}

TEST_CASE("raw binomial determinant") {
  uint64_t top[] = {4, 5, 6}, bottom[] = {0, 2, 4};
  char* out = nullptr;
  REQUIRE(sigmalab_bindet(top, bottom, 3, &out) == SIGMALAB_OK);
  CHECK(std::string(out) == "20");
  sigmalab_string_free(out);

  // the family member (3, 1) through the raw entry point
  uint64_t ftop[] = {2, 4, 5};
  out = nullptr;
  REQUIRE(sigmalab_bindet(ftop, bottom, 3, &out) == SIGMALAB_OK);
  CHECK(std::string(out) == "16");
  sigmalab_string_free(out);

  CHECK(sigmalab_bindet(top, bottom, 0, &out) == SIGMALAB_ERR_ARGUMENT);
}

TEST_CASE("family report envelope") {
  char* out = nullptr;
  Json j = take(sigmalab_family_report(3, 1, &out), &out);
  check_envelope(j, "bindet");
  CHECK(j.at("pass").get<bool>());
  const Json& r = j.at("result");
  CHECK(r.at("d") == 3);
  CHECK(r.at("i") == 1);
  CHECK(r.at("determinant") == "16");
  CHECK(r.at("closed_form") == "16");
  CHECK(r.at("closed_form_matches").get<bool>());
  CHECK(r.at("normalized") == "4");  // C(3,1) + C(2,0)
  CHECK(r.at("pow2_exponent") == 2);
  CHECK(r.at("normalization_matches").get<bool>());
  CHECK(r.at("recurrence").at("applicable").get<bool>());
  CHECK(r.at("recurrence").at("matches").get<bool>());
  CHECK(exit_code_of(j) == 0);

  out = nullptr;
  Json big = take(sigmalab_family_report(4, 1, &out), &out);
  CHECK(big.at("result").at("determinant") == "160");

  CHECK(sigmalab_family_report(2, 5, &out) == SIGMALAB_ERR_DOMAIN);
  CHECK(std::strlen(sigmalab_last_error()) > 0);
}

TEST_CASE("expansion check envelope") {
  char* out = nullptr;
  Json j = take(sigmalab_expand_check(2, 1, 5, 0, &out), &out);
  check_envelope(j, "expand-check");
  CHECK(j.at("pass").get<bool>());
  REQUIRE(j.at("verdicts").size() == 1);
  const Json& v = j.at("verdicts")[0];
  CHECK(v.at("claim") == "poly.key_expansion");
  CHECK(v.at("holds").get<bool>());
  CHECK(v.at("instances_checked") == 4);

  CHECK(sigmalab_expand_check(2, 1, 4, 0, &out) == SIGMALAB_ERR_NOT_PRIME);
  CHECK(sigmalab_expand_check(2, 9, 7, 0, &out) == SIGMALAB_ERR_DOMAIN);
  // a tiny explicit budget turns the run into a refusal, not an error
  out = nullptr;
  Json refused = take(sigmalab_expand_check(4, 6, 13, 3, &out), &out);
  CHECK(refused.at("verdicts").empty());
  REQUIRE(refused.at("refusals").size() == 1);
  CHECK(refused.at("refusals")[0].at("budget") == 3);
  CHECK(exit_code_of(refused) == 3);
}

TEST_CASE("coefficient certificate instance") {
  const char* inst =
      R"({"p":7,"sets":[[0,1,2,3],[0,1,2]],"r":[[[0,1],1],[[1,0],6]]})";
  char* out = nullptr;
  Json j = take(sigmalab_anr_check(inst, &out), &out);
  check_envelope(j, "anr");
  REQUIRE(j.at("verdicts").size() == 1);
  const Json& v = j.at("verdicts")[0];
  CHECK(v.at("claim") == "poly.anr");
  CHECK(v.at("holds").get<bool>());
  CHECK(v.at("detail").at("m") == 4);
  CHECK(v.at("detail").at("coefficient") == 5);
  CHECK(v.at("detail").at("certified").get<bool>());
  CHECK(v.at("detail").at("guaranteed_min") == 5);
  CHECK(v.at("detail").at("witness_cardinality") == 5);

  CHECK(sigmalab_anr_check("not json", &out) == SIGMALAB_ERR_ARGUMENT);
  CHECK(sigmalab_anr_check(R"({"p":9,"sets":[[1]],"r":[[[0],1]]})", &out) ==
        SIGMALAB_ERR_NOT_PRIME);
  CHECK(sigmalab_anr_check(R"({"p":7,"sets":[[1]],"r":[[[0,0],1]]})", &out) ==
        SIGMALAB_ERR_ARGUMENT);  // exponent arity != number of sets
  CHECK(sigmalab_anr_check(R"({"p":7,"sets":[[1]],"r":[]})", &out) ==
        SIGMALAB_ERR_DOMAIN);  // zero restriction polynomial
  CHECK(sigmalab_anr_check(nullptr, &out) == SIGMALAB_ERR_ARGUMENT);
}

TEST_CASE("distinct-images instance") {
  const char* inst = R"({"p":13,"sets":[[0,1,2,3],[0,1,2,3]],"polys":[[0],[0]]})";
  char* out = nullptr;
  Json j = take(sigmalab_liusun_check(inst, &out), &out);
  check_envelope(j, "liusun");
  REQUIRE(j.at("verdicts").size() == 1);
  const Json& v = j.at("verdicts")[0];
  CHECK(v.at("claim") == "poly.liu_sun");
  CHECK(v.at("holds").get<bool>());
  CHECK(v.at("applicable").get<bool>());
  CHECK(v.at("detail").at("K") == 4);
  CHECK(v.at("detail").at("cardinality") == 5);

  // hypothesis violations surface as not-applicable, never as failures
  const char* gap = R"({"p":7,"sets":[[0],[0,1,2,3]],"polys":[[0],[0]]})";
  out = nullptr;
  Json na = take(sigmalab_liusun_check(gap, &out), &out);
  const Json& w = na.at("verdicts")[0];
  CHECK_FALSE(w.at("applicable").get<bool>());
  CHECK(w.at("holds").get<bool>());
  CHECK_FALSE(w.at("detail").at("reason").get<std::string>().empty());
  CHECK(na.at("pass").get<bool>());
}

TEST_CASE("set handles and the subsum report") {
  uint64_t elems[] = {1, 2, 3};
  sigmalab_set* s = nullptr;
  REQUIRE(sigmalab_set_new(7, elems, 3, &s) == SIGMALAB_OK);
  char* out = nullptr;
  Json j = take(sigmalab_subsums_report(s, &out), &out);
  sigmalab_set_free(s);
  check_envelope(j, "subsums");
  const Json& r = j.at("result");
  CHECK(r.at("p") == 7);
  CHECK(r.at("cardinality_sigma") == 7);
  CHECK(r.at("cardinality_sigma_star") == 6);
  CHECK(r.at("zero_sum_free").get<bool>());
  CHECK(r.at("asymmetric").get<bool>());
  CHECK(r.at("bounds").at("applicable").get<bool>());
  CHECK(r.at("bounds").at("sigma") == 7);
  CHECK(r.at("bounds").at("sigma_star") == 6);
  CHECK(r.at("bounds").at("olson") == 5);
  CHECK(r.at("bounds").at("hold").get<bool>());
  CHECK(j.at("pass").get<bool>());

  // a symmetric set: the bounds do not apply, the report still passes
  uint64_t sym[] = {1, 6};
  s = nullptr;
  REQUIRE(sigmalab_set_new(7, sym, 2, &s) == SIGMALAB_OK);
  out = nullptr;
  Json k = take(sigmalab_subsums_report(s, &out), &out);
  sigmalab_set_free(s);
  CHECK_FALSE(k.at("result").at("asymmetric").get<bool>());
  CHECK_FALSE(k.at("result").at("zero_sum_free").get<bool>());
  CHECK_FALSE(k.at("result").at("bounds").at("applicable").get<bool>());
  CHECK(k.at("pass").get<bool>());

  CHECK(sigmalab_set_new(9, elems, 3, &s) == SIGMALAB_ERR_NOT_PRIME);
  uint64_t oob[] = {7};
  CHECK(sigmalab_set_new(7, oob, 1, &s) == SIGMALAB_ERR_ARGUMENT);
  CHECK(sigmalab_set_new(7, nullptr, 2, &s) == SIGMALAB_ERR_ARGUMENT);
  CHECK(sigmalab_subsums_report(nullptr, &out) == SIGMALAB_ERR_ARGUMENT);
}

TEST_CASE("multiset handles and the weighted report") {
  uint64_t values[] = {1, 2}, counts[] = {3, 1};
  sigmalab_mset* s = nullptr;
  REQUIRE(sigmalab_mset_new(7, values, counts, 2, &s) == SIGMALAB_OK);
  char* out = nullptr;
  Json j = take(sigmalab_msubsums_report(s, &out), &out);
  sigmalab_mset_free(s);
  check_envelope(j, "subsums");
  const Json& r = j.at("result");
  CHECK(r.at("length") == 4);
  CHECK(r.at("cardinality_sigma") == 6);
  CHECK(r.at("cardinality_sigma_star") == 5);
  CHECK(r.at("pair_multiplicities") == Json::array({3, 1}));
  CHECK(r.at("bounds").at("sigma") == 6);       // 1 + (1*3 + 2*1), capped at p
  CHECK(r.at("bounds").at("sigma_star") == 5);  // both bounds are tight here
  CHECK(r.at("bounds").at("hold").get<bool>());
  CHECK(r.at("zero_sum_free").get<bool>());

  // zero counts are skipped, zero residues rejected
  uint64_t zc[] = {1, 2}, zn[] = {2, 0};
  REQUIRE(sigmalab_mset_new(7, zc, zn, 2, &s) == SIGMALAB_OK);
  out = nullptr;
  Json k = take(sigmalab_msubsums_report(s, &out), &out);
  sigmalab_mset_free(s);
  CHECK(k.at("result").at("length") == 2);
  uint64_t bad[] = {0}, one[] = {1};
  CHECK(sigmalab_mset_new(7, bad, one, 1, &s) == SIGMALAB_ERR_DOMAIN);
}

TEST_CASE("search envelopes") {
  char* out = nullptr;
  Json j = take(sigmalab_max_zero_sum_free(13, 0, 0, &out), &out);
  check_envelope(j, "selfridge");
  const Json& v = j.at("verdicts")[0];
  CHECK(v.at("claim") == "subsum.selfridge");
  CHECK(v.at("holds").get<bool>());
  CHECK(v.at("detail").at("search_k") == 4);

  out = nullptr;
  Json a = take(sigmalab_acr(13, 0, 0, &out), &out);
  check_envelope(a, "acr");
  CHECK(a.at("verdicts")[0].at("detail").at("acr") == 5);
  CHECK(exit_code_of(a) == 0);

  // undefined below 7: a not-applicable verdict, not an error
  out = nullptr;
  Json na = take(sigmalab_acr(5, 0, 0, &out), &out);
  CHECK_FALSE(na.at("verdicts")[0].at("applicable").get<bool>());
  CHECK(na.at("pass").get<bool>());

  CHECK(sigmalab_acr(4, 0, 0, &out) == SIGMALAB_ERR_NOT_PRIME);

  // over budget: a refusal row and exit code 3
  out = nullptr;
  Json refused = take(sigmalab_max_zero_sum_free(31, 100, 0, &out), &out);
  CHECK(refused.at("verdicts").empty());
  REQUIRE(refused.at("refusals").size() == 1);
  CHECK(refused.at("refusals")[0].at("required_budget") == 14348907);
  CHECK(refused.at("refusals")[0].at("budget") == 100);
  CHECK(refused.at("pass").get<bool>());
  CHECK(exit_code_of(refused) == 3);
}

TEST_CASE("sweep envelopes") {
  char* out = nullptr;
  Json j = take(sigmalab_selfridge_sweep(13, 0, 2, 0, &out), &out);
  check_envelope(j, "selfridge");
  CHECK(j.at("verdicts").size() == 6);
  CHECK(j.at("pass").get<bool>());

  out = nullptr;
  Json a = take(sigmalab_acr_sweep(13, 0, 1, 1, &out), &out);
  CHECK(a.at("verdicts").size() == 6);
  CHECK(a.at("pass").get<bool>());

  out = nullptr;
  Json v = take(sigmalab_verify_all(7, 0, 2, 1, 0, &out), &out);
  check_envelope(v, "verify-all");
  CHECK(v.at("pass").get<bool>());
  CHECK(v.at("refusals").empty());
  CHECK(v.at("verdicts").size() == 22);
  CHECK(exit_code_of(v) == 0);
}

TEST_CASE("report rendering round trips") {
  char* out = nullptr;
  Json j = take(sigmalab_family_report(3, 1, &out), &out);
  std::string dumped = j.dump();

  char* text = nullptr;
  REQUIRE(sigmalab_report_render(dumped.c_str(), "text", &text) == SIGMALAB_OK);
  CHECK(std::string(text).find("command: bindet") != std::string::npos);
  CHECK(std::string(text).find("pass: true") != std::string::npos);
  sigmalab_string_free(text);

  char* csv = nullptr;
  REQUIRE(sigmalab_report_render(dumped.c_str(), "csv", &csv) == SIGMALAB_OK);
  CHECK(std::string(csv).find("status,claim,") == 0);
  sigmalab_string_free(csv);

  char* pretty = nullptr;
  REQUIRE(sigmalab_report_render(dumped.c_str(), "json", &pretty) == SIGMALAB_OK);
  CHECK(Json::parse(pretty).at("command") == "bindet");
  sigmalab_string_free(pretty);

  CHECK(sigmalab_report_render(dumped.c_str(), "xml", &text) == SIGMALAB_ERR_ARGUMENT);
  CHECK(sigmalab_report_render("not json", "text", &text) == SIGMALAB_ERR_ARGUMENT);
  CHECK(sigmalab_report_render(nullptr, "text", &text) == SIGMALAB_ERR_ARGUMENT);
}

TEST_CASE("exit codes from raw envelopes") {
  CHECK(sigmalab_report_exit_code(nullptr) == -1);
  CHECK(sigmalab_report_exit_code("{}") == -1);
  CHECK(sigmalab_report_exit_code("not json") == -1);

  Json rep{{"command", "demo"},
           {"params", Json::object()},
           {"verdicts", Json::array()},
           {"refusals", Json::array()},
           {"result", nullptr},
           {"pass", true}};
  CHECK(sigmalab_report_exit_code(rep.dump().c_str()) == 0);
  rep["pass"] = false;
  CHECK(sigmalab_report_exit_code(rep.dump().c_str()) == 1);
  rep["pass"] = true;
  rep["refusals"].push_back(Json{{"claim", "x"},
                                 {"params", Json::object()},
                                 {"required_budget", 10},
                                 {"budget", 1},
                                 {"message", "m"}});
  CHECK(sigmalab_report_exit_code(rep.dump().c_str()) == 3);
}
