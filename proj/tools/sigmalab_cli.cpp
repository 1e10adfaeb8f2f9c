// Command-line front end for libsigmalab. All computation happens behind
// the C API; this file parses arguments, loads instance files, and renders
// report envelopes. Reports go to stdout, diagnostics to stderr.
//
// Exit codes: 0 all checks hold, 1 counterexample found, 2 usage or input
// error, 3 at least one claim refused for budget (and none failed).

#include <sigmalab/sigmalab.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using Json = nlohmann::json;

namespace {

[[noreturn]] void die_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(2);
}

std::string api_error() {
  const char* msg = sigmalab_last_error();
  return msg && *msg ? msg : "unknown error";
}

std::string take(char* s) {
  std::string out = s ? s : "";
  sigmalab_string_free(s);
  return out;
}

uint64_t parse_u64(const std::string& tok) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    die_usage("expected an unsigned integer, got '" + tok + "'");
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    die_usage("integer out of range: '" + tok + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// "1,2,3" -> {1,2,3}; the empty string is the empty set.
std::vector<uint64_t> parse_set(const std::string& text) {
  std::vector<uint64_t> out;
  for (const std::string& tok : split(text, ',')) out.push_back(parse_u64(tok));
  return out;
}

// "1^3,2^1" -> {(1,3),(2,1)}; a bare value means multiplicity 1.
std::vector<std::pair<uint64_t, uint64_t>> parse_mset(const std::string& text) {
  std::vector<std::pair<uint64_t, uint64_t>> out;
  for (const std::string& tok : split(text, ',')) {
    size_t caret = tok.find('^');
    if (caret == std::string::npos) {
      out.emplace_back(parse_u64(tok), 1);
    } else {
      out.emplace_back(parse_u64(tok.substr(0, caret)), parse_u64(tok.substr(caret + 1)));
    }
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die_usage("cannot read instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';  // RFC 4180 doubling
    out += c;
  }
  out += "\"";
  return out;
}

void print_elems(std::ostream& os, const Json& arr) {
  os << '{';
  bool first = true;
  for (const auto& x : arr) {
    if (!first) os << ',';
    os << x;
    first = false;
  }
  os << '}';
}

void render_bindet_text(const Json& env) {
  const Json& r = env.at("result");
  std::cout << "binomial determinant (d=" << r.at("d") << ", i=" << r.at("i") << ")\n";
  std::cout << "  determinant: " << r.at("determinant").get<std::string>() << "\n";
  std::cout << "  normalized:  " << r.at("normalized").get<std::string>()
            << "   (determinant = 2^" << r.at("pow2_exponent") << " * normalized: "
            << (r.at("normalization_matches").get<bool>() ? "yes" : "NO") << ")\n";
  std::cout << "  closed form: " << r.at("closed_form").get<std::string>() << "   match: "
            << (r.at("closed_form_matches").get<bool>() ? "yes" : "NO") << "\n";
  const Json& rec = r.at("recurrence");
  std::cout << "  recurrence:  "
            << (!rec.at("applicable").get<bool>()   ? "n/a"
                : rec.at("matches").get<bool>()     ? "match"
                                                    : "MISMATCH")
            << "\n";
  std::cout << "pass: " << (env.at("pass").get<bool>() ? "true" : "false") << "\n";
}

void render_subsums_text(const Json& env) {
  const Json& r = env.at("result");
  const bool is_mset = r.contains("multiset");
  std::cout << "subsums over Z/" << r.at("p") << "Z, ";
  if (is_mset) {
    std::cout << "multiset {";
    bool first = true;
    for (const auto& pr : r.at("multiset")) {
      if (!first) std::cout << ',';
      std::cout << pr.at(0) << '^' << pr.at(1);
      first = false;
    }
    std::cout << '}';
  } else {
    std::cout << "set ";
    print_elems(std::cout, r.at("set"));
  }
  std::cout << "\n  sigma:      ";
  print_elems(std::cout, r.at("sigma"));
  std::cout << "   cardinality " << r.at("cardinality_sigma") << "\n";
  std::cout << "  sigma star: ";
  print_elems(std::cout, r.at("sigma_star"));
  std::cout << "   cardinality " << r.at("cardinality_sigma_star") << "\n";
  std::cout << "  zero-sum-free: " << (r.at("zero_sum_free").get<bool>() ? "yes" : "no");
  if (!is_mset)
    std::cout << "   asymmetric: " << (r.at("asymmetric").get<bool>() ? "yes" : "no");
  std::cout << "\n";
  const Json& b = r.at("bounds");
  if (!b.at("applicable").get<bool>()) {
    std::cout << "  bounds: n/a (set is not asymmetric)\n";
  } else {
    std::cout << "  bounds: sigma >= " << b.at("sigma") << ", sigma* >= "
              << b.at("sigma_star");
    if (!is_mset) std::cout << ", olson sigma >= " << b.at("olson");
    std::cout << ": " << (b.at("hold").get<bool>() ? "hold" : "VIOLATED") << "\n";
  }
  std::cout << "pass: " << (env.at("pass").get<bool>() ? "true" : "false") << "\n";
}

void render_result_csv(const Json& env) {
  std::cout << "key,value\n";
  const Json& r = env.at("result");
  for (auto it = r.begin(); it != r.end(); ++it) {
    std::string val =
        it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    std::cout << it.key() << ',' << csv_quote(val) << '\n';
  }
  std::cout << "pass," << (env.at("pass").get<bool>() ? "true" : "false") << '\n';
}

// Print an envelope in the requested format and map it to an exit code.
int emit_report(const std::string& json, const std::string& format) {
  Json env = Json::parse(json);
  const bool result_kind = !env.at("result").is_null();
  if (format == "json" || !result_kind) {
    char* rendered = nullptr;
    if (sigmalab_report_render(json.c_str(), format.c_str(), &rendered) != SIGMALAB_OK)
      die_usage(api_error());
    std::string text = take(rendered);
    std::cout << text;
    if (format == "json") std::cout << "\n";
  } else if (format == "csv") {
    render_result_csv(env);
  } else if (env.at("command").get<std::string>() == "bindet") {
    render_bindet_text(env);
  } else {
    render_subsums_text(env);
  }
  int code = sigmalab_report_exit_code(json.c_str());
  if (code < 0) die_usage("malformed report envelope");
  return code;
}

std::string check(sigmalab_status st, char* json) {
  if (st != SIGMALAB_OK) die_usage(api_error());
  return take(json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact binomial determinants, coefficient certificates, and subsum-set "
               "verification over Z/pZ"};
  app.require_subcommand(1);
  std::string format = "text";

  uint32_t d = 1, i = 0, t = 0;
  uint64_t p = 0, max_p = 29, budget = 0, seed = 1;
  uint32_t jobs = 1;
  bool symmetry = false;
  std::string instance_path, set_text, mset_text;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
  };

  CLI::App* c_bindet = app.add_subcommand(
      "bindet", "family binomial determinant: value, normalization, closed form");
  c_bindet->add_option("--d", d, "family row count")->required();
  c_bindet->add_option("--i", i, "missing-column index, 0 <= i <= d")->required();
  add_format(c_bindet);

  CLI::App* c_expand = app.add_subcommand(
      "expand-check", "compare predicted against expanded power-Vandermonde coefficients");
  c_expand->add_option("--d", d, "number of variables")->required();
  c_expand->add_option("--t", t, "power of the linear form, t < p")->required();
  c_expand->add_option("--p", p, "prime modulus")->required();
  c_expand->add_option("--budget", budget, "instance budget (0 = builtin default)");
  add_format(c_expand);

  CLI::App* c_anr = app.add_subcommand(
      "anr", "coefficient certificate for a restricted sumset (instance JSON)");
  c_anr->add_option("--instance", instance_path, "instance file")->required();
  add_format(c_anr);

  CLI::App* c_liusun = app.add_subcommand(
      "liusun", "distinct-images sumset bound on one instance (instance JSON)");
  c_liusun->add_option("--instance", instance_path, "instance file")->required();
  add_format(c_liusun);

  CLI::App* c_subsums =
      app.add_subcommand("subsums", "Sigma and Sigma* of a set or multiset mod p");
  c_subsums->add_option("--p", p, "prime modulus")->required();
  c_subsums->add_option("--set", set_text, "comma-separated residues, e.g. 1,2,3");
  c_subsums->add_option("--mset", mset_text, "multiset grammar, e.g. 1^3,2^1");
  add_format(c_subsums);

  auto add_sweep_opts = [&](CLI::App* sub) {
    sub->add_option("--budget", budget, "instance budget (0 = builtin default)");
    sub->add_option("--jobs", jobs, "worker threads for sweeps")
        ->check(CLI::Range(1u, 4096u));
    sub->add_flag("--symmetry-reduction", symmetry,
                  "scan one representative per scaling orbit");
    add_format(sub);
  };

  CLI::App* c_selfridge = app.add_subcommand(
      "selfridge", "maximum zero-sum-free set size for every prime <= max-p");
  c_selfridge->add_option("--max-p", max_p, "largest prime to check")->required();
  add_sweep_opts(c_selfridge);

  CLI::App* c_acr = app.add_subcommand(
      "acr", "asymmetric critical number for every prime <= max-p");
  c_acr->add_option("--max-p", max_p, "largest prime to check")->required();
  add_sweep_opts(c_acr);

  CLI::App* c_all = app.add_subcommand(
      "verify-all", "the full claim battery up to max-p");
  c_all->add_option("--max-p", max_p, "largest prime to sweep")->capture_default_str();
  c_all->add_option("--seed", seed, "seed for sampled checks")->capture_default_str();
  add_sweep_opts(c_all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (c_bindet->parsed()) {
    char* out = nullptr;
    sigmalab_status st = sigmalab_family_report(d, i, &out);
    return emit_report(check(st, out), format);
  }

  if (c_expand->parsed()) {
    char* out = nullptr;
    sigmalab_status st = sigmalab_expand_check(d, t, p, budget, &out);
    return emit_report(check(st, out), format);
  }

  if (c_anr->parsed()) {
    std::string inst = slurp(instance_path);
    char* out = nullptr;
    sigmalab_status st = sigmalab_anr_check(inst.c_str(), &out);
    return emit_report(check(st, out), format);
  }

  if (c_liusun->parsed()) {
    std::string inst = slurp(instance_path);
    char* out = nullptr;
    sigmalab_status st = sigmalab_liusun_check(inst.c_str(), &out);
    return emit_report(check(st, out), format);
  }

  if (c_subsums->parsed()) {
    const bool has_set = c_subsums->count("--set") > 0;
    const bool has_mset = c_subsums->count("--mset") > 0;
    if (has_set == has_mset) die_usage("subsums needs exactly one of --set or --mset");
    char* out = nullptr;
    if (has_set) {
      std::vector<uint64_t> elems = parse_set(set_text);
      sigmalab_set* handle = nullptr;
      if (sigmalab_set_new(p, elems.data(), elems.size(), &handle) != SIGMALAB_OK)
        die_usage(api_error());
      sigmalab_status st = sigmalab_subsums_report(handle, &out);
      sigmalab_set_free(handle);
      return emit_report(check(st, out), format);
    }
    auto items = parse_mset(mset_text);
    std::vector<uint64_t> values, counts;
    for (auto [v, c] : items) {
      values.push_back(v);
      counts.push_back(c);
    }
    sigmalab_mset* handle = nullptr;
    if (sigmalab_mset_new(p, values.data(), counts.data(), values.size(), &handle) !=
        SIGMALAB_OK)
      die_usage(api_error());
    sigmalab_status st = sigmalab_msubsums_report(handle, &out);
    sigmalab_mset_free(handle);
    return emit_report(check(st, out), format);
  }

  if (c_selfridge->parsed()) {
    char* out = nullptr;
    sigmalab_status st = sigmalab_selfridge_sweep(max_p, budget, jobs, symmetry, &out);
    return emit_report(check(st, out), format);
  }

  if (c_acr->parsed()) {
    char* out = nullptr;
    sigmalab_status st = sigmalab_acr_sweep(max_p, budget, jobs, symmetry, &out);
    return emit_report(check(st, out), format);
  }

  if (c_all->parsed()) {
    char* out = nullptr;
    sigmalab_status st = sigmalab_verify_all(max_p, budget, jobs, seed, symmetry, &out);
    return emit_report(check(st, out), format);
  }

  die_usage("no subcommand");  // unreachable with require_subcommand(1)
}
