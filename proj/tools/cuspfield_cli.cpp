// Command line front end. Talks to the library only through the C interface.
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cuspfield/cuspfield.h"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_of(cf_status s) { return s == CF_ERR_INTERNAL ? kExitInternal : kExitUsage; }

void check(cf_status s, const std::string& context) {
  if (s != CF_OK) throw Failure{exit_code_of(s), context + ": " + cf_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  cf_string_free(s);
  return out;
}

using FormPtr = std::unique_ptr<cf_form, decltype(&cf_form_free)>;

FormPtr load(const std::string& path) {
  cf_form* f = nullptr;
  check(cf_form_load(path.c_str(), &f), "loading " + path);
  return FormPtr(f, &cf_form_free);
}

cf_matrix matrix(const std::string& text) {
  cf_matrix m{};
  check(cf_matrix_parse(text.c_str(), &m), "matrix");
  return m;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{kExitUsage, "cannot write " + path};
}

std::pair<long long, long long> parse_cusp(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return {std::stoll(text), 1};
    return {std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
  } catch (const std::exception&) {
    throw Failure{kExitUsage, "cusp must be written a/c"};
  }
}

struct ExpandArgs {
  std::string form, matrix = "1,0,0,1", output, summary;
  long long prec = 0;
  bool no_cache = false;
};

int run_expand(const ExpandArgs& a) {
  FormPtr f = load(a.form);
  char* series = nullptr;
  char* summary = nullptr;
  check(cf_expand(f.get(), matrix(a.matrix), a.prec, a.no_cache ? 0 : 1, &series, &summary), "expand");
  const std::string s = take(series), sum = take(summary);
  write_text(a.output, s);
  if (a.output.empty() || a.output == "-") std::cerr << sum << '\n';
  else write_text(a.summary.empty() ? a.output + ".summary.json" : a.summary, sum + "\n");
  return kExitPass;
}

struct BoundArgs {
  std::string form, matrix = "1,0,0,1", character;
  long long level = 0, field = 1;
  int weight = 2;
  bool sweep = false;
};

int run_bound(const BoundArgs& a) {
  char* out = nullptr;
  if (!a.form.empty()) {
    FormPtr f = load(a.form);
    if (a.sweep) check(cf_bound_sweep(f.get(), &out), "bound");
    else check(cf_bound(f.get(), matrix(a.matrix), &out), "bound");
  } else {
    if (a.level <= 0) throw Failure{kExitUsage, "bound needs --form or --level"};
    if (a.sweep) {
      std::string text = "name sweep\nlevel " + std::to_string(a.level) + "\nweight " + std::to_string(a.weight) +
                         "\ngroup gamma0\nnewform no\n";
      if (!a.character.empty()) text += "character " + a.character + "\n";
      text += "field " + std::to_string(a.field) + "\n";
      cf_form* f = nullptr;
      check(cf_form_parse(text.c_str(), &f), "metadata");
      FormPtr held(f, &cf_form_free);
      check(cf_bound_sweep(f, &out), "bound");
    } else {
      check(cf_bound_metadata(a.level, a.weight, a.character.empty() ? nullptr : a.character.c_str(), a.field,
                              matrix(a.matrix), &out),
            "bound");
    }
  }
  write_text("-", take(out));
  return kExitPass;
}

struct OptimizeArgs {
  long long level = 0, conductor = 1, prec = 0;
  std::string cusp, form, matrix;
  std::vector<std::string> al;
};

int run_optimize(const OptimizeArgs& a) {
  char* out = nullptr;
  if (!a.form.empty()) {
    if (a.matrix.empty()) throw Failure{kExitUsage, "replay needs --matrix"};
    FormPtr f = load(a.form);
    check(cf_optimize_replay(f.get(), matrix(a.matrix), a.prec, &out), "optimize");
    json j = json::parse(take(out));
    write_text("-", j.dump(2));
    return j.value("replay_equal", false) ? kExitPass : kExitFailed;
  }
  if (a.level <= 0 || a.cusp.empty()) throw Failure{kExitUsage, "optimize needs --level and --cusp (or --form)"};
  const auto [num, den] = parse_cusp(a.cusp);
  check(cf_optimize(a.level, num, den, a.conductor, &out), "optimize");
  json j = json::parse(take(out));
  json table = json::object();
  for (const auto& entry : a.al) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw Failure{kExitUsage, "--al takes Q=+1 or Q=-1"};
    table[entry.substr(0, eq)] = std::stoi(entry.substr(eq + 1));
  }
  const std::string q = std::to_string(j["Q"].get<long long>());
  if (j["Q"].get<long long>() == 1) j["epsilon"] = 1;
  else if (table.contains(q)) j["epsilon"] = table[q];
  else j["epsilon"] = "read W_" + q + " eigenvalue from the form";
  write_text("-", j.dump(2));
  return kExitPass;
}

struct VerifyArgs {
  std::vector<std::string> suites, forms;
  std::string options = "{}", report;
  long long max_level = -1, brute_level = -1, optimal_level = -1;
  int cases = -1, max_weight = -1, matrices = -1, jobs = 1;
  long long seed = -1;
  double tolerance = -1;
};

int run_verify(const VerifyArgs& a) {
  json opts = json::parse(a.options);
  if (!opts.is_object()) throw Failure{kExitUsage, "--options must be a JSON object"};
  if (a.max_level >= 0) opts["max_level"] = a.max_level;
  if (a.brute_level >= 0) opts["brute_level"] = a.brute_level;
  if (a.optimal_level >= 0) opts["optimal_level"] = a.optimal_level;
  if (a.cases >= 0) opts["cases"] = a.cases;
  if (a.max_weight >= 0) opts["max_weight"] = a.max_weight;
  if (a.matrices >= 0) opts["matrices"] = a.matrices;
  if (a.seed >= 0) opts["seed"] = a.seed;
  if (a.tolerance >= 0) opts["tolerance"] = a.tolerance;
  const std::string opt_text = opts.dump();

  std::vector<FormPtr> held;
  std::vector<const cf_form*> forms;
  for (const auto& p : a.forms) {
    held.push_back(load(p));
    forms.push_back(held.back().get());
  }
  std::vector<std::string> suites = a.suites;
  if (suites.size() == 1 && suites[0] == "all") {
    char* names = nullptr;
    check(cf_suite_names(&names), "suites");
    suites = json::parse(take(names)).get<std::vector<std::string>>();
  }

  std::vector<json> reports(suites.size());
  std::vector<Failure> errors;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < suites.size();) {
      char* out = nullptr;
      const cf_status s = cf_verify(suites[i].c_str(), opt_text.c_str(), forms.data(), static_cast<int>(forms.size()), &out);
      std::lock_guard lock(mu);
      if (s != CF_OK) {
        errors.push_back(Failure{exit_code_of(s), suites[i] + ": " + cf_last_error()});
        continue;
      }
      reports[i] = json::parse(take(out));
      std::cerr << (reports[i]["passed"].get<bool>() ? "PASS " : "FAIL ") << suites[i] << " ("
                << reports[i]["checks"] << " checks, " << reports[i]["failures"] << " failures)\n";
    }
  };
  const int jobs = std::max(1, std::min<int>(a.jobs, static_cast<int>(suites.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!errors.empty()) throw errors.front();

  bool ok = true;
  for (const auto& r : reports) ok = ok && r["passed"].get<bool>();
  json summary{{"passed", ok}, {"suites", reports}};
  write_text(a.report.empty() ? "-" : a.report, summary.dump(2) + "\n");
  return ok ? kExitPass : kExitFailed;
}

struct CacheArgs {
  long long level = 0, prec = 0;
  int weight = 2;
  std::string form;
};

int run_cache_build(const CacheArgs& a) {
  char* out = nullptr;
  if (!a.form.empty()) {
    FormPtr f = load(a.form);
    check(cf_cache_build_form(f.get(), &out), "cache build");
  } else {
    if (a.level <= 0 || a.prec <= 0) throw Failure{kExitUsage, "cache build needs --form or --level/--weight/--prec"};
    check(cf_cache_build_basis(a.level, a.weight, a.prec, &out), "cache build");
  }
  const json j = json::parse(take(out));
  const double cold = j["first"]["seconds"].get<double>(), warm = j["second"]["seconds"].get<double>();
  std::cerr << "cache " << (j["first"]["hit"].get<bool>() ? "hit" : "miss") << " " << cold << " s, reuse " << warm
            << " s";
  if (!j["first"]["hit"].get<bool>() && warm > 0) std::cerr << ", speedup " << cold / warm << "x";
  std::cerr << '\n';
  write_text("-", j.dump(2));
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier expansions of modular forms at cusps and their coefficient fields"};
  app.set_config("--config", "", "TOML or INI file with option defaults");
  app.set_version_flag("--version", std::string(cf_version()));
  app.require_subcommand(1);

  ExpandArgs ea;
  auto* expand = app.add_subcommand("expand", "expand f|g and report predicted and observed fields");
  expand->add_option("--form", ea.form, "form file")->required()->check(CLI::ExistingFile);
  expand->add_option("--matrix", ea.matrix, "g as A,B,C,D");
  expand->add_option("--prec", ea.prec, "number of coefficients in q^(1/N) (default: 4x Sturm)");
  expand->add_option("-o,--output", ea.output, "expansion file (default stdout)");
  expand->add_option("--summary", ea.summary, "summary JSON file (default <output>.summary.json)");
  expand->add_flag("--no-cache", ea.no_cache, "bypass the on-disk cache");

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "field bound for f|g without expanding");
  bound->add_option("--form", ba.form, "form file (coefficients optional)");
  bound->add_option("--level", ba.level, "level N for metadata-only use");
  bound->add_option("--weight", ba.weight, "weight k");
  bound->add_option("--character", ba.character, "character as 'N: g->r, ...'");
  bound->add_option("--field", ba.field, "K_f = Q(zeta_field)");
  bound->add_option("--matrix", ba.matrix, "g as A,B,C,D");
  bound->add_flag("--sweep-cusps", ba.sweep, "report every cusp of X0(N) with plan suggestions");

  OptimizeArgs oa;
  auto* optimize = app.add_subcommand("optimize", "reduction plan for a cusp, or replay of the plan on a form");
  optimize->add_option("--level", oa.level, "level N");
  optimize->add_option("--cusp", oa.cusp, "cusp a/c in lowest terms (1/0 for infinity)");
  optimize->add_option("--conductor", oa.conductor, "character conductor m");
  optimize->add_option("--al", oa.al, "Atkin-Lehner eigenvalues Q=+-1");
  optimize->add_option("--form", oa.form, "form file: execute the plan and compare with f|g")->check(CLI::ExistingFile);
  optimize->add_option("--matrix", oa.matrix, "g as A,B,C,D for replay");
  optimize->add_option("--prec", oa.prec, "replay precision");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("--suite", va.suites, "suite name, repeatable, or 'all'")->required();
  verify->add_option("--form", va.forms, "form files for form-based suites")->check(CLI::ExistingFile);
  verify->add_option("--options", va.options, "suite options as a JSON object");
  verify->add_option("--max-level", va.max_level, "largest level for Eisenstein suites");
  verify->add_option("--cases", va.cases, "random cases per suite");
  verify->add_option("--max-weight", va.max_weight, "largest weight for random cases");
  verify->add_option("--brute-level", va.brute_level, "level range for the translation brute force");
  verify->add_option("--optimal-level", va.optimal_level, "level range for the Atkin-Lehner brute force");
  verify->add_option("--matrices", va.matrices, "matrices per form for exact-field");
  verify->add_option("--tolerance", va.tolerance, "numeric tolerance");
  verify->add_option("--seed", va.seed, "random seed");
  verify->add_option("-j,--jobs", va.jobs, "suites run in parallel");
  verify->add_option("--report", va.report, "write the JSON report here (default stdout)");

  CacheArgs ca;
  auto* cache = app.add_subcommand("cache", "manage the on-disk cache");
  cache->require_subcommand(1);
  auto* build = cache->add_subcommand("build", "build a basis or a form decomposition and reuse it");
  build->add_option("--level", ca.level, "level N");
  build->add_option("--weight", ca.weight, "weight k");
  build->add_option("--prec", ca.prec, "precision");
  build->add_option("--form", ca.form, "form file")->check(CLI::ExistingFile);
  auto* inspect = cache->add_subcommand("inspect", "list entries and validate checksums");
  auto* purge = cache->add_subcommand("purge", "remove every entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*expand) return run_expand(ea);
    if (*bound) return run_bound(ba);
    if (*optimize) return run_optimize(oa);
    if (*verify) return run_verify(va);
    if (*build) return run_cache_build(ca);
    char* out = nullptr;
    if (*inspect) check(cf_cache_inspect(&out), "cache inspect");
    if (*purge) check(cf_cache_purge(&out), "cache purge");
    write_text("-", take(out));
    return kExitPass;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exit_code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}
