// Acceptance harness: one PASS/FAIL line per criterion, exit 0 when all pass.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "cuspfield/cuspfield.h"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

using FormPtr = std::unique_ptr<cf_form, decltype(&cf_form_free)>;

struct Criterion {
  int id;
  std::string title;
  std::string suite;
  json options;
  std::vector<std::string> forms;
  std::string tolerance;
};

struct DenominatorTotals {
  std::size_t series = 0;
  std::size_t violations = 0;
  std::vector<std::string> details;
};

FormPtr load(const std::string& dir, const std::string& name) {
  cf_form* f = nullptr;
  const std::string path = dir + "/" + name + ".form";
  if (cf_form_load(path.c_str(), &f) != CF_OK) {
    std::cerr << "cannot load " << path << ": " << cf_last_error() << '\n';
    return FormPtr(nullptr, &cf_form_free);
  }
  return FormPtr(f, &cf_form_free);
}

json run(const Criterion& c, const std::string& dir) {
  std::vector<FormPtr> held;
  std::vector<const cf_form*> forms;
  for (const auto& name : c.forms) {
    held.push_back(load(dir, name));
    if (!held.back()) return json{{"passed", false}, {"error", "missing form " + name}};
    forms.push_back(held.back().get());
  }
  char* out = nullptr;
  const std::string opts = c.options.dump();
  if (cf_verify(c.suite.c_str(), opts.c_str(), forms.data(), static_cast<int>(forms.size()), &out) != CF_OK)
    return json{{"passed", false}, {"error", cf_last_error()}};
  json r = json::parse(out);
  cf_string_free(out);
  return r;
}

void print_line(bool ok, int id, const std::string& title, const std::string& detail) {
  std::printf("%s [%2d] %s | %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : CF_DATA_DIR;
  const std::vector<std::string> all_forms{"level9", "level11", "level27", "level32", "level36"};

  const std::vector<Criterion> criteria{
      {1, "Eisenstein Galois-slash compatibility, N<=8, k in {1,3} and tilde 2, g in {S,T,ST}, all lambda",
       "eisenstein-galois", {{"max_level", 8}, {"weights", {1, 3}}, {"tilde", true}}, {}, "exact"},
      {2, "N=2 tilde relation to precision 500", "n2-relation", {{"relation_prec", 500}}, {}, "exact"},
      {3, "Galois-slash check on 200 random combinations, N<=8, k<=4", "galois-slash-random",
       {{"cases", 200}, {"max_level", 8}, {"max_weight", 4}, {"seed", 1}}, {}, "exact"},
      {4, "Numeric modularity oracle, 50 cases, entries <=5, three sample points", "numeric-oracle",
       {{"cases", 50}, {"max_level", 8}, {"tolerance", 1e-8}, {"seed", 1}}, {}, "abs error < 1e-8"},
      {5, "Level-9 weight-3 worked example: N', m', G', c and membership of f|(0,-1;1,3)", "level9-example", json::object(),
       {"level9"}, "exact"},
      {6, "Exact-field certification, levels 11 and 36, >=10 matrices over all gcd(CD,N)", "exact-field",
       {{"matrices", 10}}, {"level11", "level36"}, "exact"},
      {7, "Closed-form translation modulus vs brute force, N<=60, 20 matrices per N", "field-bounds-brute",
       {{"brute_level", 60}, {"optimal_level", 0}, {"seed", 1}}, {}, "exact"},
      {8, "Optimal Atkin-Lehner Q vs all maximal divisors, N<=100, all delta", "field-bounds-brute",
       {{"brute_level", 0}, {"optimal_level", 100}}, {}, "exact"},
      {9, "Atkin-Lehner containment, Atkin-Li cross-check and |lambda_Q|=1", "atkin-lehner", json::object(), all_forms,
       "exact; |lambda|-1 < 1e-10"},
  };

  DenominatorTotals den;
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  auto absorb = [&](const json& r) {
    if (!r.contains("denominator_series")) return;
    den.series += r["denominator_series"].get<std::size_t>();
    den.violations += r["denominator_violations"].get<std::size_t>();
    for (const auto& d : r["denominator_details"]) den.details.push_back(d.get<std::string>());
  };
  for (const auto& c : criteria) {
    const json r = run(c, dir);
    absorb(r);
    const bool ok = r.value("passed", false);
    std::string detail;
    if (r.contains("error")) detail = "error: " + r["error"].get<std::string>();
    else {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%zu checks, %zu failures, %.1f s, tolerance %s", r["checks"].get<std::size_t>(),
                    r["failures"].get<std::size_t>(), r["seconds"].get<double>(), c.tolerance.c_str());
      detail = buf;
      if (!ok && !r["failure_details"].empty()) detail += "; first: " + r["failure_details"][0].get<std::string>();
    }
    print_line(ok, c.id, c.title, detail);
    failed += ok ? 0 : 1;
  }

  // The denominator criterion covers every f|g above plus the dedicated sweep.
  for (const char* suite : {"fg-sigma", "denominators"}) {
    const json r = run(Criterion{10, "", suite, json::object(), all_forms, "exact"}, dir);
    absorb(r);
    if (!r.value("passed", false)) den.violations += 1, den.details.push_back(std::string(suite) + " did not pass");
  }
  const bool den_ok = den.series > 0 && den.violations == 0;
  print_line(den_ok, 10, "Denominator primes of every computed f|g divide N",
             std::to_string(den.series) + " series, " + std::to_string(den.violations) + " violations, tolerance exact" +
                 (den.details.empty() ? "" : "; first: " + den.details.front()));
  failed += den_ok ? 0 : 1;

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/10 criteria passed in %.1f s\n", 10 - failed, secs);
  return failed == 0 ? 0 : 1;
}
