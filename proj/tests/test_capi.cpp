#include <cstdlib>
#include <filesystem>
#include <memory>
#include <numeric>
#include <string>
#include <thread>

#include <unistd.h>

#include "cuspfield/cuspfield.h"
#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

using FormPtr = std::unique_ptr<cf_form, decltype(&cf_form_free)>;

std::string path_of(const std::string& name) { return std::string(CF_DATA_DIR) + "/" + name + ".form"; }

FormPtr load(const std::string& name) {
  cf_form* f = nullptr;
  REQUIRE(cf_form_load(path_of(name).c_str(), &f) == CF_OK);
  return FormPtr(f, &cf_form_free);
}

std::string take(char* s) {
  std::string out = s;
  cf_string_free(s);
  return out;
}

cf_matrix mat(long long a, long long b, long long c, long long d) { return cf_matrix{a, b, c, d}; }

}  // namespace

TEST_CASE("status codes and thread-local diagnostics") {
  cf_matrix m{};
  CHECK(cf_matrix_parse("0,-1,1,0", &m) == CF_OK);
  CHECK((m.a == 0 && m.b == -1 && m.c == 1 && m.d == 0));
  CHECK(std::string(cf_last_error()).empty());
  CHECK(cf_matrix_parse("1,2,x", &m) == CF_ERR_PARSE);
  CHECK_FALSE(std::string(cf_last_error()).empty());
  std::string other;
  std::thread([&] { other = cf_last_error(); }).join();
  CHECK(other.empty());

  cf_form* f = nullptr;
  CHECK(cf_form_load("/nonexistent/form", &f) == CF_ERR_IO);
  CHECK(f == nullptr);
  CHECK(cf_form_load(nullptr, &f) == CF_ERR_INVALID_ARGUMENT);
  CHECK(cf_form_parse("level 11\nweight\n", &f) == CF_ERR_PARSE);
  char* out = nullptr;
  CHECK(cf_verify("no-such-suite", nullptr, nullptr, 0, &out) == CF_ERR_INVALID_ARGUMENT);
  CHECK(cf_verify("n2-relation", "{not json", nullptr, 0, &out) == CF_ERR_PARSE);
  CHECK(cf_verify("n2-relation", "{\"bogus\": 1}", nullptr, 0, &out) == CF_ERR_INVALID_ARGUMENT);
  cf_string_free(nullptr);
}

TEST_CASE("form info and serialization round trip") {
  FormPtr f = load("level11");
  const json info = json::parse(take([&] {
    char* s = nullptr;
    REQUIRE(cf_form_info(f.get(), &s) == CF_OK);
    return s;
  }()));
  CHECK(info["level"] == 11);
  CHECK(info["weight"] == 2);
  CHECK(info["newform"] == true);
  CHECK(info["kf"]["description"] == "Q");
  CHECK(info["atkin_lehner"]["11"] == -1);

  char* text = nullptr;
  REQUIRE(cf_form_serialize(f.get(), &text) == CF_OK);
  const std::string first = take(text);
  cf_form* g = nullptr;
  REQUIRE(cf_form_parse(first.c_str(), &g) == CF_OK);
  FormPtr held(g, &cf_form_free);
  REQUIRE(cf_form_serialize(g, &text) == CF_OK);
  CHECK(take(text) == first);
}

TEST_CASE("expand at the identity reindexes the input") {
  FormPtr f = load("level11");
  char* series = nullptr;
  char* summary = nullptr;
  REQUIRE(cf_expand(f.get(), mat(1, 0, 0, 1), 45, 0, &series, &summary) == CF_OK);
  const std::string s = take(series);
  const json j = json::parse(take(summary));
  CHECK(s.rfind("w=11 prec=45 M=11\n", 0) == 0);
  // q - 2q^2 - q^3 + 2q^4 in q^(1/11)
  std::vector<std::string> lines;
  std::size_t pos = s.find('\n') + 1;
  while (pos < s.size()) {
    const std::size_t e = s.find('\n', pos);
    lines.push_back(s.substr(pos, e - pos));
    pos = e + 1;
  }
  REQUIRE(lines.size() == 45);
  // coordinates in the power basis of Q(zeta_11)
  auto rational = [](const std::string& v) { return "11:[" + v + ",0,0,0,0,0,0,0,0,0]"; };
  CHECK(lines[11] == rational("1"));
  CHECK(lines[22] == rational("-2"));
  CHECK(lines[33] == rational("-1"));
  CHECK(lines[44] == rational("2"));
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (i % 11 != 0) CHECK(lines[i] == rational("0"));
  CHECK(j["verdict"] == "EXACT");
  CHECK(j["observed_field"]["description"] == "Q");
  CHECK(j["cache"] == "off");
}

TEST_CASE("level-11 newform at the cusp 0 has rational coefficients") {
  FormPtr f = load("level11");
  char* series = nullptr;
  char* summary = nullptr;
  REQUIRE(cf_expand(f.get(), mat(0, -1, 1, 0), 0, 0, &series, &summary) == CF_OK);
  const json j = json::parse(take(summary));
  take(series);
  CHECK(j["observed_field"]["description"] == "Q");
  CHECK(j["predicted_field"]["description"] == "Q");
  CHECK(j["verdict"] == "EXACT");
}

TEST_CASE("level-9 example through the interface") {
  FormPtr f = load("level9");
  char* series = nullptr;
  char* summary = nullptr;
  REQUIRE(cf_expand(f.get(), mat(0, -1, 1, 3), 0, 0, &series, &summary) == CF_OK);
  take(series);
  const json j = json::parse(take(summary));
  CHECK(j["in_predicted_module"] == true);
  CHECK(j["verdict"] == "CONTAINED");
  CHECK(j["predicted_module"] == "zeta_9^2 * Q(zeta_3)");
  CHECK(j["predicted_field"]["description"] == "Q(zeta_9)");
  CHECK(j["observed_field"]["description"] == "Q(zeta_9)");

  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(cf_bound(f.get(), mat(0, -1, 1, 3), &a) == CF_OK);
  REQUIRE(cf_bound_metadata(9, 3, "9: 2->1/6", 3, mat(0, -1, 1, 3), &b) == CF_OK);
  const json from_form = json::parse(take(a)), from_meta = json::parse(take(b));
  CHECK(from_form == from_meta);
  CHECK(from_meta["nprime"] == 3);
  CHECK(from_meta["mprime"] == 9);
  CHECK(from_meta["gprime"] == json::array({1, 4, 7}));
  CHECK(from_meta["rejected_zeta_exponents"] == json::array({1}));
  CHECK(from_meta["zeta_exponent"] == 2);
  CHECK(from_meta["c"] == "9:[0,0,3,0,0,0]");
  CHECK(from_meta["module"] == "zeta_9^2 * Q(zeta_3)");
}

TEST_CASE("bound in metadata-only mode") {
  char* out = nullptr;
  REQUIRE(cf_bound_metadata(23, 1, "23: 5->1/2", 1, mat(1, 5, 0, 1), &out) == CF_OK);
  const json j = json::parse(take(out));
  CHECK(j["nprime"] == 1);
  CHECK(j["weight"] == 1);
  CHECK(cf_bound_metadata(0, 2, nullptr, 1, mat(1, 0, 0, 1), &out) == CF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("cusp sweep on X0(36)") {
  FormPtr f = load("level36");
  char* out = nullptr;
  REQUIRE(cf_bound_sweep(f.get(), &out) == CF_OK);
  const json j = json::parse(take(out));
  REQUIRE(j["cusps"].size() == 12);
  for (const auto& c : j["cusps"]) {
    const long long delta = std::stoll(c["cusp"].get<std::string>().substr(c["cusp"].get<std::string>().find('/') + 1));
    const long long d = delta == 0 ? 36 : delta;
    const long long g = std::gcd(d, 36 / d);
    CHECK(c["suggestion"]["mprime"] == g);
  }
}

TEST_CASE("optimizer plans and replay") {
  char* out = nullptr;
  REQUIRE(cf_optimize(36, 1, 6, 1, &out) == CF_OK);
  json j = json::parse(take(out));
  CHECK(j["Q"] == 36);
  CHECK(j["mprime"] == 6);
  REQUIRE(cf_optimize(36, 1, 0, 1, &out) == CF_OK);
  j = json::parse(take(out));
  CHECK(j["Q"] == 1);
  CHECK(j["mprime"] == 1);
  CHECK(j["u"] == 0);
  CHECK(cf_optimize(36, 2, 6, 1, &out) == CF_ERR_INVALID_ARGUMENT);
  CHECK(cf_optimize(36, 1, 6, 5, &out) == CF_ERR_INVALID_ARGUMENT);

  FormPtr f = load("level36");
  REQUIRE(cf_optimize_replay(f.get(), mat(1, 0, 6, 1), 72, &out) == CF_OK);
  j = json::parse(take(out));
  CHECK(j["replay_equal"] == true);
  CHECK(j["working_series_field"]["conductor"].get<long long>() <= 6);
}

TEST_CASE("verify through the interface") {
  char* out = nullptr;
  REQUIRE(cf_suite_names(&out) == CF_OK);
  const json names = json::parse(take(out));
  CHECK(names.size() == 10);
  REQUIRE(cf_verify("n2-relation", "{\"relation_prec\": 60}", nullptr, 0, &out) == CF_OK);
  json r = json::parse(take(out));
  CHECK(r["passed"] == true);
  CHECK(r["checks"] == 63);

  FormPtr f = load("level9");
  const cf_form* forms[] = {f.get()};
  REQUIRE(cf_verify("level9-example", nullptr, forms, 1, &out) == CF_OK);
  r = json::parse(take(out));
  CHECK(r["passed"] == true);
  CHECK(r["denominator_series"].get<int>() >= 1);
  CHECK(r["denominator_violations"] == 0);
}

TEST_CASE("cache management") {
  const auto dir = std::filesystem::temp_directory_path() / ("cf-capi-cache-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  setenv("CUSPFIELD_CACHE_DIR", dir.c_str(), 1);
  char* out = nullptr;
  REQUIRE(cf_cache_build_basis(3, 2, 12, &out) == CF_OK);
  json j = json::parse(take(out));
  CHECK(j["first"]["hit"] == false);
  CHECK(j["second"]["hit"] == true);
  CHECK(j["rank"] == 3);
  REQUIRE(cf_cache_inspect(&out) == CF_OK);
  j = json::parse(take(out));
  REQUIRE(j["entries"].size() == 1);
  CHECK(j["entries"][0]["valid"] == true);
  REQUIRE(cf_cache_purge(&out) == CF_OK);
  CHECK(json::parse(take(out))["removed"] == 1);
  REQUIRE(cf_cache_inspect(&out) == CF_OK);
  CHECK(json::parse(take(out))["entries"].empty());
  std::filesystem::remove_all(dir);
  unsetenv("CUSPFIELD_CACHE_DIR");
}
