#include <algorithm>

#include "cuspfield/error.hpp"
#include "cuspfield/verify.hpp"
#include "doctest.h"

using namespace cuspfield;

TEST_CASE("suite registry") {
  const auto names = suite_names();
  CHECK(names.size() == 10);
  CHECK(std::find(names.begin(), names.end(), "exact-field") != names.end());
  CHECK_THROWS_AS(run_suite("no-such-suite", SuiteOptions{}), Error);
}

TEST_CASE("report semantics") {
  SuiteReport r;
  CHECK_FALSE(r.passed());  // nothing checked is not a pass
  r.check(true, "a");
  CHECK(r.passed());
  for (int i = 0; i < 20; ++i) r.check(false, "bad " + std::to_string(i));
  CHECK_FALSE(r.passed());
  CHECK(r.failures == 20);
  CHECK(r.checks == 21);
  CHECK(r.failure_details.size() < 20);
}

TEST_CASE("denominator log flags primes outside the level") {
  DenominatorLog log;
  QExpansion ok(11, 4, 1);
  ok.set_coeff(1, CycNumber::rational(mpq_class(1, 121)));
  log.record(ok, 11, "ok");
  CHECK(log.series == 1);
  CHECK(log.violations == 0);
  QExpansion bad(11, 4, 1);
  bad.set_coeff(2, CycNumber::rational(mpq_class(3, 22)));
  log.record(bad, 11, "bad");
  CHECK(log.series == 2);
  CHECK(log.violations == 1);
  REQUIRE(log.details.size() == 1);
  CHECK(log.details[0].find("bad") == 0);
}

TEST_CASE("small Eisenstein suites pass") {
  SuiteOptions o;
  o.max_level = 4;
  o.cases = 10;
  o.relation_prec = 40;
  o.brute_level = 12;
  o.optimal_level = 12;
  for (const char* s : {"eisenstein-galois", "n2-relation", "galois-slash-random", "numeric-oracle", "field-bounds-brute"}) {
    const SuiteReport r = run_suite(s, o);
    CHECK_MESSAGE(r.passed(), s);
    CHECK(r.checks > 0);
  }
}

TEST_CASE("random cases at N=2 avoid the zero odd-weight space") {
  SuiteOptions o;
  o.max_level = 2;
  o.max_weight = 3;
  o.cases = 15;
  const SuiteReport r = run_suite("galois-slash-random", o);
  CHECK(r.passed());
  CHECK(r.checks == 15);
}

TEST_CASE("a zero tolerance makes the numeric suite fail") {
  SuiteOptions o;
  o.max_level = 3;
  o.cases = 3;
  o.tolerance = 0;
  const SuiteReport r = run_suite("numeric-oracle", o);
  CHECK_FALSE(r.passed());
  CHECK(r.failures == 3);
}

TEST_CASE("form suites without forms check nothing") {
  SuiteOptions o;
  CHECK_FALSE(run_suite("exact-field", o).passed());
}
