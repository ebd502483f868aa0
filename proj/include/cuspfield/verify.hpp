#pragma once

// Executable invariant suites shared by the CLI and the acceptance harness.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cuspfield/engine.hpp"

namespace cuspfield {

/// Records the primes dividing coefficient denominators of every f|g computed
/// from integral inputs, and whether each such prime divides the level.
struct DenominatorLog {
  std::size_t series = 0;
  std::size_t violations = 0;
  std::vector<std::string> details;
  void record(const QExpansion& fg, i64 level, const std::string& label);
};

struct SuiteOptions {
  i64 max_level = 6;               // eisenstein-galois, galois-slash-random, numeric-oracle
  std::vector<int> weights{1, 3};  // eisenstein-galois (tilde weight 2 is added when `tilde`)
  bool tilde = true;
  int max_weight = 4;      // galois-slash-random
  int cases = 20;          // random cases per suite
  i64 relation_prec = 500; // n2-relation
  i64 brute_level = 60;    // field-bounds-brute: translation range
  i64 optimal_level = 100; // field-bounds-brute: optimal Q range
  int matrices = 10;       // exact-field: matrices per form (at least)
  double tolerance = 1e-8; // numeric-oracle
  std::uint32_t seed = 1;
  std::vector<ModularFormInput> forms;  // form-based suites
  DenominatorLog* denominators = nullptr;
  std::function<void(const std::string&)> log;  // progress lines, optional
};

struct SuiteReport {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> failure_details;  // first few failures
  double seconds = 0;
  bool passed() const { return failures == 0 && checks > 0; }
  void check(bool ok, const std::string& what);
};

/// eisenstein-galois, n2-relation, galois-slash-random, numeric-oracle, fg-sigma,
/// field-bounds-brute, exact-field, atkin-lehner, level9-example, denominators.
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace cuspfield
