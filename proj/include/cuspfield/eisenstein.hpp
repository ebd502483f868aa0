#pragma once

// Eisenstein series E^(k)_{a,b} and tilde E^(2)_{a,b} of level N: constant
// terms, q-expansions in q^(1/N), the GL2(Z/N) index action and monomials.

#include <compare>
#include <string>
#include <vector>

#include "cuspfield/modmatrix.hpp"
#include "cuspfield/qseries.hpp"

namespace cuspfield {

struct EisIndex {
  i64 level = 1;
  i64 a = 0, b = 0;  // residues in [0, level)
  int weight = 1;
  bool tilde = false;  // only for weight 2: E^(2)_{a,b} - E^(2)_{0,0}

  EisIndex() = default;
  EisIndex(i64 level, i64 a, i64 b, int weight, bool tilde = false);

  friend auto operator<=>(const EisIndex&, const EisIndex&) = default;
  std::string to_string() const;
};

/// Representative of {(a,b), (-a,-b)} with E_{-a,-b} = (-1)^k E_{a,b}.
/// sign is 0 when the series vanishes identically.
struct SignedIndex {
  EisIndex index;
  int sign;
};
SignedIndex canonical(const EisIndex& idx);

/// (a, b) -> (a, b) gamma.
EisIndex index_slash(const EisIndex& idx, const MatModN& gamma);

CycNumber eis_constant_term(const EisIndex& idx);
/// Width-N expansion to precision prec (exponents n/N, n < prec).
QExpansion eis_expansion(const EisIndex& idx, i64 prec);

class EisMonomial {
 public:
  EisMonomial() = default;
  EisMonomial(i64 level, std::vector<EisIndex> factors);

  i64 level() const { return level_; }
  const std::vector<EisIndex>& factors() const { return factors_; }
  int weight() const;
  std::string to_string() const;
  friend auto operator<=>(const EisMonomial&, const EisMonomial&) = default;

 private:
  i64 level_ = 1;
  std::vector<EisIndex> factors_;  // sorted
};

/// Canonical factors and accumulated sign (0 if a factor vanishes).
struct SignedMonomial {
  EisMonomial monomial;
  int sign;
};
SignedMonomial canonical(const EisMonomial& m);
EisMonomial index_slash(const EisMonomial& m, const MatModN& gamma);

/// Product of the factor expansions; cached.
QExpansion monomial_expansion(const EisMonomial& m, i64 prec);

/// Number of monomial expansions currently cached (for diagnostics).
std::size_t monomial_cache_size();
void clear_monomial_cache();

}  // namespace cuspfield
