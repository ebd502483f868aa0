#pragma once

// Decomposition of modular forms into products of weight-1 Eisenstein series
// and exact expansions of f|_k g at arbitrary cusps.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cuspfield/characters.hpp"
#include "cuspfield/eisenstein.hpp"

namespace cuspfield {

enum class GroupTag { Gamma, Gamma1, Gamma0 };

std::string group_tag_name(GroupTag tag);
GroupTag parse_group_tag(std::string_view text);

struct ModularFormInput {
  std::string name;
  i64 level = 1;
  int weight = 2;
  GroupTag group = GroupTag::Gamma0;
  std::optional<DirichletCharacter> character;  // Gamma0 only
  i64 field_modulus = 1;                        // coefficients lie in Q(zeta_n)
  QExpansion expansion;                         // width 1, or width N for Gamma(N)
  bool is_newform = false;
  std::map<i64, int> atkin_lehner;  // Q -> +-1

  /// Character modulo N (trivial when none is declared).
  DirichletCharacter chi() const;
  i64 expansion_width() const { return group == GroupTag::Gamma ? level : 1; }
  /// Expansion in q^(1/N).
  QExpansion at_level_width() const;
  /// Checks every declared invariant; `with_expansion` also enforces the
  /// precision requirement.
  void validate(bool with_expansion = true) const;
  /// f^sigma_lambda: conjugated coefficients and character.
  ModularFormInput galois_conjugate(i64 lambda) const;
  /// Stable identity used for caching decompositions.
  std::string cache_key() const;
};

struct EisTerm {
  EisMonomial monomial;
  CycNumber coeff;
};

struct EisDecomposition {
  i64 level = 1;
  int weight = 0;
  std::vector<EisTerm> terms;  // canonical monomials, distinct, nonzero coefficients

  /// Common modulus of the coefficients and zeta_N.
  i64 modulus() const;
  std::string to_string() const;
};

/// Coefficients of q^(n/N) that determine a form in M_k(Gamma(N)).
i64 sturm_bound(i64 n, int k);
/// Coefficients of q^n that determine a form in M_k(Gamma0(N), chi).
i64 sturm_bound_gamma0(i64 n, int k);
/// (k-1)(g-1) + k c / 2 for Gamma(N), N >= 2, k >= 2 (0 for odd k when N = 2).
i64 dim_modular_forms_gamma(i64 n, int k);

struct EisBasis {
  i64 level = 1;
  int weight = 0;
  i64 prec = 0;
  std::vector<EisMonomial> monomials;
  std::vector<QExpansion> expansions;
  std::size_t rank() const { return monomials.size(); }
};

/// Saturated set of independent monomials spanning M_k(Gamma(N)).
EisBasis build_basis(i64 n, int k, i64 prec);

/// Width-N expansion in terms of a basis; the residual is checked on every
/// coefficient of f.
EisDecomposition express_in_basis(const QExpansion& f, const EisBasis& basis);
EisDecomposition express_in_basis(const ModularFormInput& f);

/// Sum of coeff * monomial built from explicit terms (canonicalized and merged).
EisDecomposition make_decomposition(i64 n, int k, const std::vector<EisTerm>& terms);

/// Decomposition of f|g: every index moves to (a, b) g.
EisDecomposition slash_decomposition(const EisDecomposition& d, const MatZ& g);
/// Decomposition of f^sigma_lambda: coefficients conjugated, (a, b) -> (a, lambda b).
EisDecomposition galois_decomposition(const EisDecomposition& d, i64 lambda);

/// Width-N expansion of the decomposed form slashed by g.
QExpansion evaluate(const EisDecomposition& d, const MatZ& g, i64 prec);

/// N * 4 * Sturm for Gamma0/Gamma1 inputs, 4 * Sturm(Gamma(N)) otherwise.
i64 default_precision(const ModularFormInput& f);

/// f|_k g to precision prec in q^(1/N).
QExpansion slash_expand(const ModularFormInput& f, const MatZ& g, i64 prec);

/// (f|g)^sigma = f^sigma | g_lambda on a decomposition.
bool galois_slash_check(const EisDecomposition& d, const MatZ& g, i64 lambda, i64 prec);
/// Same, with f^sigma decomposed independently from its own expansion.
bool galois_slash_check(const ModularFormInput& f, const MatZ& g, i64 lambda, i64 prec);

/// Cached decomposition of f.
const EisDecomposition& decomposition_of(const ModularFormInput& f);
void clear_decomposition_cache();

}  // namespace cuspfield
