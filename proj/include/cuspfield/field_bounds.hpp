#pragma once

// Coefficient-field bounds for f|g: N', m', M, chi_g, c_{chi,g}, Atkin-Lehner
// bounds and pseudo-eigenvalues, the cusp optimizers and exact-field
// certification.

#include <string>
#include <vector>

#include "cuspfield/characters.hpp"
#include "cuspfield/engine.hpp"
#include "cuspfield/modmatrix.hpp"

namespace cuspfield {

/// N / gcd(C D, N) with gcd(0, N) = N.
i64 nprime(i64 n, const MatZ& g);

struct FormMetadata {
  i64 level = 1;
  int weight = 2;
  DirichletCharacter chi;  // modulo N
  AbelianFieldDescriptor kf;
};

/// Metadata of a form; K_f is computed from the coefficients a_n, n >= 1.
FormMetadata metadata_of(const ModularFormInput& f);

struct FieldBoundReport {
  i64 nprime = 1;
  i64 mprime = 1;
  i64 M = 1;
  UnitSubgroup gprime;
  std::vector<std::pair<i64, CycNumber>> chi_g_values;  // mu -> chi(AD - mu^-1 BC)
  std::vector<i64> rejected_zetas;                      // exponents j with c = 0
  i64 zeta_choice = 1;                                  // zeta = zeta_{m'}^j
  CycNumber c;                                          // c_{chi,g}
  AbelianFieldDescriptor base_field;                    // K_f(zeta_{N'})
  AbelianFieldDescriptor composite_field;               // F * K_f(zeta_{N'})

  /// v lies in c * K_f(zeta_{N'}).
  bool in_module(const CycNumber& v) const;
  std::string module_description() const;
};

/// chi(AD - mu^-1 BC) for the primitive character behind chi.
CycNumber chi_g_value(const DirichletCharacter& chi, const MatZ& g, i64 mu);

FieldBoundReport field_bound(const FormMetadata& f, const MatZ& g);

/// Exhaustive check that mu -> chi(AD - mu^-1 BC) is multiplicative on G'.
bool chi_g_hom_check(const DirichletCharacter& chi, const MatZ& g, const AbelianFieldDescriptor& kf);

struct AtkinLehnerBound {
  i64 q = 1;
  int weight = 2;
  // Q^(k/2) = scale_rational * sqrt(scale_radical)
  mpq_class scale_rational = 1;
  i64 scale_radical = 1;
  CycNumber scalar;  // 1, or G'(chi_Q)
  AbelianFieldDescriptor field;
  std::vector<std::pair<i64, CycNumber>> chi_hq_values;  // u -> conj(chi_Q(u)) on (Z/Q)^x
  std::string description() const;
};

AtkinLehnerBound atkin_lehner_bound(const FormMetadata& f, i64 q);

/// rational * sqrt(radical) with radical squarefree.
struct RadicalNumber {
  CycNumber value;
  i64 radical = 1;
  friend bool operator==(const RadicalNumber& a, const RadicalNumber& b) {
    return a.radical == b.radical && a.value == b.value;
  }
  std::complex<double> to_complex() const;
  std::string to_string() const;
};

/// Q^(k/2-1) G(chi_Q) / a_Q for Q the full q-power part of N.
RadicalNumber atkin_li_lambda(const ModularFormInput& f, i64 q);
/// Q^(k/2) times the coefficient of q^(1/Q) in f|h_Q, from the engine.
RadicalNumber engine_pseudo_eigenvalue(const ModularFormInput& f, i64 q);

struct Translation {
  i64 mprime;
  i64 u;
};

/// lcm(N / gcd(C(uC+D), N), m / gcd(C(uA+B), m)).
i64 translation_modulus(i64 n, i64 m, const MatZ& g, i64 u);
/// Closed-form minimum over u and a witness u attaining it.
Translation minimal_M_translation(i64 n, i64 m, const MatZ& g);

struct OptimalQ {
  i64 q;
  i64 mprime;
};

/// N_{delta'} / delta' for the cusp W_Q alpha, alpha of denominator delta.
i64 atkin_lehner_cusp_modulus(i64 delta, i64 n, i64 q);
OptimalQ optimal_atkin_lehner_Q(i64 delta, i64 n);

/// Reduction of f|g to an Atkin-Lehner image of a cusp with the smallest
/// working field: f|g = eps * (f|h_Q g2)|upper with diag(Q,1) g = g2 upper and
/// f|g' T^u having coefficients in K_f(zeta_{M'}), g' = h_Q g2.
struct CuspPlan {
  i64 level = 1;
  i64 conductor = 1;  // character conductor m
  MatZ g;
  i64 delta = 1;  // gcd(C, N)
  i64 q = 1;
  i64 mprime = 1;  // gcd(delta, N / delta) for m = 1
  MatZ h;          // h_Q
  MatZ g2;
  MatZ upper;
  MatZ gprime;  // h_Q g2
  i64 u = 0;    // translation witness for g'
  i64 translated_mprime = 1;
  std::string describe() const;
};

CuspPlan plan_cusp(i64 n, i64 m, const MatZ& g);

/// f|g reconstructed from the plan; needs the W_Q eigenvalue of f (taken from
/// the form's table, or computed when absent). Trivial character only.
QExpansion replay_plan(const ModularFormInput& f, const CuspPlan& plan, i64 prec);
/// f|g' T^u, the series whose coefficients lie in K_f(zeta_{M'}).
QExpansion plan_working_series(const ModularFormInput& f, const CuspPlan& plan, i64 prec);

enum class FieldVerdict { Exact, StrictlySmaller, Contained, NotContained };
std::string verdict_name(FieldVerdict v);

struct Certification {
  FieldVerdict verdict;
  AbelianFieldDescriptor predicted;
  AbelianFieldDescriptor observed;
  i64 nprime;
};

Certification certify_exact_field(const ModularFormInput& f, const MatZ& g, i64 prec);

}  // namespace cuspfield
