#pragma once

// Dirichlet characters modulo N with values chi(g_i) = exp(2 pi i r_i) on the
// canonical generators of (Z/NZ)^x.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuspfield/cyclotomic.hpp"

namespace cuspfield {

struct UnitGenerator {
  i64 value;  // generator as a residue modulo N
  i64 order;
};

/// Canonical generators: CRT order over prime powers; smallest primitive root
/// for odd p^e; -1 for 4; -1 and 5 for 2^e with e >= 3.
std::vector<UnitGenerator> unit_generators(i64 n);

class DirichletCharacter {
 public:
  DirichletCharacter() : DirichletCharacter(trivial(1)) {}

  static DirichletCharacter trivial(i64 n);
  /// chi(g_i) = exp(2 pi i r_i) for the canonical generators g_i.
  static DirichletCharacter from_generator_exponents(i64 n, const std::vector<mpq_class>& r);

  i64 modulus() const { return modulus_; }
  const std::vector<mpq_class>& generator_exponents() const { return gen_exps_; }
  i64 order() const { return order_; }
  bool is_trivial() const { return order_ == 1; }

  /// r in [0,1) with chi(a) = exp(2 pi i r); nullopt if gcd(a, N) > 1.
  std::optional<mpq_class> exponent(i64 a) const;
  /// chi(a) as an element of Q(zeta_order) (0 for non-units).
  CycNumber value(i64 a) const;
  /// chi(a) embedded into Q(zeta_M); order() must divide M.
  CycNumber value_in(i64 a, i64 m) const;
  /// +1 or -1.
  int parity() const;

  i64 conductor() const;
  DirichletCharacter primitive() const;
  /// The character modulo a multiple of N induced by this one.
  DirichletCharacter extend(i64 multiple) const;
  DirichletCharacter conj() const;
  /// chi^lambda (the Galois conjugate by sigma_lambda).
  DirichletCharacter power(i64 lambda) const;
  friend bool operator==(const DirichletCharacter& x, const DirichletCharacter& y) {
    return x.modulus_ == y.modulus_ && x.table_ == y.table_;
  }

  /// "N: g1->r1, g2->r2" (empty list for the trivial character mod 1).
  std::string to_string() const;

 private:
  DirichletCharacter(i64 n, std::vector<mpq_class> table);
  static mpq_class frac(const mpq_class& x);

  i64 modulus_ = 1;
  i64 order_ = 1;
  std::vector<mpq_class> gen_exps_;
  std::vector<mpq_class> table_;  // exponent per residue, -1 for non-units
};

/// chi = chi_Q * chi_{N/Q} with moduli Q and N/Q; Q must be a maximal divisor.
std::pair<DirichletCharacter, DirichletCharacter> q_part(const DirichletCharacter& chi, i64 q);

/// Gauss sum of a primitive character.
CycNumber gauss_sum(const DirichletCharacter& chi);
/// sum_{u in (Z/N)^x} chi(u) zeta_N^u for any character modulo N.
CycNumber gauss_sum_raw(const DirichletCharacter& chi);

AbelianFieldDescriptor field_of_character(const DirichletCharacter& chi);

}  // namespace cuspfield
