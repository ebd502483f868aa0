#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_M), stored in the power basis
// 1, zeta, ..., zeta^(phi(M)-1) modulo the M-th cyclotomic polynomial.

#include <gmpxx.h>

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cuspfield/arith.hpp"

namespace cuspfield {

/// Per-modulus data: the cyclotomic polynomial and the power-basis coordinates
/// of every power of zeta_M. Shared, immutable after construction.
struct CycloData {
  i64 modulus;
  i64 degree;                              // phi(M)
  std::vector<i64> poly;                   // Phi_M, ascending, monic
  std::vector<std::vector<i64>> zeta_pow;  // zeta_pow[j] = coords of zeta_M^j, j in [0, M)
};

/// Thread-safe cache; one construction per modulus.
const CycloData& cyclo_data(i64 modulus);

class CycNumber {
 public:
  /// Zero in Q = Q(zeta_1).
  CycNumber();
  CycNumber(i64 modulus, std::vector<mpq_class> coords);

  static CycNumber zero(i64 modulus = 1);
  static CycNumber one(i64 modulus = 1);
  static CycNumber rational(const mpq_class& q, i64 modulus = 1);
  static CycNumber from_int(i64 v, i64 modulus = 1) { return rational(mpq_class(v), modulus); }
  /// zeta_M^j.
  static CycNumber zeta(i64 modulus, i64 j = 1);

  i64 modulus() const { return modulus_; }
  std::span<const mpq_class> coords() const { return coords_; }
  const mpq_class& coord(std::size_t i) const { return coords_[i]; }

  bool is_zero() const;
  bool is_rational() const;
  /// Rational value; requires is_rational().
  mpq_class to_rational() const;

  CycNumber operator-() const;
  CycNumber& operator+=(const CycNumber& o);
  CycNumber& operator-=(const CycNumber& o);
  CycNumber& operator*=(const CycNumber& o);
  CycNumber& operator/=(const CycNumber& o);
  CycNumber& operator*=(const mpq_class& q);
  friend CycNumber operator+(CycNumber a, const CycNumber& b) { return a += b; }
  friend CycNumber operator-(CycNumber a, const CycNumber& b) { return a -= b; }
  friend CycNumber operator*(CycNumber a, const CycNumber& b) { return a *= b; }
  friend CycNumber operator/(CycNumber a, const CycNumber& b) { return a /= b; }
  friend CycNumber operator*(CycNumber a, const mpq_class& q) { return a *= q; }
  friend bool operator==(const CycNumber& a, const CycNumber& b);

  /// Multiplicative inverse; throws Domain on zero.
  CycNumber inv() const;

  /// Same element in Q(zeta_{target}); target must be a multiple of modulus().
  CycNumber embed(i64 target) const;
  /// Same element in Q(zeta_{target}) for target | modulus(); throws Domain if
  /// the element does not lie in that subfield.
  CycNumber descend(i64 target) const;
  /// Representation over the smallest cyclotomic field containing the element.
  CycNumber minimal() const;

  /// sigma_lambda: zeta_M -> zeta_M^lambda. lambda must be coprime to M.
  CycNumber galois(i64 lambda) const;
  /// Complex conjugation (sigma_{-1}).
  CycNumber conj() const { return galois(-1); }

  std::complex<double> to_complex() const;

  /// `M:[r0,r1,...]`, rationals in lowest terms.
  std::string to_string() const;
  static CycNumber parse(std::string_view text);

 private:
  i64 modulus_;
  std::vector<mpq_class> coords_;
};

/// Embed a and b into Q(zeta_lcm).
void unify(CycNumber& a, CycNumber& b);
/// Common modulus of a collection (lcm of moduli).
i64 common_modulus(std::span<const CycNumber> values);

/// Subgroup H of (Z/MZ)^x, stored as its full element list (sorted) together
/// with the generators it was built from.
class UnitSubgroup {
 public:
  UnitSubgroup() : elements_{0} {}

  static UnitSubgroup generated(i64 modulus, std::vector<i64> gens);
  static UnitSubgroup full(i64 modulus);
  static UnitSubgroup trivial(i64 modulus) { return generated(modulus, {}); }
  /// ker((Z/LZ)^x -> (Z/dZ)^x), d | L.
  static UnitSubgroup reduction_kernel(i64 modulus, i64 d);

  i64 modulus() const { return modulus_; }
  std::span<const i64> elements() const { return elements_; }
  std::span<const i64> generators() const { return gens_; }
  std::size_t order() const { return elements_.size(); }
  bool contains(i64 x) const;
  bool is_subgroup_of(const UnitSubgroup& other) const;

  /// Preimage under (Z/LZ)^x -> (Z/MZ)^x for M | L.
  UnitSubgroup lift(i64 target) const;
  /// Image under (Z/MZ)^x -> (Z/dZ)^x for d | M.
  UnitSubgroup project(i64 d) const;
  UnitSubgroup intersect(const UnitSubgroup& other) const;
  /// Subgroup generated by both (same modulus).
  UnitSubgroup join(const UnitSubgroup& other) const;

  friend bool operator==(const UnitSubgroup& a, const UnitSubgroup& b) {
    return a.modulus_ == b.modulus_ && a.elements_ == b.elements_;
  }

 private:
  i64 modulus_ = 1;
  std::vector<i64> gens_;
  std::vector<i64> elements_;
};

/// Abelian number field described as the fixed field of {sigma_l : l in H}
/// inside Q(zeta_M).
class AbelianFieldDescriptor {
 public:
  AbelianFieldDescriptor() : AbelianFieldDescriptor(rational()) {}
  AbelianFieldDescriptor(i64 modulus, UnitSubgroup stabilizer);

  static AbelianFieldDescriptor rational();
  static AbelianFieldDescriptor cyclotomic(i64 m);

  i64 modulus() const { return modulus_; }
  const UnitSubgroup& stabilizer() const { return stabilizer_; }
  i64 degree() const;

  /// Stabilizer after embedding into Q(zeta_L), M | L.
  UnitSubgroup stabilizer_at(i64 target) const;
  /// Smallest d with the field inside Q(zeta_d).
  i64 conductor() const;
  /// Equivalent descriptor over modulus conductor().
  AbelianFieldDescriptor reduced() const;

  bool contains(const AbelianFieldDescriptor& sub) const;
  bool contains(const CycNumber& x) const;
  friend bool operator==(const AbelianFieldDescriptor& a, const AbelianFieldDescriptor& b);

  AbelianFieldDescriptor compositum(const AbelianFieldDescriptor& o) const;
  AbelianFieldDescriptor intersection(const AbelianFieldDescriptor& o) const;

  /// "Q", "Q(zeta_9)", or "Q(zeta_M)^<g1,g2>".
  std::string describe() const;

 private:
  i64 modulus_;
  UnitSubgroup stabilizer_;
};

/// Exact field generated by values, as the fixed field of their common
/// stabilizer in (Z/MZ)^x. Every value must embed into Q(zeta_M).
AbelianFieldDescriptor field_of(std::span<const CycNumber> values, i64 modulus);

/// G' in (Z/m'Z)^x corresponding to field  cap  Q(zeta_{m'}).
UnitSubgroup intersect_with_cyclotomic(const AbelianFieldDescriptor& field, i64 mprime);

}  // namespace cuspfield
