#pragma once

// Internal fast series: integer power-basis numerators over a common
// denominator. Used for the heavy products in the Eisenstein engine.

#include <gmpxx.h>

#include <vector>

#include "cuspfield/qseries.hpp"

namespace cuspfield {

struct ZSeries {
  i64 modulus = 1;
  i64 width = 1;
  i64 prec = 0;
  std::size_t phi = 1;
  mpz_class den = 1;
  std::vector<mpz_class> num;  // prec * phi, row major

  ZSeries() = default;
  ZSeries(i64 modulus, i64 width, i64 prec);

  mpz_class* row(i64 n) { return num.data() + static_cast<std::size_t>(n) * phi; }
  const mpz_class* row(i64 n) const { return num.data() + static_cast<std::size_t>(n) * phi; }
  bool row_zero(i64 n) const;
  bool is_zero() const;

  static ZSeries from_qexpansion(const QExpansion& f);
  QExpansion to_qexpansion() const;

  /// Divide numerators and denominator by their common content.
  void normalize();
  ZSeries embed(i64 target) const;
  ZSeries rescale_width(i64 new_width) const;
  ZSeries truncate(i64 new_prec) const;
  ZSeries galois(i64 lambda) const;
};

ZSeries zs_add(const ZSeries& a, const ZSeries& b);
/// a + c * b with a cyclotomic scalar c.
ZSeries zs_axpy(const ZSeries& a, const CycNumber& c, const ZSeries& b);
ZSeries zs_scale(const ZSeries& a, const CycNumber& c);
ZSeries zs_mul(const ZSeries& a, const ZSeries& b, i64 prec);
bool zs_equal(const ZSeries& a, const ZSeries& b);

}  // namespace cuspfield
