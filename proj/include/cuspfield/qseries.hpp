#pragma once

// Truncated Fourier expansions sum_{n < prec} c_n q^(n/width) with exact
// cyclotomic coefficients.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "cuspfield/cyclotomic.hpp"

namespace cuspfield {

class QExpansion {
 public:
  QExpansion() : QExpansion(1, 1, 1) {}
  /// Zero series known to precision prec, coefficients in Q(zeta_modulus).
  QExpansion(i64 width, i64 prec, i64 modulus);
  /// Coefficients are embedded into their common modulus (at least `modulus`).
  QExpansion(i64 width, std::vector<CycNumber> coeffs, i64 modulus = 1);

  static QExpansion constant(const CycNumber& c, i64 width, i64 prec);

  i64 width() const { return width_; }
  i64 prec() const { return static_cast<i64>(coeffs_.size()); }
  i64 modulus() const { return modulus_; }
  const CycNumber& coeff(i64 n) const { return coeffs_.at(static_cast<std::size_t>(n)); }
  const std::vector<CycNumber>& coeffs() const { return coeffs_; }
  void set_coeff(i64 n, const CycNumber& v);
  bool is_zero() const;

  QExpansion& operator+=(const QExpansion& o);
  QExpansion& operator-=(const QExpansion& o);
  QExpansion& operator*=(const CycNumber& c);
  friend QExpansion operator+(QExpansion a, const QExpansion& b) { return a += b; }
  friend QExpansion operator-(QExpansion a, const QExpansion& b) { return a -= b; }
  friend QExpansion operator*(const QExpansion& a, const QExpansion& b);
  friend QExpansion operator*(QExpansion a, const CycNumber& c) { return a *= c; }
  friend QExpansion operator*(const CycNumber& c, QExpansion a) { return a *= c; }
  /// Equal widths, equal precision, equal coefficients.
  friend bool operator==(const QExpansion& a, const QExpansion& b);

  QExpansion truncate(i64 prec) const;
  /// Same series over Q(zeta_M'), modulus() | M'.
  QExpansion embed(i64 modulus) const;
  /// Exponent denominator w' (w | w'); coefficient n moves to n * w'/w.
  QExpansion rescale_width(i64 new_width) const;
  /// Inverse of rescale_width: w' | w and every nonzero exponent must be
  /// representable with denominator w'.
  QExpansion reduce_width(i64 new_width) const;

  /// Coefficientwise sigma_lambda.
  QExpansion apply_galois(i64 lambda) const;
  /// tau -> tau + u: c_n -> zeta_w^(n u) c_n.
  QExpansion apply_T_power(i64 u) const;

  struct NumericValue {
    std::complex<double> value;
    double tail_estimate;
  };
  /// Floating evaluation of the first `terms` coefficients at tau.
  NumericValue eval_numeric(std::complex<double> tau, i64 terms) const;

  /// Header `w=<w> prec=<P> M=<M>` then one coefficient per line.
  std::string to_string() const;
  static QExpansion parse(std::string_view text);

 private:
  i64 width_;
  i64 modulus_;
  std::vector<CycNumber> coeffs_;
};

/// sqrt(radical) * series; radical is squarefree and 1 when no radical occurs.
struct ScaledExpansion {
  QExpansion series;
  i64 radical = 1;
};

/// f |_k (a b; 0 d) for a, d > 0.
ScaledExpansion apply_upper_triangular(const QExpansion& f, i64 a, i64 b, i64 d, int k);

}  // namespace cuspfield
