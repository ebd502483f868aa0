#pragma once

// Integer 2x2 matrices, SL2 lifts, g_lambda, Atkin-Lehner matrices and the
// W_Q g decomposition.

#include <string>
#include <string_view>
#include <vector>

#include "cuspfield/arith.hpp"

namespace cuspfield {

struct MatZ {
  i64 a = 1, b = 0, c = 0, d = 1;

  i64 det() const { return a * d - b * c; }
  static MatZ identity() { return {1, 0, 0, 1}; }
  static MatZ S() { return {0, -1, 1, 0}; }
  static MatZ T(i64 u = 1) { return {1, u, 0, 1}; }
  /// Inverse of an SL2(Z) matrix.
  MatZ inverse_sl2() const { return {d, -b, -c, a}; }
  bool congruent(const MatZ& o, i64 n) const;

  friend MatZ operator*(const MatZ& x, const MatZ& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const MatZ&, const MatZ&) = default;

  /// "A,B,C,D"
  std::string to_string() const;
  static MatZ parse(std::string_view text);
};

struct MatModN {
  i64 n = 1;
  i64 a = 1, b = 0, c = 0, d = 1;

  MatModN() = default;
  MatModN(i64 n, i64 a, i64 b, i64 c, i64 d);
  static MatModN reduce(const MatZ& g, i64 n) { return MatModN(n, g.a, g.b, g.c, g.d); }
  i64 det() const { return mod(a * d - b * c, n); }
  friend bool operator==(const MatModN&, const MatModN&) = default;
};

bool in_gamma0(const MatZ& g, i64 n);
bool in_gamma1(const MatZ& g, i64 n);

/// SL2(Z) matrix congruent to m; requires det(m) = 1 mod n.
MatZ sl2_lift(const MatModN& m);

/// SL2(Z) lift of (A, lambda B; lambda^-1 C, D) mod n; g itself when lambda = 1.
MatZ g_lambda(const MatZ& g, i64 lambda, i64 n);

/// Q || N: gcd(Q, N/Q) = 1.
bool is_maximal_divisor(i64 q, i64 n);
std::vector<i64> maximal_divisors(i64 n);

struct AtkinLehner {
  MatZ w;  // det Q
  MatZ h;  // SL2(Z), w = h * diag(Q, 1)
};
AtkinLehner atkin_lehner_matrices(i64 q, i64 n);

struct WqDecomposition {
  MatZ g2;     // SL2(Z)
  MatZ upper;  // upper triangular, det Q
};
/// diag(Q, 1) * g = g2 * upper.
WqDecomposition wq_g_decomposition(const MatZ& g, i64 q, i64 n);

struct Cusp {
  i64 num;    // A / C in lowest terms with C >= 0 (infinity is 1/0)
  i64 den;
  i64 delta;  // gcd(C, N)
  i64 width;  // width on X0(N)
};
Cusp cusp_of(const MatZ& g, i64 n);

enum class WidthGroup { Gamma0, Gamma1, Gamma };
/// Smallest h >= 1 with +-g T^h g^-1 in the group (the definition of width).
i64 cusp_width_bruteforce(const MatZ& g, i64 n, WidthGroup group);

}  // namespace cuspfield
