#include "cuspfield/modmatrix.hpp"

#include <cstdio>
#include <sstream>

#include "cuspfield/error.hpp"

namespace cuspfield {

bool MatZ::congruent(const MatZ& o, i64 n) const {
  return mod(a - o.a, n) == 0 && mod(b - o.b, n) == 0 && mod(c - o.c, n) == 0 && mod(d - o.d, n) == 0;
}

std::string MatZ::to_string() const {
  return std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," + std::to_string(d);
}

MatZ MatZ::parse(std::string_view text) {
  std::string s(text);
  MatZ g;
  int used = 0;
  if (std::sscanf(s.c_str(), " %ld , %ld , %ld , %ld %n", &g.a, &g.b, &g.c, &g.d, &used) != 4 ||
      used != static_cast<int>(s.size()))
    fail(ErrorCode::Parse, "matrix '" + s + "': expected A,B,C,D");
  return g;
}

MatModN::MatModN(i64 n_, i64 a_, i64 b_, i64 c_, i64 d_) : n(n_) {
  require(n_ >= 1, ErrorCode::InvalidArgument, "matrix modulus must be positive");
  a = mod(a_, n);
  b = mod(b_, n);
  c = mod(c_, n);
  d = mod(d_, n);
}

bool in_gamma0(const MatZ& g, i64 n) { return g.det() == 1 && mod(g.c, n) == 0; }

bool in_gamma1(const MatZ& g, i64 n) {
  return in_gamma0(g, n) && mod(g.a, n) == 1 % n && mod(g.d, n) == 1 % n;
}

MatZ sl2_lift(const MatModN& m) {
  const i64 n = m.n;
  require(m.det() == 1 % n, ErrorCode::InvalidArgument, "sl2_lift: determinant is not 1 modulo N");
  if (n == 1) return MatZ::identity();
  i64 c = m.c == 0 ? n : m.c;
  i64 d = m.d;
  while (gcd(c, d) != 1) d += n;
  // x d - y c = 1
  Egcd e = egcd(d, c);
  i64 x = e.x, y = -e.y;
  // shift (x, y) by k (c, d) so that it is congruent to (a, b)
  Egcd f = egcd(c, d);  // f.x c + f.y d = 1
  i64 k = mod(mod(m.a - x, n) * f.x + mod(m.b - y, n) * f.y, n);
  MatZ g{x + k * c, y + k * d, c, d};
  if (g.det() != 1 || !g.congruent(MatZ{m.a, m.b, m.c, m.d}, n))
    fail(ErrorCode::Internal, "sl2_lift produced an invalid lift");
  return g;
}

MatZ g_lambda(const MatZ& g, i64 lambda, i64 n) {
  require(g.det() == 1, ErrorCode::InvalidArgument, "g_lambda: g must lie in SL2(Z)");
  require(gcd(lambda, n) == 1, ErrorCode::Domain, "g_lambda: lambda is not a unit modulo N");
  if (mod(lambda, n) == 1 % n) return g;
  i64 li = inv_mod(lambda, n);
  return sl2_lift(MatModN(n, g.a, lambda * g.b, li * g.c, g.d));
}

bool is_maximal_divisor(i64 q, i64 n) { return q > 0 && n % q == 0 && gcd(q, n / q) == 1; }

std::vector<i64> maximal_divisors(i64 n) {
  std::vector<i64> out;
  for (i64 d : divisors(n))
    if (is_maximal_divisor(d, n)) out.push_back(d);
  return out;
}

AtkinLehner atkin_lehner_matrices(i64 q, i64 n) {
  require(is_maximal_divisor(q, n), ErrorCode::InvalidArgument,
          "atkin_lehner: " + std::to_string(q) + " is not a maximal divisor of " + std::to_string(n));
  const i64 r = n / q;
  if (n == 1) return {MatZ::identity(), MatZ::identity()};
  const i64 x = r == 1 ? 0 : 1;
  const i64 y = q == 1 ? 0 : 1;
  i64 z = 0, w = 0;
  if (y == 0) {
    w = 1;  // q x w = 1 with q = x = 1
  } else if (x == 0) {
    z = -1;  // -r z y = 1 with r = y = 1
  } else {
    Egcd e = egcd(q, r);  // q e.x + r e.y = 1
    w = e.x;
    z = -e.y;
  }
  MatZ h{x, y, r * z, q * w};
  MatZ wq{q * x, y, n * z, q * w};
  if (h.det() != 1 || wq.det() != q || mod(x - 1, r) != 0 || mod(y - 1, q) != 0)
    fail(ErrorCode::Internal, "atkin_lehner: construction failed");
  return {wq, h};
}

WqDecomposition wq_g_decomposition(const MatZ& g, i64 q, i64 n) {
  require(g.det() == 1, ErrorCode::InvalidArgument, "wq_g_decomposition: g must lie in SL2(Z)");
  require(is_maximal_divisor(q, n), ErrorCode::InvalidArgument, "wq_g_decomposition: Q must be a maximal divisor");
  if (q == 1) return {g, MatZ::identity()};
  const i64 g0 = gcd(g.c, q);
  const i64 u = g.a * q / g0, v = g.c / g0;
  // r u - s v = 1
  Egcd e = egcd(u, v);
  if (e.g != 1) fail(ErrorCode::Internal, "wq_g_decomposition: AQ/g0 and C/g0 are not coprime");
  i64 r = e.x, s = -e.y;
  if (u != 0) {
    i64 k = (mod(s, std::llabs(u)) - s) / u;  // s + k u in [0, |u|)
    s += k * u;
    r += k * v;
  } else {
    i64 k = (mod(r, std::llabs(v)) - r) / v;
    r += k * v;
  }
  WqDecomposition out{MatZ{u, s, v, r}, MatZ{g0, r * g.b * q - s * g.d, 0, q / g0}};
  if (!(MatZ{q, 0, 0, 1} * g == out.g2 * out.upper) || out.g2.det() != 1)
    fail(ErrorCode::Internal, "wq_g_decomposition: identity check failed");
  return out;
}

Cusp cusp_of(const MatZ& g, i64 n) {
  require(g.det() == 1, ErrorCode::InvalidArgument, "cusp_of: g must lie in SL2(Z)");
  i64 a = g.a, c = g.c;
  if (c < 0 || (c == 0 && a < 0)) {
    a = -a;
    c = -c;
  }
  const i64 delta = gcd(c, n);
  const i64 width = n / gcd(c * c, n);
  return {a, c, delta, width};
}

i64 cusp_width_bruteforce(const MatZ& g, i64 n, WidthGroup group) {
  const MatZ gi = g.inverse_sl2();
  for (i64 h = 1; h <= n; ++h) {
    MatZ x = g * MatZ::T(h) * gi;
    bool ok = false;
    for (int sign : {1, -1}) {
      MatZ y{sign * x.a, sign * x.b, sign * x.c, sign * x.d};
      switch (group) {
        case WidthGroup::Gamma0: ok = ok || in_gamma0(y, n); break;
        case WidthGroup::Gamma1: ok = ok || in_gamma1(y, n); break;
        case WidthGroup::Gamma: ok = ok || y.congruent(MatZ::identity(), n); break;
      }
    }
    if (ok) return h;
  }
  fail(ErrorCode::Internal, "cusp width search exceeded N");
}

}  // namespace cuspfield
