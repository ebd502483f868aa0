#include <random>

#include "cuspfield/characters.hpp"
#include "cuspfield/eisenstein.hpp"
#include "cuspfield/error.hpp"
#include "doctest.h"
#include "numeric_oracle.hpp"

using namespace cuspfield;

namespace {

// Coefficient of q^(t/N) for t >= 1 by enumerating m*n = t straight from the
// double sum, with no group-ring bookkeeping.
CycNumber direct_coefficient(const EisIndex& idx, i64 t) {
  const i64 n_ = idx.level;
  CycNumber acc = CycNumber::zero(n_);
  const int sign = idx.weight % 2 == 0 ? 1 : -1;
  for (i64 m = 1; m <= t; ++m) {
    if (t % m) continue;
    const i64 n = t / m;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(idx.weight - 1));
    CycNumber nk = CycNumber::rational(mpq_class(pw), n_);
    if (mod(m - idx.a, n_) == 0) acc += CycNumber::zeta(n_, mod(idx.b * n, n_)) * nk;
    if (mod(m + idx.a, n_) == 0) acc += CycNumber::from_int(sign, n_) * CycNumber::zeta(n_, mod(-idx.b * n, n_)) * nk;
  }
  if (idx.tilde && t % n_ == 0) {
    const i64 s = t / n_;
    for (i64 d = 1; d <= s; ++d)
      if (s % d == 0) acc -= CycNumber::from_int(2 * d, n_);
  }
  return acc;
}

i64 gamma_index(i64 n) {
  i64 r = n * n * n;
  for (i64 p : prime_divisors(n)) r = r / (p * p) * (p * p - 1);
  return n == 2 ? 6 : r;
}

}  // namespace

TEST_CASE("expansion matches direct enumeration of the double sum") {
  std::mt19937 rng(17);
  for (i64 n = 1; n <= 9; ++n) {
    for (int k : {1, 2, 3, 4, 5}) {
      for (int rep = 0; rep < 3; ++rep) {
        std::uniform_int_distribution<i64> r(0, n - 1);
        EisIndex idx(n, r(rng), r(rng), k, k == 2);
        const i64 prec = 40;
        auto f = eis_expansion(idx, prec);
        CHECK(f.width() == n);
        CHECK(f.prec() == prec);
        for (i64 t = 1; t < prec; ++t) CHECK(f.coeff(t) == direct_coefficient(idx, t));
      }
    }
  }
}

TEST_CASE("worked examples") {
  auto f = eis_expansion(EisIndex(5, 1, 0, 1), 10);
  CHECK(f.coeff(1) == CycNumber::one());
  CHECK(f.coeff(2) == CycNumber::one());
  // q^(4/5): +1 from (m,n) = (1,4) and -1 from (4,1)
  CHECK(f.coeff(4).is_zero());
  CHECK(f.coeff(6) == CycNumber::from_int(2));
  CHECK(f.coeff(9).is_zero());
  CHECK(f.coeff(0) == CycNumber::rational(mpq_class(3, 10)));

  // N=2 relation among the three tilde series
  const i64 prec = 300;
  auto s = eis_expansion(EisIndex(2, 1, 0, 2, true), prec) + eis_expansion(EisIndex(2, 0, 1, 2, true), prec) +
           eis_expansion(EisIndex(2, 1, 1, 2, true), prec);
  CHECK(s.is_zero());

  for (i64 n : {1, 2, 5, 8})
    for (int k : {1, 3, 5}) CHECK(eis_expansion(EisIndex(n, 0, 0, k), 50).is_zero());

  // weight-1 constant term at a = 0 in closed form
  for (i64 n : {3, 5, 7, 12})
    for (i64 b = 1; b < n; ++b) {
      CycNumber z = CycNumber::zeta(n, b);
      CycNumber expect = CycNumber::rational(mpq_class(1, 2), n) * (CycNumber::one(n) + z) * (CycNumber::one(n) - z).inv();
      CHECK(eis_constant_term(EisIndex(n, 0, b, 1)) == expect);
    }
  for (i64 n : {4, 9})
    for (i64 a = 1; a < n; ++a) CHECK(eis_constant_term(EisIndex(n, a, 2 % n, 1)) == CycNumber::rational(mpq_class(n - 2 * a, 2 * n)));

  // level 1 weight 4 is 2 (1/240 + sum sigma_3(n) q^n)
  auto e4 = eis_expansion(EisIndex(1, 0, 0, 4), 5);
  CHECK(e4.coeff(0) == CycNumber::rational(mpq_class(1, 120)));
  CHECK(e4.coeff(2) == CycNumber::from_int(2 * 9));
}

TEST_CASE("invalid indices") {
  CHECK_THROWS_AS(EisIndex(3, 1, 1, 2, false), Error);
  CHECK_THROWS_AS(EisIndex(3, 1, 1, 0), Error);
  CHECK_THROWS_AS(EisIndex(3, 1, 1, 3, true), Error);
  CHECK_THROWS_AS(EisIndex(0, 0, 0, 1), Error);
}

TEST_CASE("sign symmetry E_{-a,-b} = (-1)^k E_{a,b}") {
  for (i64 n : {3, 4, 7})
    for (int k : {1, 2, 3, 4})
      for (i64 a = 0; a < n; ++a)
        for (i64 b = 0; b < n; ++b) {
          EisIndex x(n, a, b, k, k == 2), y(n, mod(-a, n), mod(-b, n), k, k == 2);
          auto fx = eis_expansion(x, 30), fy = eis_expansion(y, 30);
          if (k % 2) fx *= CycNumber::from_int(-1);
          CHECK(fx == fy);
          auto c = canonical(x);
          auto fc = eis_expansion(c.index, 30);
          if (c.sign == 0) CHECK(eis_expansion(x, 30).is_zero());
          else CHECK(eis_expansion(x, 30) == (c.sign > 0 ? fc : fc * CycNumber::from_int(-1)));
        }
}

TEST_CASE("index action") {
  EisIndex e(7, 2, 3, 1);
  CHECK(index_slash(e, MatModN(7, 1, 0, 0, 1)) == e);
  auto s = index_slash(e, MatModN::reduce(MatZ::S(), 7));
  CHECK(s.a == 3);
  CHECK(s.b == 5);
  for (i64 l : units(7)) {
    auto d = index_slash(e, MatModN(7, 1, 0, 0, l));
    CHECK(d.a == 2);
    CHECK(d.b == mod(3 * l, 7));
  }
  EisIndex t(5, 0, 0, 2, true);
  CHECK(index_slash(t, MatModN::reduce(MatZ{2, 1, 3, 2}, 5)) == t);
  // composition is a right action
  MatModN g1 = MatModN::reduce(MatZ{2, 1, 1, 1}, 7), g2 = MatModN::reduce(MatZ{1, 3, 0, 1}, 7);
  MatZ prod = MatZ{2, 1, 1, 1} * MatZ{1, 3, 0, 1};
  CHECK(index_slash(index_slash(e, g1), g2) == index_slash(e, MatModN::reduce(prod, 7)));
}

TEST_CASE("monomials") {
  EisMonomial empty(5, {});
  CHECK(monomial_expansion(empty, 10) == QExpansion::constant(CycNumber::one(), 5, 10));
  EisIndex x(5, 1, 2, 1);
  EisMonomial sq(5, {x, x});
  CHECK(monomial_expansion(sq, 25) == eis_expansion(x, 25) * eis_expansion(x, 25));
  EisMonomial m1(5, {EisIndex(5, 1, 2, 1), EisIndex(5, 0, 1, 1)}), m2(5, {EisIndex(5, 0, 1, 1), EisIndex(5, 1, 2, 1)});
  CHECK(m1 == m2);
  CHECK(m1.weight() == 2);
  EisMonomial neg(5, {EisIndex(5, 4, 3, 1), EisIndex(5, 0, 1, 1)});
  auto c = canonical(neg);
  auto fc = monomial_expansion(c.monomial, 20);
  CHECK(monomial_expansion(neg, 20) == (c.sign > 0 ? fc : fc * CycNumber::from_int(-1)));
}

TEST_CASE("Galois-slash compatibility for Eisenstein series") {
  // (E_{(a,b)g})^sigma_l = E_{(a, l b) g_l}
  const std::vector<MatZ> gens{MatZ::S(), MatZ::T(), MatZ::S() * MatZ::T()};
  for (i64 n = 2; n <= 6; ++n) {
    for (int k : {1, 2, 3}) {
      const i64 prec = 2 * ((k * gamma_index(n) + 11) / 12 + 1);
      for (i64 a = 0; a < n; ++a)
        for (i64 b = 0; b < n; ++b) {
          EisIndex idx(n, a, b, k, k == 2);
          for (const MatZ& g : gens) {
            auto lhs_base = eis_expansion(index_slash(idx, MatModN::reduce(g, n)), prec);
            for (i64 l : units(n)) {
              EisIndex conj(n, a, mod(l * b, n), k, k == 2);
              auto rhs = eis_expansion(index_slash(conj, MatModN::reduce(g_lambda(g, l, n), n)), prec);
              CHECK(lhs_base.apply_galois(l) == rhs);
            }
          }
        }
    }
  }
}

TEST_CASE("numerical modularity gates the constant terms") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<i64> ent(-4, 4);
  int cases = 0;
  while (cases < 24) {
    const i64 n = std::uniform_int_distribution<i64>(1, 7)(rng);
    const int k = std::vector<int>{1, 2, 3, 4}[std::uniform_int_distribution<int>(0, 3)(rng)];
    std::uniform_int_distribution<i64> r(0, n - 1);
    EisIndex idx(n, r(rng), r(rng), k, k == 2);
    MatZ g{ent(rng), ent(rng), ent(rng), ent(rng)};
    if (g.det() != 1) continue;
    auto res = cftest::eisenstein_modularity(idx, g);
    INFO(idx.to_string(), " g=", g.to_string());
    CHECK(res.max_error < 1e-8);
    CHECK(res.max_tail < 1e-12);
    ++cases;
  }
  // the S transform at tau = i exercises the a = 0 constant terms directly
  for (i64 n : {3, 5, 8})
    for (i64 b = 1; b < n; ++b) CHECK(cftest::eisenstein_modularity(EisIndex(n, 0, b, 3), MatZ::S()).max_error < 1e-8);
}
