#include <random>

#include "cuspfield/arith.hpp"
#include "cuspfield/characters.hpp"
#include "cuspfield/error.hpp"
#include "cuspfield/field_bounds.hpp"
#include "cuspfield/modmatrix.hpp"
#include "doctest.h"
#include "eta.hpp"

using namespace cuspfield;

namespace {

MatZ random_sl2(std::mt19937& rng, i64 bound) {
  std::uniform_int_distribution<i64> ent(-bound, bound);
  for (;;) {
    MatZ g{ent(rng), ent(rng), ent(rng), ent(rng)};
    if (g.det() == 1) return g;
  }
}

// gcd with gcd(0, n) = n, computed naively
i64 naive_gcd(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// product of p^v_p(n) over primes p dividing x (all primes when x = 0)
i64 naive_part(i64 n, i64 x) {
  i64 out = 1, r = n;
  for (i64 p = 2; p <= r; ++p) {
    if (r % p) continue;
    i64 pe = 1;
    while (r % p == 0) r /= p, pe *= p;
    if (x == 0 || x % p == 0) out *= pe;
  }
  return out;
}

std::vector<DirichletCharacter> all_characters(i64 n) {
  std::vector<DirichletCharacter> out{DirichletCharacter::trivial(n)};
  const auto gens = unit_generators(n);
  if (gens.empty()) return out;
  out.clear();
  std::vector<i64> e(gens.size(), 0);
  for (;;) {
    std::vector<mpq_class> r;
    for (std::size_t i = 0; i < gens.size(); ++i) r.emplace_back(e[i], gens[i].order);
    out.push_back(DirichletCharacter::from_generator_exponents(n, r));
    std::size_t i = 0;
    while (i < gens.size() && ++e[i] == gens[i].order) e[i++] = 0;
    if (i == gens.size()) break;
  }
  return out;
}

DirichletCharacter level9_character() {
  return DirichletCharacter::from_generator_exponents(9, {mpq_class(1, 6)});
}

}  // namespace

TEST_CASE("nprime") {
  CHECK(nprime(36, MatZ::identity()) == 1);
  CHECK(nprime(36, MatZ::S()) == 1);
  CHECK(nprime(9, MatZ{0, -1, 1, 3}) == 3);
  CHECK(nprime(11, MatZ{1, 0, 1, 1}) == 11);
}

TEST_CASE("level 9 worked example") {
  const FormMetadata meta{9, 3, level9_character(), AbelianFieldDescriptor::cyclotomic(3)};
  CHECK(meta.chi.value(4) == CycNumber::zeta(3));
  CHECK(meta.chi.parity() == -1);
  const MatZ g{0, -1, 1, 3};
  const auto r = field_bound(meta, g);
  CHECK(r.nprime == 3);
  CHECK(r.mprime == 9);
  CHECK(r.M == 9);
  const auto gp = r.gprime.elements();
  CHECK(std::vector<i64>(gp.begin(), gp.end()) == std::vector<i64>{1, 4, 7});
  CHECK(r.rejected_zetas == std::vector<i64>{1});
  CHECK(r.zeta_choice == 2);
  CHECK(r.c == CycNumber::zeta(9, 2) * CycNumber::from_int(3));
  CHECK(r.base_field == AbelianFieldDescriptor::cyclotomic(3));
  CHECK(r.in_module(CycNumber::zeta(9, 2)));
  CHECK(r.in_module(CycNumber::zeta(9, 2) * CycNumber::zeta(3)));
  CHECK_FALSE(r.in_module(CycNumber::zeta(9, 1)));
  CHECK_FALSE(r.in_module(CycNumber::one()));
  CHECK(chi_g_hom_check(meta.chi, g, meta.kf));
  // chi_g(mu) = chi(mu^-1) here since AD = 0, BC = -1
  for (auto& [mu, v] : r.chi_g_values) CHECK(v == meta.chi.value(inv_mod(mu, 9)));
  // Galois action on c: sigma_lambda(c) / c is the chi_g twist on G'
  for (i64 lam : units(9)) {
    const i64 l = lam % 2 ? lam : lam + 9;
    const CycNumber ratio = r.c.galois(l) / r.c;
    if (mod(lam, 3) != 1) continue;
    CHECK(ratio == chi_g_value(meta.chi, g, lam));
    CHECK(ratio == CycNumber::zeta(9, 2 * (lam - 1)));
  }
}

TEST_CASE("trivial character degenerates to K_f(zeta_N')") {
  std::mt19937 rng(11);
  for (i64 n : {11, 12, 36}) {
    const FormMetadata meta{n, 2, DirichletCharacter::trivial(n), AbelianFieldDescriptor::rational()};
    for (int t = 0; t < 10; ++t) {
      const MatZ g = random_sl2(rng, 20);
      const auto r = field_bound(meta, g);
      CHECK(r.c == CycNumber::one());
      CHECK(r.mprime == 1);
      CHECK(r.base_field == AbelianFieldDescriptor::cyclotomic(nprime(n, g)).reduced());
      CHECK(r.composite_field == r.base_field.reduced());
    }
  }
}

TEST_CASE("Gamma0 matrices give N' = 1 and c = 1") {
  std::mt19937 rng(5);
  for (i64 n : {9, 13, 20}) {
    for (const auto& chi : all_characters(n)) {
      const int k = chi.parity() == 1 ? 2 : 3;
      const FormMetadata meta{n, k, chi, field_of_character(chi)};
      for (int t = 0; t < 4; ++t) {
        std::uniform_int_distribution<i64> ent(-6, 6);
        const MatZ g = MatZ::T(ent(rng)) * MatZ{1, 0, n * ent(rng), 1} * MatZ::T(ent(rng));
        const auto r = field_bound(meta, g);
        CHECK(r.nprime == 1);
        CHECK(r.c == CycNumber::one());
      }
    }
  }
}

TEST_CASE("field_bound rejects parity mismatch") {
  const FormMetadata meta{9, 2, level9_character(), AbelianFieldDescriptor::cyclotomic(3)};
  CHECK_THROWS_AS(field_bound(meta, MatZ::S()), Error);
}

TEST_CASE("chi_g is a homomorphism on G'") {
  std::mt19937 rng(45);
  std::uniform_int_distribution<i64> level(2, 45);
  for (int t = 0; t < 60; ++t) {
    const i64 n = level(rng);
    auto chars = all_characters(n);
    const auto& chi = chars[std::uniform_int_distribution<std::size_t>(0, chars.size() - 1)(rng)];
    const MatZ g = random_sl2(rng, 40);
    CHECK_MESSAGE(chi_g_hom_check(chi, g, field_of_character(chi)), "N=" << n << " chi=" << chi.to_string());
    CHECK(chi_g_hom_check(chi, g, AbelianFieldDescriptor::rational()));
  }
  CHECK(chi_g_hom_check(DirichletCharacter::trivial(12), MatZ::S(), AbelianFieldDescriptor::rational()));
}

TEST_CASE("c is nonzero and the composite field sits between base and K_f(zeta_M)") {
  std::mt19937 rng(7);
  for (i64 n : {8, 9, 15, 16, 21}) {
    for (const auto& chi : all_characters(n)) {
      const int k = chi.parity() == 1 ? 2 : 1;
      const FormMetadata meta{n, k, chi, field_of_character(chi)};
      for (int t = 0; t < 3; ++t) {
        const MatZ g = random_sl2(rng, 25);
        const auto r = field_bound(meta, g);
        CHECK_FALSE(r.c.is_zero());
        CHECK(n % r.nprime == 0);
        CHECK(chi.conductor() % r.mprime == 0);
        CHECK(r.M == lcm(r.nprime, r.mprime));
        CHECK(r.composite_field.contains(r.base_field));
        CHECK(meta.kf.compositum(AbelianFieldDescriptor::cyclotomic(r.M)).contains(r.composite_field));
        for (i64 j : r.rejected_zetas) CHECK(j < r.zeta_choice);
      }
    }
  }
}

TEST_CASE("Atkin-Lehner bounds") {
  const FormMetadata triv{36, 2, DirichletCharacter::trivial(36), AbelianFieldDescriptor::rational()};
  const auto b1 = atkin_lehner_bound(triv, 1);
  CHECK(b1.field == AbelianFieldDescriptor::rational());
  const auto b4 = atkin_lehner_bound(triv, 4);
  CHECK(b4.scale_rational == 4);
  CHECK(b4.field == AbelianFieldDescriptor::cyclotomic(4).reduced());
  CHECK_THROWS_AS(atkin_lehner_bound(triv, 6), Error);
  const FormMetadata odd{27, 3, DirichletCharacter::trivial(27), AbelianFieldDescriptor::rational()};
  const auto b27 = atkin_lehner_bound(odd, 27);
  CHECK(b27.scale_rational == 81);
  CHECK(b27.scale_radical == 3);

  const FormMetadata meta{9, 3, level9_character(), AbelianFieldDescriptor::cyclotomic(3)};
  const auto b = atkin_lehner_bound(meta, 9);
  CHECK(b.scalar == gauss_sum(meta.chi));
  CHECK(b.field == meta.kf);
  for (auto& [u, v] : b.chi_hq_values) CHECK(v == meta.chi.value(u).galois(-1));
  // c for h_Q agrees with G'(chi_Q) up to a factor in K_f
  const auto r = field_bound(meta, atkin_lehner_matrices(9, 9).h);
  CHECK(r.nprime == 1);
  CHECK(meta.kf.contains(b.scalar / r.c));
}

TEST_CASE("closed-form translation modulus against brute force") {
  std::mt19937 rng(60);
  for (i64 n = 1; n <= 60; ++n) {
    for (i64 m : divisors(n)) {
      for (int t = 0; t < 3; ++t) {
        MatZ g = random_sl2(rng, 3 * n);
        if (t == 0) g = MatZ::identity();
        i64 best = -1;
        for (i64 u = 0; u < n; ++u) {
          const i64 d2 = u * g.c + g.d, b2 = u * g.a + g.b;
          const i64 x = n / naive_gcd(g.c * d2, n), y = m / naive_gcd(g.c * b2, m);
          const i64 mu = x / naive_gcd(x, y) * y;
          if (best < 0 || mu < best) best = mu;
        }
        const auto tr = minimal_M_translation(n, m, g);
        CHECK_MESSAGE(tr.mprime == best, "N=" << n << " m=" << m << " g=" << g.a << "," << g.b << "," << g.c << "," << g.d);
        CHECK(translation_modulus(n, m, g, tr.u) == tr.mprime);
      }
    }
  }
  CHECK(minimal_M_translation(36, 1, MatZ{1, 0, 6, 1}).mprime == 6);
  CHECK(minimal_M_translation(36, 36, MatZ::identity()).mprime == 1);
}

TEST_CASE("optimal Atkin-Lehner Q against brute force over maximal divisors") {
  for (i64 n = 1; n <= 100; ++n) {
    for (i64 delta : divisors(n)) {
      i64 best = -1;
      for (i64 q : maximal_divisors(n)) {
        // denominator of W_Q (1 / delta), then the minimal translation modulus there
        const auto al = atkin_lehner_matrices(q, n);
        const i64 top = al.w.a + al.w.b * delta, bot = al.w.c + al.w.d * delta;
        const i64 c2 = bot / naive_gcd(top, bot);
        const i64 mq = naive_part(n, c2) / naive_gcd(c2, n);
        CHECK(atkin_lehner_cusp_modulus(delta, n, q) == mq);
        if (best < 0 || mq < best) best = mq;
      }
      const auto opt = optimal_atkin_lehner_Q(delta, n);
      CHECK_MESSAGE(opt.mprime == best, "N=" << n << " delta=" << delta);
      CHECK(opt.mprime == naive_gcd(delta, n / delta));
      CHECK(is_maximal_divisor(opt.q, n));
    }
  }
  CHECK(optimal_atkin_lehner_Q(6, 36).q == 36);
  CHECK(optimal_atkin_lehner_Q(6, 36).mprime == 6);
  CHECK(optimal_atkin_lehner_Q(36, 36).q == 1);
  CHECK(optimal_atkin_lehner_Q(1, 36).q == 1);
}

TEST_CASE("level 11 newform: Atkin-Li, pseudo-eigenvalue, exact fields") {
  ModularFormInput f;
  f.name = "11a";
  f.level = 11;
  f.weight = 2;
  f.group = GroupTag::Gamma0;
  f.is_newform = true;
  f.expansion = cftest::eta_expansion({{1, 2}, {11, 2}}, 40);
  f.validate();
  const auto al = atkin_li_lambda(f, 11);
  CHECK(al.radical == 1);
  CHECK(al.value == CycNumber::from_int(-1));
  CHECK(engine_pseudo_eigenvalue(f, 11) == al);
  CHECK(std::abs(std::abs(al.to_complex()) - 1.0) < 1e-10);
  CHECK_THROWS_AS(atkin_li_lambda(f, 3), Error);

  const FormMetadata meta = metadata_of(f);
  CHECK(meta.kf == AbelianFieldDescriptor::rational());
  const auto c0 = certify_exact_field(f, MatZ{1, 0, 11, 1}, 40);
  CHECK(c0.verdict == FieldVerdict::Exact);
  CHECK(c0.nprime == 1);
  const auto cs = certify_exact_field(f, MatZ::S(), 60);
  CHECK(cs.nprime == 1);
  CHECK(cs.verdict == FieldVerdict::Exact);
  for (const MatZ& g : {MatZ{1, 0, 1, 1}, MatZ{2, 1, 3, 2}}) {
    const auto c = certify_exact_field(f, g, 60);
    CHECK(c.nprime == 11);
    CHECK(c.verdict == FieldVerdict::Exact);
    CHECK(c.observed == AbelianFieldDescriptor::cyclotomic(11).reduced());
  }
  ModularFormInput old = f;
  old.is_newform = false;
  CHECK(certify_exact_field(old, MatZ::S(), 60).verdict == FieldVerdict::Contained);
}
