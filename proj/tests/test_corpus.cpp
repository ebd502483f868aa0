#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cuspfield/engine.hpp"
#include "cuspfield/error.hpp"
#include "cuspfield/field_bounds.hpp"
#include "cuspfield/formfile.hpp"
#include "doctest.h"
#include "eta.hpp"
#include "numeric_oracle.hpp"

using namespace cuspfield;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus_path(i64 level) { return std::string(CF_DATA_DIR) + "/level" + std::to_string(level) + ".form"; }

const ModularFormInput& corpus(i64 level) {
  static std::map<i64, ModularFormInput> forms;
  auto it = forms.find(level);
  if (it == forms.end()) it = forms.emplace(level, load_form_file(corpus_path(level)).form).first;
  return it->second;
}

const std::vector<i64> kLevels{9, 11, 27, 32, 36};

bool denominators_divide_level(const QExpansion& f, i64 n) {
  for (const auto& c : f.coeffs())
    for (const auto& x : c.coords()) {
      mpz_class d = x.get_den();
      for (i64 p : prime_divisors(n))
        while (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) d /= static_cast<unsigned long>(p);
      if (d != 1) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("form files round trip byte for byte") {
  for (i64 n : kLevels) {
    const std::string text = read_text(corpus_path(n));
    CHECK(serialize_form_file(parse_form_file(text)) == text);
  }
}

TEST_CASE("eta recipes reproduce the stored coefficients") {
  const std::map<i64, std::vector<std::pair<i64, int>>> recipes{
      {11, {{1, 2}, {11, 2}}}, {27, {{3, 2}, {9, 2}}}, {32, {{4, 2}, {8, 2}}}, {36, {{6, 4}}}};
  for (auto& [n, r] : recipes) CHECK(corpus(n).expansion == cftest::eta_expansion(r, corpus(n).expansion.prec()));
}

TEST_CASE("corpus precision covers four times the Sturm bound") {
  for (i64 n : kLevels) CHECK(corpus(n).expansion.prec() >= 4 * sturm_bound_gamma0(n, corpus(n).weight));
}

TEST_CASE("form file parsing") {
  const std::string meta = "name x\nlevel 9\nweight 3\ngroup gamma0\nnewform yes\ncharacter 9: 2->1/6\nfield 3\n";
  const FormFile m = parse_form_file(meta);
  CHECK_FALSE(m.has_expansion);
  CHECK(serialize_form_file(m) == meta);
  CHECK(m.form.chi().order() == 6);
  CHECK_THROWS_AS(parse_form_file("level 9\nweight 2\nbogus 1\n"), Error);
  CHECK_THROWS_AS(parse_form_file("level 9\n"), Error);
  CHECK_THROWS_AS(parse_form_file("level 9\nweight 3\ngroup gamma0\ncharacter 9: 2->1/3\n"), Error);
  CHECK_THROWS_AS(parse_form_file("level 9\nweight 3\ngroup gamma0\ncharacter 9: 4->1/6\n"), Error);
  CHECK_THROWS_AS(parse_form_file("level 11\nweight 2\nprecision 5\ncoefficients\n1 1\nend\n"), Error);
  CHECK_THROWS_AS(parse_form_file("level 1\nweight 12\nprecision 5\ncoefficients\n2 1\n1 1\nend\n"), Error);
  CHECK_THROWS_AS(parse_form_file("level 1\nweight 12\nprecision 5\ncoefficients\n1 1\n"), Error);
  CHECK_THROWS_AS(parse_form_file("level 1\nweight 12\nfield 1\nprecision 5\ncoefficients\n1 3:[0,1]\nend\n"), Error);
  const FormFile d = parse_form_file("level 1\nweight 12\nprecision 3\ncoefficients\n1 1\n2 -24\nend\n");
  CHECK(d.form.expansion.coeff(2) == CycNumber::from_int(-24));
  CHECK(parse_value("-3/6") == CycNumber::rational(mpq_class(-1, 2)));
  CHECK(format_value(CycNumber::zeta(6)) == "3:[1,1]");
}

TEST_CASE("coefficient fields of the corpus") {
  for (i64 n : {11, 27, 32, 36}) CHECK(metadata_of(corpus(n)).kf == AbelianFieldDescriptor::rational());
  const auto& f = corpus(9);
  const auto kf = metadata_of(f).kf;
  CHECK(kf == AbelianFieldDescriptor::cyclotomic(3));
  CHECK(kf.contains(field_of_character(f.chi())));
}

TEST_CASE("Hecke relations of the level 9 form") {
  const auto& f = corpus(9);
  const auto& a = f.expansion;
  CHECK(a.coeff(4) == a.coeff(2) * a.coeff(2) - f.chi().value(2) * CycNumber::from_int(4));
  CHECK(a.coeff(10) == a.coeff(2) * a.coeff(5));
  CHECK(a.coeff(9) == a.coeff(3) * a.coeff(3));
}

TEST_CASE("decompositions reproduce the input and respect the Nebentypus") {
  for (i64 n : kLevels) {
    const auto& f = corpus(n);
    const EisDecomposition& d = decomposition_of(f);
    const i64 prec = default_precision(f);
    const QExpansion id = evaluate(d, MatZ::identity(), prec);
    CHECK(id == f.at_level_width().truncate(prec).embed(id.modulus()));
    const i64 a5 = inv_mod(5, n);
    for (const MatZ& g : {MatZ{1, 1, 0, 1}, MatZ{1 - n, 1, -n, 1}, MatZ{a5, (a5 * 5 - 1) / n, n, 5}, MatZ{-1, 0, -n, -1}}) {
      REQUIRE(g.det() == 1);
      const QExpansion lhs = evaluate(d, g, 4 * n);
      const QExpansion rhs = f.at_level_width().truncate(4 * n) * f.chi().value(mod(g.d, n));
      CHECK(lhs == rhs.embed(lhs.modulus()));
    }
  }
}

TEST_CASE("slash expansions agree numerically with the input series") {
  for (i64 n : kLevels) {
    const auto& f = corpus(n);
    for (const MatZ& g : {MatZ::S(), MatZ{1, 0, 2, 1}, MatZ{1, 0, 3, 1}}) {
      for (auto tau : cftest::sample_points(g)) {
        const auto gtau = (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) /
                          (static_cast<double>(g.c) * tau + static_cast<double>(g.d));
        const i64 p1 = cftest::terms_for(tau.imag(), n);
        const i64 p2 = std::min(cftest::terms_for(gtau.imag(), 1), f.expansion.prec());
        const auto lhs = slash_expand(f, g, p1).eval_numeric(tau, p1);
        const auto rhs = f.expansion.eval_numeric(gtau, p2);
        const auto factor = std::pow(static_cast<double>(g.c) * tau + static_cast<double>(g.d), -f.weight);
        CHECK_MESSAGE(std::abs(lhs.value - factor * rhs.value) < 1e-8, "N=" << n);
      }
    }
  }
}

TEST_CASE("Atkin-Lehner data") {
  for (i64 n : {11, 27, 32, 36}) {
    const auto& f = corpus(n);
    for (const auto& [q, e] : f.atkin_lehner)
      CHECK(engine_pseudo_eigenvalue(f, q) == RadicalNumber{CycNumber::from_int(e), 1});
  }
  CHECK(atkin_li_lambda(corpus(11), 11) == engine_pseudo_eigenvalue(corpus(11), 11));
  for (i64 n : {27, 32})
    CHECK_THROWS_AS(atkin_li_lambda(corpus(n), n), Error);
  CHECK_THROWS_AS(atkin_li_lambda(corpus(36), 4), Error);
  const auto& f = corpus(9);
  const RadicalNumber l = atkin_li_lambda(f, 9);
  CHECK(l == engine_pseudo_eigenvalue(f, 9));
  CHECK(std::abs(std::abs(l.to_complex()) - 1.0) < 1e-10);
}

TEST_CASE("Atkin-Lehner coefficient fields") {
  for (i64 n : kLevels) {
    const auto& f = corpus(n);
    const FormMetadata meta = metadata_of(f);
    for (i64 q : maximal_divisors(n)) {
      const auto b = atkin_lehner_bound(meta, q);
      const auto h = atkin_lehner_matrices(q, n).h;
      const QExpansion fh = slash_expand(f, h, 6 * n);
      for (const auto& c : fh.coeffs()) CHECK(b.field.contains(c / b.scalar));
      if (f.chi().is_trivial()) CHECK(meta.kf.contains(field_of(fh.coeffs(), fh.modulus())));
    }
  }
}

TEST_CASE("level 9 coefficients lie in zeta_9^2 Q(zeta_3)") {
  const auto& f = corpus(9);
  const MatZ g{0, -1, 1, 3};
  const auto r = field_bound(metadata_of(f), g);
  CHECK(r.c == CycNumber::from_int(3) * CycNumber::zeta(9, 2));
  const QExpansion fg = slash_expand(f, g, default_precision(f));
  bool nonzero = false;
  for (const auto& c : fg.coeffs()) {
    CHECK(r.in_module(c));
    nonzero = nonzero || !c.is_zero();
  }
  CHECK(nonzero);
}

TEST_CASE("Galois equivariance of f|g for automorphisms fixing K_f(zeta_N')") {
  const auto& f = corpus(9);
  const FormMetadata meta = metadata_of(f);
  for (const MatZ& g : {MatZ{0, -1, 1, 3}, MatZ{1, 0, 3, 1}, MatZ{2, 1, 3, 2}, MatZ{1, 2, 1, 3}}) {
    const auto r = field_bound(meta, g);
    const QExpansion fg = slash_expand(f, g, 90);
    const i64 m = fg.modulus();
    for (i64 lam : units(m)) {
      const auto sigma_fixes = [&] { return r.base_field.stabilizer_at(lcm(m, r.base_field.modulus())).contains(lam); };
      if (!sigma_fixes()) continue;
      const CycNumber twist = chi_g_value(meta.chi, g, r.mprime == 1 ? 0 : mod(lam, r.mprime));
      CHECK(fg.apply_galois(lam) == fg * twist);
    }
  }
}

TEST_CASE("Galois-slash compatibility for the corpus forms") {
  const auto& f = corpus(9);
  for (const MatZ& g : {MatZ::S(), MatZ{1, 0, 3, 1}, MatZ{2, 1, 1, 1}})
    for (i64 lam : {5, 7, 11})
      CHECK(galois_slash_check(f, g, lam, 60));
  CHECK(galois_slash_check(corpus(11), MatZ{1, 0, 2, 1}, 3, 60));
}

TEST_CASE("exact coefficient fields for rational newforms") {
  for (i64 n : {11, 27, 32, 36}) {
    const auto& f = corpus(n);
    for (const MatZ& g : {MatZ{1, 0, 1, 1}, MatZ{1, 0, n, 1}, MatZ{1, 0, 3, 1}}) {
      const auto c = certify_exact_field(f, g, 10 * n);
      CHECK_MESSAGE(c.verdict == FieldVerdict::Exact, "N=" << n << " observed " << c.observed.describe());
      CHECK(c.predicted == AbelianFieldDescriptor::cyclotomic(c.nprime).reduced());
    }
  }
  CHECK(certify_exact_field(corpus(9), MatZ{1, 0, 1, 1}, 90).verdict == FieldVerdict::Contained);
}

TEST_CASE("denominators of f|g involve only primes dividing N") {
  for (i64 n : kLevels) {
    const auto& f = corpus(n);
    for (const MatZ& g : {MatZ::S(), MatZ{1, 0, 2, 1}, MatZ{1, 1, 3, 4}})
      CHECK(denominators_divide_level(slash_expand(f, g, 8 * n), n));
  }
}

TEST_CASE("cusp plans replay f|g and reach the optimal working field") {
  for (i64 n : {11, 27, 36}) {
    const auto& f = corpus(n);
    for (i64 c : divisors(n)) {
      if (c == n) continue;
      const MatZ g{1, 0, c, 1};
      const CuspPlan p = plan_cusp(n, 1, g);
      CHECK(p.mprime == gcd(p.delta, n / p.delta));
      const i64 prec = 4 * n;
      CHECK_MESSAGE(replay_plan(f, p, prec) == slash_expand(f, g, prec), "N=" << n << " C=" << c);
      const QExpansion w = plan_working_series(f, p, prec);
      CHECK(AbelianFieldDescriptor::cyclotomic(p.mprime).contains(field_of(w.coeffs(), w.modulus())));
    }
  }
  const CuspPlan p = plan_cusp(36, 1, MatZ{1, 0, 6, 1});
  CHECK(p.q == 36);
  CHECK(p.mprime == 6);
}
