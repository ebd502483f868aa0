// Regenerates the bundled newform corpus in data/forms from first principles:
// eta products for the weight-2 rational newforms of levels 11, 27, 32, 36 and
// the cusp-form kernel of a projected Eisenstein product pool for the level-9
// weight-3 form with a sextic character.

#include <algorithm>
#include <map>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "cuspfield/engine.hpp"
#include "cuspfield/error.hpp"
#include "cuspfield/field_bounds.hpp"
#include "cuspfield/formfile.hpp"
#include "eta.hpp"

using namespace cuspfield;

namespace {

constexpr i64 kCount = 300;

void check(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::Internal, "corpus check failed: " + what);
}

// Basis of the null space of rows (each row has `cols` entries).
std::vector<std::vector<CycNumber>> kernel(std::vector<std::vector<CycNumber>> rows, std::size_t cols) {
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const CycNumber inv = CycNumber::one() / rows[r][c];
    for (auto& x : rows[r]) x = x * inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const CycNumber f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<std::vector<CycNumber>> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    std::vector<CycNumber> v(cols, CycNumber::zero());
    v[free] = CycNumber::one();
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -rows[i][free];
    out.push_back(std::move(v));
  }
  return out;
}

std::map<i64, int> atkin_lehner_table(const ModularFormInput& f) {
  std::map<i64, int> out;
  for (i64 q : maximal_divisors(f.level)) {
    if (q == 1) continue;
    const RadicalNumber l = engine_pseudo_eigenvalue(f, q);
    check(l.radical == 1 && (l.value == CycNumber::one() || l.value == CycNumber::from_int(-1)),
          "Atkin-Lehner eigenvalue at Q=" + std::to_string(q) + " is not +-1: " + l.to_string());
    out[q] = l.value == CycNumber::one() ? 1 : -1;
  }
  return out;
}

void check_hecke(const ModularFormInput& f) {
  const auto& c = f.expansion;
  const DirichletCharacter chi = f.chi();
  check(c.coeff(1) == CycNumber::one(), "a_1 = 1");
  for (i64 m = 2; m * m < c.prec(); ++m)
    for (i64 n = 2; m * n < c.prec(); ++n)
      if (gcd(m, n) == 1) check(c.coeff(m * n) == c.coeff(m) * c.coeff(n), "multiplicativity at " + std::to_string(m * n));
  for (i64 p : {2, 3, 5, 7}) {
    for (i64 pe = p; pe * p < c.prec(); pe *= p) {
      // a_{p^{e+1}} = a_p a_{p^e} - chi(p) p^{k-1} a_{p^{e-1}}
      mpz_class pk = 1;
      for (int i = 0; i < f.weight - 1; ++i) pk *= p;
      const CycNumber rhs = c.coeff(p) * c.coeff(pe) - chi.value(p) * CycNumber::rational(mpq_class(pk)) * c.coeff(pe / p);
      check(c.coeff(pe * p) == rhs, "Hecke recursion at " + std::to_string(pe * p));
    }
  }
}

FormFile eta_form(const std::string& name, i64 level, std::vector<std::pair<i64, int>> factors, const std::string& recipe) {
  FormFile file;
  file.comments = {"Weight-2 newform on Gamma0(" + std::to_string(level) + ") with rational coefficients.",
                   "Recipe: " + recipe + ", expanded as an exact integer q-series.",
                   "Atkin-Lehner eigenvalues computed by the engine from f|h_Q.",
                   "Regenerate with: gen_corpus <output directory>"};
  ModularFormInput& f = file.form;
  f.name = name;
  f.level = level;
  f.weight = 2;
  f.group = GroupTag::Gamma0;
  f.is_newform = true;
  f.expansion = cftest::eta_expansion(factors, kCount);
  file.has_expansion = true;
  f.validate();
  check_hecke(f);
  // the eta product must lie in the Eisenstein span at this level
  check(!express_in_basis(f).terms.empty(), "decomposition of " + name);
  f.atkin_lehner = atkin_lehner_table(f);
  return file;
}

FormFile level9_form() {
  const i64 n = 9;
  const int k = 3;
  const DirichletCharacter chi = DirichletCharacter::from_generator_exponents(n, {mpq_class(1, 6)});
  // chi-projected products E_{0,b1} E_{0,b2} E_{0,b3}
  std::vector<EisDecomposition> pool;
  for (i64 b1 = 1; b1 <= 4; ++b1)
    for (i64 b2 = b1; b2 <= 4; ++b2)
      for (i64 b3 = b2; b3 <= 4; ++b3) {
        std::vector<EisTerm> terms;
        for (i64 d : units(n)) {
          std::vector<EisIndex> fac{{n, 0, mod(d * b1, n), 1}, {n, 0, mod(d * b2, n), 1}, {n, 0, mod(d * b3, n), 1}};
          terms.push_back({EisMonomial(n, fac), chi.value(d).galois(-1)});
        }
        auto dec = make_decomposition(n, k, terms);
        if (!dec.terms.empty()) pool.push_back(std::move(dec));
      }
  // constant terms at representatives of every cusp of X0(9)
  const std::vector<MatZ> cusps{MatZ::identity(), MatZ::S(), MatZ{1, 0, 3, 1}, MatZ{2, 1, 3, 2}, MatZ{1, 0, 6, 1}};
  std::vector<std::vector<CycNumber>> rows;
  for (const MatZ& g : cusps) {
    std::vector<CycNumber> row;
    for (const auto& d : pool) row.push_back(evaluate(d, g, 1).coeff(0));
    rows.push_back(std::move(row));
  }
  const auto ker = kernel(rows, pool.size());
  // cusp forms: kernel combinations, reduced to an independent set
  const i64 probe = 40;
  std::vector<std::vector<CycNumber>> span;
  std::vector<EisDecomposition> cusp_forms;
  for (const auto& v : ker) {
    std::vector<EisTerm> terms;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!v[i].is_zero())
        for (const auto& t : pool[i].terms) terms.push_back({t.monomial, t.coeff * v[i]});
    auto dec = make_decomposition(n, k, terms);
    if (dec.terms.empty()) continue;
    const QExpansion e = evaluate(dec, MatZ::identity(), n * probe).reduce_width(1);
    std::vector<std::vector<CycNumber>> trial = span;
    trial.emplace_back(e.coeffs().begin(), e.coeffs().end());
    if (kernel(trial, static_cast<std::size_t>(probe)).size() + trial.size() == static_cast<std::size_t>(probe)) {
      span = std::move(trial);
      cusp_forms.push_back(std::move(dec));
    }
  }
  check(cusp_forms.size() == 1, "S_3(Gamma0(9), chi) should be one-dimensional, found " + std::to_string(cusp_forms.size()));
  QExpansion e = evaluate(cusp_forms[0], MatZ::identity(), n * kCount).reduce_width(1);
  check(e.coeff(0).is_zero(), "cusp form has zero constant term");
  check(!e.coeff(1).is_zero(), "a_1 nonzero");
  e = e * (CycNumber::one() / e.coeff(1));
  i64 field = 1;
  std::vector<CycNumber> coeffs;
  for (const auto& c : e.coeffs()) {
    coeffs.push_back(c.minimal());
    field = lcm(field, coeffs.back().modulus());
  }

  FormFile file;
  file.comments = {"Weight-3 newform on Gamma0(9) with character chi(2) = zeta_6 (conductor 9).",
                   "Recipe: the one-dimensional kernel of the constant-term maps at the cusps of X0(9)",
                   "on chi-projected products of three weight-1 Eisenstein series E_{0,b}, normalized a_1 = 1.",
                   "Regenerate with: gen_corpus <output directory>"};
  ModularFormInput& f = file.form;
  f.name = "level9_weight3";
  f.level = n;
  f.weight = k;
  f.group = GroupTag::Gamma0;
  f.character = chi;
  f.field_modulus = field;
  f.is_newform = true;
  f.expansion = QExpansion(1, coeffs, field);
  file.has_expansion = true;
  f.validate();
  check_hecke(f);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data/forms";
  try {
    std::filesystem::create_directories(dir);
    std::vector<std::pair<std::string, FormFile>> forms;
    forms.emplace_back("level9.form", level9_form());
    forms.emplace_back("level11.form", eta_form("level11_weight2", 11, {{1, 2}, {11, 2}}, "eta(tau)^2 eta(11 tau)^2"));
    forms.emplace_back("level27.form", eta_form("level27_weight2", 27, {{3, 2}, {9, 2}}, "eta(3 tau)^2 eta(9 tau)^2"));
    forms.emplace_back("level32.form", eta_form("level32_weight2", 32, {{4, 2}, {8, 2}}, "eta(4 tau)^2 eta(8 tau)^2"));
    forms.emplace_back("level36.form", eta_form("level36_weight2", 36, {{6, 4}}, "eta(6 tau)^4"));
    for (const auto& [name, file] : forms) {
      const std::string text = serialize_form_file(file);
      check(serialize_form_file(parse_form_file(text)) == text, "round trip of " + name);
      save_form_file((dir / name).string(), file);
      std::cout << "wrote " << (dir / name).string() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "gen_corpus: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
