#include "cuspfield/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cuspfield/error.hpp"
#include "cuspfield/field_bounds.hpp"

namespace cuspfield {

namespace {

using cplx = std::complex<double>;

MatZ random_sl2(std::mt19937& rng, i64 bound) {
  std::uniform_int_distribution<i64> ent(-bound, bound);
  for (;;) {
    MatZ g{ent(rng), ent(rng), ent(rng), ent(rng)};
    if (g.det() == 1) return g;
  }
}

// SL2 matrix with lower-left entry c and a random admissible d.
MatZ with_lower_left(std::mt19937& rng, i64 c) {
  std::uniform_int_distribution<i64> ent(-20, 20);
  for (;;) {
    const i64 d = ent(rng);
    if (gcd(c, d) != 1) continue;
    const Egcd e = egcd(d, c);  // x d + y c = 1
    return MatZ{e.x, -e.y, c, d};
  }
}

bool integral(const QExpansion& f) {
  for (const auto& c : f.coeffs())
    for (const auto& x : c.coords())
      if (x.get_den() != 1) return false;
  return true;
}

std::string mat(const MatZ& g) { return g.to_string(); }

void eisenstein_galois(SuiteReport& r, const SuiteOptions& o) {
  const std::vector<MatZ> gens{MatZ::S(), MatZ::T(), MatZ::S() * MatZ::T()};
  std::vector<std::pair<int, bool>> kinds;
  for (int k : o.weights) kinds.emplace_back(k, false);
  if (o.tilde) kinds.emplace_back(2, true);
  for (i64 n = 2; n <= o.max_level; ++n)
    for (auto [k, tilde] : kinds) {
      const i64 prec = 4 * sturm_bound(n, k);
      for (i64 a = 0; a < n; ++a)
        for (i64 b = 0; b < n; ++b) {
          const EisIndex idx(n, a, b, k, tilde);
          for (const MatZ& g : gens) {
            const QExpansion base = eis_expansion(index_slash(idx, MatModN::reduce(g, n)), prec);
            for (i64 l : units(n)) {
              const EisIndex conj(n, a, mod(l * b, n), k, tilde);
              const QExpansion rhs = eis_expansion(index_slash(conj, MatModN::reduce(g_lambda(g, l, n), n)), prec);
              const QExpansion lhs = base.apply_galois(l);
              r.check(lhs == rhs.embed(lhs.modulus()), idx.to_string() + " g=" + mat(g) + " lambda=" + std::to_string(l));
            }
          }
        }
    }
}

void n2_relation(SuiteReport& r, const SuiteOptions& o) {
  const i64 prec = o.relation_prec;
  QExpansion sum(2, prec, 1);
  for (auto [a, b] : {std::pair<i64, i64>{1, 0}, {0, 1}, {1, 1}}) {
    const QExpansion e = eis_expansion(EisIndex(2, a, b, 2, true), prec);
    r.check(!e.is_zero(), "tilde E(" + std::to_string(a) + "," + std::to_string(b) + ") vanishes");
    sum += e;
  }
  for (i64 n = 0; n < sum.prec(); ++n) r.check(sum.coeff(n).is_zero(), "relation fails at index " + std::to_string(n));
}

EisDecomposition random_combination(std::mt19937& rng, i64 n, int k) {
  std::uniform_int_distribution<i64> res(0, n - 1);
  std::uniform_int_distribution<int> coef(-5, 5), count(1, 3), tilde(0, 3);
  for (;;) {
    std::vector<EisTerm> terms;
    const int t = count(rng);
    for (int i = 0; i < t; ++i) {
      std::vector<EisIndex> fac;
      int left = k;
      while (left > 0) {
        if (left >= 2 && tilde(rng) == 0) {
          fac.emplace_back(n, res(rng), res(rng), 2, true);
          left -= 2;
        } else {
          fac.emplace_back(n, res(rng), res(rng), 1);
          --left;
        }
      }
      terms.push_back({EisMonomial(n, fac), CycNumber::from_int(coef(rng)) * CycNumber::zeta(n, res(rng)) + CycNumber::one()});
    }
    EisDecomposition d = make_decomposition(n, k, terms);
    if (!d.terms.empty()) return d;
  }
}

void galois_slash_random(SuiteReport& r, const SuiteOptions& o) {
  std::mt19937 rng(o.seed);
  std::uniform_int_distribution<i64> level(2, o.max_level);
  std::uniform_int_distribution<int> weight(1, o.max_weight);
  for (int t = 0; t < o.cases;) {
    const i64 n = level(rng);
    const int k = weight(rng);
    if (n <= 2 && k % 2 == 1) continue;  // -I in Gamma(N): odd weight space is zero
    ++t;
    const EisDecomposition d = random_combination(rng, n, k);
    const MatZ g = random_sl2(rng, 6);
    const i64 m = d.modulus();
    std::vector<i64> us = units(m);
    const i64 l = us[std::uniform_int_distribution<std::size_t>(0, us.size() - 1)(rng)];
    const i64 prec = 2 * sturm_bound(n, std::max(k, 1));
    r.check(galois_slash_check(d, g, l, prec), "N=" + std::to_string(n) + " k=" + std::to_string(k) + " g=" + mat(g) +
                                                   " lambda=" + std::to_string(l));
  }
}

i64 terms_for(double im_tau, i64 width) {
  const double rate = 2 * std::numbers::pi * im_tau / static_cast<double>(width);
  return static_cast<i64>(std::ceil(70.0 / rate)) + 30;
}

void numeric_oracle(SuiteReport& r, const SuiteOptions& o) {
  std::mt19937 rng(o.seed + 7);
  std::uniform_int_distribution<i64> ent(-5, 5), level(1, std::max<i64>(o.max_level, 1));
  std::uniform_int_distribution<int> weight(1, 4);
  int done = 0;
  while (done < o.cases) {
    const i64 n = level(rng);
    const int k = weight(rng);
    std::uniform_int_distribution<i64> res(0, n - 1);
    const EisIndex idx(n, res(rng), res(rng), k, k == 2);
    if (canonical(idx).sign == 0) continue;
    MatZ g{ent(rng), ent(rng), ent(rng), ent(rng)};
    if (g.det() != 1) continue;
    ++done;
    const EisIndex moved = index_slash(idx, MatModN::reduce(g, n));
    double worst = 0;
    for (double theta : {std::numbers::pi / 2, std::numbers::pi / 3, 2 * std::numbers::pi / 3}) {
      cplx tau;
      if (g.c == 0) tau = cplx(std::cos(theta), 0.9 * std::sin(theta) + 0.2);
      else tau = (std::polar(1.0, g.c > 0 ? theta : -theta) - static_cast<double>(g.d)) / static_cast<double>(g.c);
      const cplx den = static_cast<double>(g.c) * tau + static_cast<double>(g.d);
      const cplx gtau = (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) / den;
      const i64 p1 = terms_for(tau.imag(), n), p2 = terms_for(gtau.imag(), n);
      const cplx lhs = eis_expansion(moved, p1).eval_numeric(tau, p1).value;
      const cplx rhs = std::pow(den, -k) * eis_expansion(idx, p2).eval_numeric(gtau, p2).value;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    std::ostringstream os;
    os << idx.to_string() << " g=" << mat(g) << " error=" << worst;
    r.check(worst < o.tolerance, os.str());
  }
}

const std::vector<MatZ> kSweep{MatZ::S(), MatZ{1, 0, 3, 1}, MatZ{2, 1, 1, 1}, MatZ{1, 2, 1, 3}, MatZ{0, -1, 1, 3}};

void fg_sigma(SuiteReport& r, const SuiteOptions& o) {
  for (const auto& f : o.forms) {
    const FormMetadata meta = metadata_of(f);
    const i64 prec = std::max<i64>(6 * f.level, sturm_bound(f.level, f.weight));
    const i64 m = lcm(lcm(f.level, f.field_modulus), f.chi().order());
    for (const MatZ& g : kSweep) {
      // Galois-slash compatibility for the form
      int used = 0;
      for (i64 l : units(m)) {
        if (l == 1) continue;
        if (++used > 3) break;
        r.check(galois_slash_check(f, g, l, prec), f.name + " g=" + mat(g) + " lambda=" + std::to_string(l));
      }
      // automorphisms fixing K_f(zeta_N') act on f|g through chi_g
      const auto rep = field_bound(meta, g);
      const QExpansion fg = slash_expand(f, g, prec);
      if (o.denominators && integral(f.expansion)) o.denominators->record(fg, f.level, f.name + " g=" + mat(g));
      const i64 mm = fg.modulus();
      const UnitSubgroup fix = rep.base_field.stabilizer_at(lcm(mm, rep.base_field.modulus()));
      for (i64 l : units(mm)) {
        if (!fix.contains(mod(l, lcm(mm, rep.base_field.modulus())))) continue;
        const CycNumber twist = chi_g_value(meta.chi, g, rep.mprime == 1 ? 0 : mod(l, rep.mprime));
        r.check(fg.apply_galois(l) == fg * twist, f.name + " equivariance g=" + mat(g) + " lambda=" + std::to_string(l));
      }
      bool inside = true;
      for (const auto& c : fg.coeffs()) inside = inside && rep.in_module(c);
      r.check(inside, f.name + " g=" + mat(g) + ": coefficient outside " + rep.module_description());
    }
  }
}

void field_bounds_brute(SuiteReport& r, const SuiteOptions& o) {
  std::mt19937 rng(o.seed + 13);
  for (i64 n = 1; n <= o.brute_level; ++n) {
    const auto divs = divisors(n);
    const std::size_t per = (20 + divs.size() - 1) / divs.size();
    std::size_t slot = 0;
    for (i64 delta : divs) {
      for (std::size_t t = 0; t < per; ++t, ++slot) {
        // lower-left entry with gcd(C, N) = delta
        i64 c = delta;
        for (i64 s = 1 + static_cast<i64>(rng() % 7);; ++s)
          if (gcd(delta * s, n) == delta) {
            c = delta * s;
            break;
          }
        const MatZ g = with_lower_left(rng, c);
        const i64 m = divs[slot % divs.size()];
        i64 best = -1;
        for (i64 u = 0; u < n; ++u) {
          const i64 v = translation_modulus(n, m, g, u);
          if (best < 0 || v < best) best = v;
        }
        const Translation tr = minimal_M_translation(n, m, g);
        r.check(tr.mprime == best && translation_modulus(n, m, g, tr.u) == best,
                "translation N=" + std::to_string(n) + " m=" + std::to_string(m) + " g=" + mat(g));
      }
    }
  }
  for (i64 n = 1; n <= o.optimal_level; ++n)
    for (i64 delta : divisors(n)) {
      i64 best = -1;
      for (i64 q : maximal_divisors(n)) {
        const i64 v = atkin_lehner_cusp_modulus(delta, n, q);
        if (best < 0 || v < best) best = v;
      }
      const OptimalQ opt = optimal_atkin_lehner_Q(delta, n);
      r.check(opt.mprime == best && opt.mprime == gcd(delta, n / delta) && atkin_lehner_cusp_modulus(delta, n, opt.q) == best,
              "optimal Q N=" + std::to_string(n) + " delta=" + std::to_string(delta));
    }
}

void exact_field(SuiteReport& r, const SuiteOptions& o) {
  for (const auto& f : o.forms) {
    if (!f.is_newform || !f.chi().is_trivial() || f.weight < 2) continue;
    const auto divs = divisors(f.level);
    const int per = static_cast<int>((o.matrices + divs.size() - 1) / divs.size());
    for (i64 e : divs) {
      // (1, 0; e t, 1) has gcd(CD, N) = e when gcd(t, N) = 1; e = N also uses S
      int made = 0;
      for (i64 t = 1; made < per; ++t) {
        if (gcd(t, f.level) != 1) continue;
        const MatZ g = (e == f.level && made == 0) ? MatZ::S() : MatZ{1, 0, e * t, 1};
        ++made;
        const i64 prec = 6 * f.level;
        const Certification c = certify_exact_field(f, g, prec);
        if (o.denominators) o.denominators->record(slash_expand(f, g, prec), f.level, f.name + " g=" + mat(g));
        r.check(c.verdict == FieldVerdict::Exact, f.name + " g=" + mat(g) + " verdict " + verdict_name(c.verdict) +
                                                     " observed " + c.observed.describe());
      }
    }
  }
}

void atkin_lehner(SuiteReport& r, const SuiteOptions& o) {
  for (const auto& f : o.forms) {
    const FormMetadata meta = metadata_of(f);
    for (i64 q : maximal_divisors(f.level)) {
      const AtkinLehnerBound b = atkin_lehner_bound(meta, q);
      const QExpansion fh = slash_expand(f, atkin_lehner_matrices(q, f.level).h, 6 * f.level);
      if (o.denominators && integral(f.expansion)) o.denominators->record(fh, f.level, f.name + " h_" + std::to_string(q));
      bool inside = true;
      for (const auto& c : fh.coeffs()) inside = inside && b.field.contains(c / b.scalar);
      r.check(inside, f.name + " Q=" + std::to_string(q) + ": f|h_Q outside " + b.description());
      if (q == 1 || factor(q).size() != 1) continue;
      const RadicalNumber engine = engine_pseudo_eigenvalue(f, q);
      r.check(std::abs(std::abs(engine.to_complex()) - 1.0) < 1e-10, f.name + " |lambda_Q| != 1 at Q=" + std::to_string(q));
      if (f.expansion.coeff(q).is_zero()) continue;  // Atkin-Li not applicable
      const RadicalNumber formula = atkin_li_lambda(f, q);
      r.check(formula == engine, f.name + " Atkin-Li " + formula.to_string() + " vs engine " + engine.to_string());
      auto it = f.atkin_lehner.find(q);
      if (it != f.atkin_lehner.end()) r.check(engine == RadicalNumber{CycNumber::from_int(it->second), 1}, f.name + " stored eigenvalue");
    }
  }
}

void level9_example(SuiteReport& r, const SuiteOptions& o) {
  const DirichletCharacter chi = DirichletCharacter::from_generator_exponents(9, {mpq_class(1, 6)});
  const MatZ g{0, -1, 1, 3};
  const FieldBoundReport rep = field_bound(FormMetadata{9, 3, chi, AbelianFieldDescriptor::cyclotomic(3)}, g);
  const auto gp = rep.gprime.elements();
  r.check(rep.nprime == 3, "N' = 3");
  r.check(rep.mprime == 9, "m' = 9");
  r.check(std::vector<i64>(gp.begin(), gp.end()) == std::vector<i64>{1, 4, 7}, "G' = {1,4,7}");
  r.check(rep.rejected_zetas == std::vector<i64>{1}, "c = 0 at zeta_9");
  r.check(rep.zeta_choice == 2 && rep.c == CycNumber::from_int(3) * CycNumber::zeta(9, 2), "c = 3 zeta_9^2 at zeta_9^2");
  for (const auto& f : o.forms) {
    if (f.level != 9 || f.weight != 3 || !(f.chi() == chi)) continue;
    const FieldBoundReport fr = field_bound(metadata_of(f), g);
    const QExpansion fg = slash_expand(f, g, default_precision(f));
    if (o.denominators && integral(f.expansion)) o.denominators->record(fg, f.level, f.name + " g=" + mat(g));
    bool inside = !fg.is_zero();
    for (const auto& c : fg.coeffs()) inside = inside && fr.in_module(c);
    r.check(inside, f.name + ": f|g coefficients in " + fr.module_description());
  }
}

void denominators(SuiteReport& r, const SuiteOptions& o) {
  std::mt19937 rng(o.seed + 29);
  DenominatorLog local;
  DenominatorLog& log = o.denominators ? *o.denominators : local;
  for (const auto& f : o.forms) {
    if (!integral(f.expansion)) continue;
    for (int t = 0; t < o.cases; ++t) {
      const MatZ g = t == 0 ? MatZ::S() : random_sl2(rng, 8);
      const std::size_t before = log.violations;
      log.record(slash_expand(f, g, 4 * f.level), f.level, f.name + " g=" + mat(g));
      r.check(log.violations == before, f.name + " denominator prime outside N for g=" + mat(g));
    }
  }
}

}  // namespace

void DenominatorLog::record(const QExpansion& fg, i64 level, const std::string& label) {
  ++series;
  for (const auto& c : fg.coeffs())
    for (const auto& x : c.coords()) {
      mpz_class d = x.get_den();
      for (i64 p : prime_divisors(level))
        while (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) d /= static_cast<unsigned long>(p);
      if (d != 1) {
        ++violations;
        if (details.size() < 10) details.push_back(label + ": denominator factor " + d.get_str());
        return;
      }
    }
}

void SuiteReport::check(bool ok, const std::string& what) {
  ++checks;
  if (ok) return;
  ++failures;
  if (failure_details.size() < 10) failure_details.push_back(what);
}

std::vector<std::string> suite_names() {
  return {"eisenstein-galois", "n2-relation", "galois-slash-random", "numeric-oracle", "fg-sigma", "field-bounds-brute",
          "exact-field",       "atkin-lehner",        "level9-example", "denominators"};
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& o) {
  SuiteReport r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  if (o.log) o.log("running " + name);
  try {
    if (name == "eisenstein-galois") eisenstein_galois(r, o);
    else if (name == "n2-relation") n2_relation(r, o);
    else if (name == "galois-slash-random") galois_slash_random(r, o);
    else if (name == "numeric-oracle") numeric_oracle(r, o);
    else if (name == "fg-sigma") fg_sigma(r, o);
    else if (name == "field-bounds-brute") field_bounds_brute(r, o);
    else if (name == "exact-field") exact_field(r, o);
    else if (name == "atkin-lehner") atkin_lehner(r, o);
    else if (name == "level9-example") level9_example(r, o);
    else if (name == "denominators") denominators(r, o);
    else fail(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument && r.checks == 0 && std::string(e.what()).rfind("unknown suite", 0) == 0) throw;
    r.check(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace cuspfield
