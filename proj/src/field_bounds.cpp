#include "cuspfield/field_bounds.hpp"

#include <cmath>
#include <sstream>

#include "cuspfield/error.hpp"

namespace cuspfield {

namespace {

// c * F, written zeta_M^j * F when c is a nonzero rational times a root of unity.
std::string scaled_field_text(const CycNumber& c, const AbelianFieldDescriptor& f) {
  const CycNumber v = c.minimal();
  const auto xs = v.coords();
  std::size_t nonzero = 0, at = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] != 0) ++nonzero, at = i;
  if (nonzero != 1) return v.to_string() + " * " + f.describe();
  if (at == 0) return f.describe();
  return "zeta_" + std::to_string(v.modulus()) + (at == 1 ? "" : "^" + std::to_string(at)) + " * " + f.describe();
}

i64 gcd0(i64 x, i64 n) { return gcd(x, n); }  // gcd(0, n) = n

// Product of p^v_p(n) over primes p | n that also divide x (x = 0: all of them).
i64 part_dividing(i64 n, i64 x) {
  i64 out = 1;
  for (auto [p, e] : factor(n))
    if (x == 0 || x % p == 0)
      for (int i = 0; i < e; ++i) out *= p;
  return out;
}

// Q^(e/2) as rational * sqrt(radical).
std::pair<mpq_class, i64> half_power(i64 q, int e) {
  require(e >= 0, ErrorCode::InvalidArgument, "negative half power");
  mpz_class r = 1;
  for (int i = 0; i < e / 2; ++i) r *= q;
  if (e % 2 == 0) return {mpq_class(r), 1};
  auto s = split_square(q);
  return {mpq_class(r * s.square_root), s.squarefree};
}

}  // namespace

i64 nprime(i64 n, const MatZ& g) {
  require(n >= 1, ErrorCode::InvalidArgument, "nprime: level must be positive");
  return n / gcd0(mod(g.c * g.d, n), n);
}

FormMetadata metadata_of(const ModularFormInput& f) {
  FormMetadata m{f.level, f.weight, f.chi(), AbelianFieldDescriptor::rational()};
  const auto& c = f.expansion.coeffs();
  if (c.size() > 1) {
    std::vector<CycNumber> vals(c.begin() + 1, c.end());
    m.kf = field_of(vals, lcm(f.field_modulus, f.expansion.modulus())).reduced();
  }
  return m;
}

CycNumber chi_g_value(const DirichletCharacter& chi, const MatZ& g, i64 mu) {
  const DirichletCharacter prim = chi.primitive();
  const i64 m = prim.modulus();
  const i64 mp = m / gcd0(mod(g.b * g.c, m), m);
  const i64 mu_inv = mp == 1 ? 0 : inv_mod(mu, mp);
  const i64 x = mod(mod(g.a * g.d, m) - mod(mu_inv * mod(g.b * g.c, m), m), m);
  return prim.value(x);
}

bool FieldBoundReport::in_module(const CycNumber& v) const {
  if (v.is_zero()) return true;
  return base_field.contains(v / c);
}

std::string FieldBoundReport::module_description() const { return scaled_field_text(c, base_field); }

FieldBoundReport field_bound(const FormMetadata& f, const MatZ& g) {
  require(g.det() == 1, ErrorCode::InvalidArgument, "field_bound: matrix must lie in SL2(Z)");
  require(f.chi.modulus() == f.level, ErrorCode::InvalidArgument, "field_bound: character modulus must equal the level");
  require(f.chi.parity() == (f.weight % 2 == 0 ? 1 : -1), ErrorCode::NotModular,
          "field_bound: character parity does not match the weight");
  const DirichletCharacter prim = f.chi.primitive();
  const i64 m = prim.modulus();
  FieldBoundReport r;
  r.nprime = nprime(f.level, g);
  r.mprime = m / gcd0(mod(g.b * g.c, m), m);
  r.M = lcm(r.nprime, r.mprime);
  r.base_field = f.kf.compositum(AbelianFieldDescriptor::cyclotomic(r.nprime));
  r.gprime = intersect_with_cyclotomic(r.base_field, r.mprime);
  for (i64 mu : r.gprime.elements()) r.chi_g_values.emplace_back(mu, chi_g_value(f.chi, g, mu));

  const i64 ad = mod(g.a * g.d, m), bc = mod(g.b * g.c, m);
  for (i64 j = 1; j <= r.mprime; ++j) {
    CycNumber c = CycNumber::zero(lcm(r.mprime, prim.order()));
    for (i64 mu : r.gprime.elements()) {
      CycNumber v = prim.value(mod(ad - mu * bc, m));
      if (v.is_zero()) continue;
      c += v * CycNumber::zeta(r.mprime, mod(j * mu, r.mprime));
    }
    if (!c.is_zero()) {
      r.c = c;
      r.zeta_choice = j;
      break;
    }
    r.rejected_zetas.push_back(j);
  }
  if (r.c.is_zero()) fail(ErrorCode::Internal, "field_bound: every root of unity gives c = 0");

  // fixed field of ker(chi_g) inside K_f(zeta_M)
  const i64 l = lcm(r.base_field.modulus(), r.mprime);
  const UnitSubgroup h = r.base_field.stabilizer_at(l);
  std::vector<i64> kernel;
  for (i64 x : h.elements()) {
    const CycNumber v = chi_g_value(f.chi, g, r.mprime == 1 ? 0 : mod(x, r.mprime));
    if (v == CycNumber::one()) kernel.push_back(x);
  }
  r.composite_field = AbelianFieldDescriptor(l, UnitSubgroup::generated(l, kernel)).reduced();
  return r;
}

bool chi_g_hom_check(const DirichletCharacter& chi, const MatZ& g, const AbelianFieldDescriptor& kf) {
  const DirichletCharacter prim = chi.primitive();
  const i64 m = prim.modulus();
  const i64 mp = m / gcd0(mod(g.b * g.c, m), m);
  const auto base = kf.compositum(AbelianFieldDescriptor::cyclotomic(nprime(chi.modulus(), g)));
  const UnitSubgroup gp = intersect_with_cyclotomic(base, mp);
  for (i64 x : gp.elements()) {
    const CycNumber vx = chi_g_value(chi, g, x);
    if (vx.is_zero()) return false;
    for (i64 y : gp.elements()) {
      const i64 xy = mp == 1 ? 0 : mod(x * y, mp);
      if (!(chi_g_value(chi, g, xy) == vx * chi_g_value(chi, g, y))) return false;
    }
  }
  return true;
}

std::string AtkinLehnerBound::description() const {
  std::ostringstream os;
  os << "Q^(k/2) = " << scale_rational.get_str();
  if (scale_radical != 1) os << "*sqrt(" << scale_radical << ")";
  os << ", coefficients of f|h_Q in " << scaled_field_text(scalar, field);
  return os.str();
}

AtkinLehnerBound atkin_lehner_bound(const FormMetadata& f, i64 q) {
  require(is_maximal_divisor(q, f.level), ErrorCode::InvalidArgument,
          "atkin_lehner_bound: Q must be a maximal divisor of N");
  AtkinLehnerBound b;
  b.q = q;
  b.weight = f.weight;
  std::tie(b.scale_rational, b.scale_radical) = half_power(q, f.weight);
  const DirichletCharacter chi_q = q_part(f.chi, q).first;
  if (chi_q.is_trivial()) {
    b.scalar = CycNumber::one();
    b.field = f.kf.compositum(AbelianFieldDescriptor::cyclotomic(q));
  } else {
    b.scalar = gauss_sum(chi_q.primitive());
    b.field = f.kf;
  }
  for (i64 u : units(q)) b.chi_hq_values.emplace_back(u, q == 1 ? CycNumber::one() : chi_q.value(inv_mod(u, q)));
  return b;
}

std::complex<double> RadicalNumber::to_complex() const {
  return value.to_complex() * std::sqrt(static_cast<double>(radical));
}

std::string RadicalNumber::to_string() const {
  std::string s = value.minimal().to_string();
  if (radical != 1) s += " * sqrt(" + std::to_string(radical) + ")";
  return s;
}

RadicalNumber atkin_li_lambda(const ModularFormInput& f, i64 q) {
  const auto fac = factor(q);
  require(fac.size() == 1 && is_maximal_divisor(q, f.level), ErrorCode::InvalidArgument,
          "atkin_li_lambda: Q must be the full power of a prime dividing N");
  require(f.group == GroupTag::Gamma0, ErrorCode::InvalidArgument, "atkin_li_lambda: needs a Gamma0(N) form");
  require(f.is_newform, ErrorCode::InvalidArgument, "atkin_li_lambda: needs a newform");
  require(q < f.expansion.prec(), ErrorCode::InvalidArgument, "atkin_li_lambda: a_Q is beyond the declared precision");
  const CycNumber aq = f.expansion.coeff(q);
  if (aq.is_zero()) fail(ErrorCode::Domain, "Atkin-Li formula inapplicable: a_Q = 0");
  const DirichletCharacter chi_q = q_part(f.chi(), q).first;
  const CycNumber gauss = gauss_sum_raw(chi_q);
  auto [rat, rad] = half_power(q, f.weight - 2);
  return {gauss / aq * rat, rad};
}

RadicalNumber engine_pseudo_eigenvalue(const ModularFormInput& f, i64 q) {
  const auto al = atkin_lehner_matrices(q, f.level);
  const i64 idx = f.level / q;
  const QExpansion fh = slash_expand(f, al.h, idx + 1);
  auto [rat, rad] = half_power(q, f.weight);
  return {fh.coeff(idx) * rat, rad};
}

i64 translation_modulus(i64 n, i64 m, const MatZ& g, i64 u) {
  const i64 d2 = u * g.c + g.d, b2 = u * g.a + g.b;
  const i64 x = n / gcd0(mod(g.c * d2, n), n);
  const i64 y = m / gcd0(mod(g.c * b2, m), m);
  return lcm(x, y);
}

Translation minimal_M_translation(i64 n, i64 m, const MatZ& g) {
  require(g.det() == 1, ErrorCode::InvalidArgument, "minimal_M_translation: matrix must lie in SL2(Z)");
  require(m >= 1 && n % m == 0, ErrorCode::InvalidArgument, "minimal_M_translation: m must divide N");
  const i64 nc = part_dividing(n, g.c);
  const i64 mc = part_dividing(m, g.c);
  const i64 mprime = nc / gcd0(mod(g.c, n), n) * (m / mc);
  const i64 rest = n / nc;
  i64 u = 0;
  if (rest > 1) u = mod(-g.d * inv_mod(mod(g.c, rest), rest), rest);
  if (translation_modulus(n, m, g, u) != mprime)
    fail(ErrorCode::Internal, "minimal_M_translation: witness does not attain the closed form");
  return {mprime, u};
}

i64 atkin_lehner_cusp_modulus(i64 delta, i64 n, i64 q) {
  require(n % delta == 0, ErrorCode::InvalidArgument, "cusp denominator must divide N");
  require(is_maximal_divisor(q, n), ErrorCode::InvalidArgument, "Q must be a maximal divisor of N");
  const i64 dq = gcd(delta, q);
  const i64 dprime = q / dq * (delta / dq);
  return part_dividing(n, dprime) / dprime;
}

OptimalQ optimal_atkin_lehner_Q(i64 delta, i64 n) {
  require(delta >= 1 && n % delta == 0, ErrorCode::InvalidArgument, "optimal_atkin_lehner_Q: delta must divide N");
  i64 q = 1;
  for (auto [p, e] : factor(n)) {
    const int v = valuation(delta, p);
    if (v > 0 && 2 * v <= e)
      for (int i = 0; i < e; ++i) q *= p;
  }
  const i64 mprime = gcd(delta, n / delta);
  if (atkin_lehner_cusp_modulus(delta, n, q) != mprime)
    fail(ErrorCode::Internal, "optimal_atkin_lehner_Q: Q does not attain gcd(delta, N/delta)");
  return {q, mprime};
}

std::string CuspPlan::describe() const {
  std::ostringstream os;
  os << "cusp denominator delta = " << delta << " on level " << level << '\n';
  os << "Atkin-Lehner divisor Q = " << q << ", M' = gcd(delta, N/delta) = " << mprime << '\n';
  os << "h_Q = " << h.to_string() << '\n';
  os << "diag(Q,1) g = g2 * upper with g2 = " << g2.to_string() << ", upper = " << upper.to_string() << '\n';
  os << "g' = h_Q g2 = " << gprime.to_string() << ", translation u = " << u << " (M_u = " << translated_mprime << ")\n";
  os << "working field: K_f(zeta_" << translated_mprime << ")\n";
  os << "steps: F = f|g' T^u; F|T^-u; apply upper; multiply by the W_Q eigenvalue\n";
  return os.str();
}

CuspPlan plan_cusp(i64 n, i64 m, const MatZ& g) {
  require(g.det() == 1, ErrorCode::InvalidArgument, "plan_cusp: matrix must lie in SL2(Z)");
  CuspPlan p;
  p.level = n;
  p.conductor = m;
  p.g = g;
  p.delta = gcd0(mod(g.c, n), n);
  const OptimalQ opt = optimal_atkin_lehner_Q(p.delta, n);
  p.q = opt.q;
  p.mprime = opt.mprime;
  p.h = atkin_lehner_matrices(p.q, n).h;
  const WqDecomposition wd = wq_g_decomposition(g, p.q, n);
  p.g2 = wd.g2;
  p.upper = wd.upper;
  p.gprime = p.h * p.g2;
  const Translation tr = minimal_M_translation(n, m, p.gprime);
  p.u = tr.u;
  p.translated_mprime = tr.mprime;
  if (m == 1 && tr.mprime != p.mprime) fail(ErrorCode::Internal, "plan_cusp: translation does not reach gcd(delta, N/delta)");
  return p;
}

QExpansion plan_working_series(const ModularFormInput& f, const CuspPlan& plan, i64 prec) {
  return slash_expand(f, plan.gprime * MatZ::T(plan.u), prec);
}

QExpansion replay_plan(const ModularFormInput& f, const CuspPlan& plan, i64 prec) {
  require(f.chi().is_trivial(), ErrorCode::Unsupported, "replay_plan: needs a trivial character");
  require(f.level == plan.level, ErrorCode::InvalidArgument, "replay_plan: level mismatch");
  CycNumber eps = CycNumber::one();
  if (plan.q > 1) {
    auto it = f.atkin_lehner.find(plan.q);
    if (it != f.atkin_lehner.end()) {
      eps = CycNumber::from_int(it->second);
    } else {
      const RadicalNumber l = engine_pseudo_eigenvalue(f, plan.q);
      require(l.radical == 1 && (l.value == CycNumber::one() || l.value == CycNumber::from_int(-1)), ErrorCode::NotModular,
              "replay_plan: f is not a W_Q eigenform");
      eps = l.value;
    }
  }
  const i64 a = plan.upper.a, b = plan.upper.b, d = plan.upper.d;
  const i64 in_prec = (prec * d + a - 1) / a + 1;
  const QExpansion fg2 = plan_working_series(f, plan, in_prec).apply_T_power(-plan.u);
  const ScaledExpansion up = apply_upper_triangular(fg2, a, b, d, f.weight);
  if (up.radical != 1) fail(ErrorCode::Unsupported, "replay_plan: odd weight radicals are not supported");
  return (up.series.reduce_width(f.level) * eps).truncate(prec);
}

std::string verdict_name(FieldVerdict v) {
  switch (v) {
    case FieldVerdict::Exact: return "EXACT";
    case FieldVerdict::StrictlySmaller: return "STRICTLY-SMALLER";
    case FieldVerdict::Contained: return "CONTAINED";
    case FieldVerdict::NotContained: return "NOT-CONTAINED";
  }
  return "NOT-CONTAINED";
}

Certification certify_exact_field(const ModularFormInput& f, const MatZ& g, i64 prec) {
  const FormMetadata meta = metadata_of(f);
  Certification c;
  c.nprime = nprime(f.level, g);
  c.predicted = meta.kf.compositum(AbelianFieldDescriptor::cyclotomic(c.nprime)).reduced();
  const QExpansion fg = slash_expand(f, g, prec);
  c.observed = field_of(fg.coeffs(), lcm(fg.modulus(), c.predicted.modulus())).reduced();
  const bool contained = c.predicted.contains(c.observed);
  const bool exact_mode = f.is_newform && f.group == GroupTag::Gamma0 && f.chi().is_trivial();
  if (!contained) c.verdict = FieldVerdict::NotContained;
  else if (!exact_mode) c.verdict = FieldVerdict::Contained;
  else c.verdict = c.observed == c.predicted ? FieldVerdict::Exact : FieldVerdict::StrictlySmaller;
  return c;
}

}  // namespace cuspfield
