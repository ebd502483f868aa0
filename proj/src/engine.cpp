#include "cuspfield/engine.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>

#include "cuspfield/error.hpp"
#include "eisenstein_internal.hpp"
#include "modp.hpp"
#include "qlinalg.hpp"
#include "zseries.hpp"

namespace cuspfield {

std::string group_tag_name(GroupTag tag) {
  switch (tag) {
    case GroupTag::Gamma: return "gamma";
    case GroupTag::Gamma1: return "gamma1";
    case GroupTag::Gamma0: return "gamma0";
  }
  return "gamma0";
}

GroupTag parse_group_tag(std::string_view text) {
  if (text == "gamma") return GroupTag::Gamma;
  if (text == "gamma1") return GroupTag::Gamma1;
  if (text == "gamma0") return GroupTag::Gamma0;
  fail(ErrorCode::Parse, "unknown group tag '" + std::string(text) + "' (expected gamma, gamma1 or gamma0)");
}

DirichletCharacter ModularFormInput::chi() const {
  return character ? *character : DirichletCharacter::trivial(level);
}

QExpansion ModularFormInput::at_level_width() const {
  return expansion.width() == level ? expansion : expansion.rescale_width(level);
}

void ModularFormInput::validate(bool with_expansion) const {
  require(level >= 1, ErrorCode::InvalidArgument, "form: level must be positive");
  require(weight >= 1, ErrorCode::InvalidArgument, "form: weight must be positive");
  require(field_modulus >= 1, ErrorCode::InvalidArgument, "form: field modulus must be positive");
  if (character) {
    require(group == GroupTag::Gamma0 || character->is_trivial(), ErrorCode::InvalidArgument,
            "form: a character is only allowed with the gamma0 group tag");
    require(character->modulus() == level, ErrorCode::InvalidArgument, "form: character modulus must equal the level");
    require(character->parity() == (weight % 2 == 0 ? 1 : -1), ErrorCode::NotModular,
            "form: character parity chi(-1) does not match (-1)^k");
  } else if (group == GroupTag::Gamma0) {
    require(weight % 2 == 0 || level <= 2, ErrorCode::NotModular,
            "form: odd weight on Gamma0(N) needs an odd character");
  }
  for (const auto& [q, e] : atkin_lehner) {
    require(is_maximal_divisor(q, level), ErrorCode::InvalidArgument,
            "form: Atkin-Lehner entry " + std::to_string(q) + " is not a maximal divisor of the level");
    require(e == 1 || e == -1, ErrorCode::InvalidArgument, "form: Atkin-Lehner eigenvalues must be +1 or -1");
  }
  if (!with_expansion) return;
  require(expansion.width() == expansion_width(), ErrorCode::InvalidArgument,
          "form: expansion width must be " + std::to_string(expansion_width()));
  require(field_modulus % expansion.modulus() == 0, ErrorCode::InvalidArgument,
          "form: coefficients do not lie in the declared field Q(zeta_" + std::to_string(field_modulus) + ")");
  const i64 at_n = expansion.prec() * (level / expansion_width());
  const i64 need = sturm_bound(level, weight);
  require(at_n >= need, ErrorCode::InvalidArgument,
          "form: declared precision " + std::to_string(at_n) + " (in q^(1/N)) is below the Sturm bound " +
              std::to_string(need));
}

ModularFormInput ModularFormInput::galois_conjugate(i64 lambda) const {
  require(gcd(lambda, lcm(field_modulus, chi().order())) == 1, ErrorCode::Domain,
          "galois_conjugate: lambda is not a unit");
  ModularFormInput out = *this;
  out.expansion = expansion.apply_galois(mod(lambda, expansion.modulus()));
  if (character) out.character = character->power(lambda);
  out.name = name + "^sigma" + std::to_string(lambda);
  return out;
}

std::string ModularFormInput::cache_key() const {
  std::ostringstream os;
  os << level << '|' << weight << '|' << group_tag_name(group) << '|' << chi().to_string() << '|'
     << expansion.to_string();
  return os.str();
}

i64 EisDecomposition::modulus() const {
  i64 m = level;
  for (const auto& t : terms) m = lcm(m, t.coeff.modulus());
  return m;
}

std::string EisDecomposition::to_string() const {
  std::ostringstream os;
  os << "level=" << level << " weight=" << weight << " terms=" << terms.size() << '\n';
  for (const auto& t : terms) os << t.coeff.to_string() << " * " << t.monomial.to_string() << '\n';
  return os.str();
}

i64 sturm_bound(i64 n, int k) {
  require(n >= 1 && k >= 1, ErrorCode::InvalidArgument, "sturm_bound: N and k must be positive");
  const i64 idx = index_gamma(n);
  return (k * idx + 11) / 12 + 1;
}

i64 sturm_bound_gamma0(i64 n, int k) {
  require(n >= 1 && k >= 1, ErrorCode::InvalidArgument, "sturm_bound_gamma0: N and k must be positive");
  return (k * index_gamma0(n) + 11) / 12 + 1;
}

i64 dim_modular_forms_gamma(i64 n, int k) {
  require(n >= 2 && k >= 1, ErrorCode::InvalidArgument, "dim_modular_forms_gamma: needs N >= 2, k >= 1");
  if (n == 2) return k % 2 ? 0 : k / 2 + 1;
  const i64 mu = index_gamma(n) / 2;  // index in PSL2
  const i64 cusps = mu / n;
  const i64 genus_minus_one = mu * (n - 6) / (12 * n);
  if (k == 1) return cusps / 2;
  return (k - 1) * genus_minus_one + k * cusps / 2;
}

namespace {

CycNumber coeff_at(const ZSeries& s, i64 n) {
  std::vector<mpq_class> c(s.phi);
  const mpz_class* r = s.row(n);
  for (std::size_t i = 0; i < s.phi; ++i)
    if (sgn(r[i]) != 0) {
      c[i] = mpq_class(r[i], s.den);
      c[i].canonicalize();
    }
  return CycNumber(s.modulus, std::move(c));
}

ZSeries constant_series(const CycNumber& c, i64 modulus, i64 width, i64 prec) {
  ZSeries s(modulus, width, prec);
  ZSeries one(modulus, width, prec);
  one.row(0)[0] = 1;
  return zs_axpy(s, c, one);
}

std::vector<EisIndex> generators(i64 n, int k) {
  std::set<EisIndex> out;
  for (i64 a = 0; a < n; ++a)
    for (i64 b = 0; b < n; ++b) {
      if (k == 2 && a == 0 && b == 0) continue;
      auto c = canonical(EisIndex(n, a, b, k, k == 2));
      if (c.sign != 0) out.insert(c.index);
    }
  return {out.begin(), out.end()};
}

std::vector<EisMonomial> basis_monomials(i64 n, int k, i64 prec, const ModP& mp) {
  if (k == 0) return {EisMonomial(n, {})};
  const int step = n == 2 ? 2 : 1;
  if (k < step || (n == 2 && k % 2)) return {};
  const auto prev = basis_monomials(n, k - step, prec, mp);
  const auto gens = generators(n, step);
  ModPEchelon ech(mp);
  std::set<EisMonomial> seen;
  std::vector<EisMonomial> out;
  for (const auto& base : prev)
    for (const auto& g : gens) {
      auto f = base.factors();
      f.push_back(g);
      EisMonomial m(n, std::move(f));
      if (!seen.insert(m).second) continue;
      if (ech.add(mp.of(*monomial_zseries(m, prec), prec))) out.push_back(m);
    }
  return out;
}

// Exact solve of sum_r c_r rows[r][cols[j]] = target[cols[j]] on a square
// subsystem chosen modulo p.
std::vector<CycNumber> solve_square(const std::vector<ZSeries>& rows, const ZSeries& target,
                                    const std::vector<std::size_t>& cols, i64 modulus) {
  const std::size_t r = rows.size();
  CycMatrix a(r, std::vector<CycNumber>(r));
  std::vector<CycNumber> rhs(r);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < r; ++i) a[j][i] = coeff_at(rows[i], static_cast<i64>(cols[j])).embed(modulus);
    rhs[j] = coeff_at(target, static_cast<i64>(cols[j])).embed(modulus);
  }
  auto sol = solve_linear<CycNumber>(std::move(a), rhs, CycNumber::zero(modulus));
  if (!sol) fail(ErrorCode::Internal, "selected subsystem is singular");
  return *sol;
}

ZSeries combine(const std::vector<ZSeries>& rows, const std::vector<CycNumber>& c, i64 modulus, i64 width, i64 prec) {
  ZSeries acc(modulus, width, prec);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (c[i].is_zero()) continue;
    acc = zs_axpy(acc, c[i], rows[i].truncate(prec));
    acc.normalize();
  }
  return acc;
}

// Width-1 expansion of E^(1)_{0,b}: sum over n | s of (zeta^(bn) - zeta^(-bn)).
ZSeries gamma1_generator(i64 n, i64 b, i64 prec) {
  std::vector<i64> g(static_cast<std::size_t>(prec * n), 0);
  for (i64 d = 1; d < prec; ++d)
    for (i64 s = d; s < prec; s += d) {
      g[s * n + mod(b * d, n)] += 1;
      g[s * n + mod(-b * d, n)] -= 1;
    }
  ZSeries out(n, 1, prec);
  const CycNumber a0 = eis_constant_term(EisIndex(n, 0, b, 1));
  mpz_class den = 1;
  for (const auto& c : a0.coords()) den = lcm(den, mpz_class(c.get_den()));
  out.den = den;
  for (std::size_t i = 0; i < out.phi; ++i) out.row(0)[i] = a0.coord(i).get_num() * (den / a0.coord(i).get_den());
  const auto& data = cyclo_data(n);
  std::vector<i64> acc(out.phi);
  for (i64 s = 1; s < prec; ++s) {
    std::fill(acc.begin(), acc.end(), 0);
    for (i64 j = 0; j < n; ++j)
      if (i64 v = g[s * n + j])
        for (std::size_t i = 0; i < out.phi; ++i) acc[i] += v * data.zeta_pow[j][i];
    for (std::size_t i = 0; i < out.phi; ++i)
      if (acc[i]) out.row(s)[i] = mpz_class(static_cast<long>(acc[i])) * den;
  }
  return out;
}

using Multiset = std::vector<i64>;

// b -> b d with E_{0,-b} = -E_{0,b}; returns sorted residues in (0, N/2).
std::pair<Multiset, int> scale_multiset(const Multiset& m, i64 d, i64 n) {
  Multiset out;
  int sign = 1;
  for (i64 b : m) {
    i64 x = mod(b * d, n);
    if (2 * x > n) {
      x = n - x;
      sign = -sign;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return {out, sign};
}

void multisets(i64 lo, i64 hi, int k, Multiset& cur, std::vector<Multiset>& out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (i64 b = lo; b <= hi; ++b) {
    cur.push_back(b);
    multisets(b, hi, k - 1, cur, out);
    cur.pop_back();
  }
}

std::optional<EisDecomposition> express_in_pool(const ModularFormInput& f) {
  const i64 n = f.level;
  const int k = f.weight;
  const i64 top = (n - 1) / 2;
  if (top < 1) return std::nullopt;
  const DirichletCharacter chi = f.chi();
  const bool project = f.group == GroupTag::Gamma0;
  const i64 modulus = lcm(lcm(n, f.field_modulus), chi.order());
  const i64 prec = f.expansion.prec();

  std::vector<ZSeries> gen(static_cast<std::size_t>(top + 1));
  for (i64 b = 1; b <= top; ++b) gen[static_cast<std::size_t>(b)] = gamma1_generator(n, b, prec);
  std::map<Multiset, ZSeries> products;
  auto product = [&](const Multiset& m) -> const ZSeries& {
    auto it = products.find(m);
    if (it != products.end()) return it->second;
    ZSeries acc = gen[static_cast<std::size_t>(m[0])];
    for (std::size_t i = 1; i < m.size(); ++i) acc = zs_mul(acc, gen[static_cast<std::size_t>(m[i])], prec);
    return products.emplace(m, std::move(acc)).first->second;
  };

  std::vector<Multiset> all;
  Multiset cur;
  multisets(1, top, k, cur, all);
  std::vector<std::map<Multiset, CycNumber>> pool;
  std::set<Multiset> visited;
  for (const auto& m : all) {
    if (visited.count(m)) continue;
    std::map<Multiset, CycNumber> expr;
    if (!project) {
      expr[m] = CycNumber::one(modulus);
    } else {
      for (i64 d : units(n)) {
        auto [md, sign] = scale_multiset(m, d, n);
        visited.insert(md);
        CycNumber c = chi.value_in(inv_mod(d, n), chi.order()).embed(modulus) * CycNumber::from_int(sign, modulus);
        auto [it, fresh] = expr.emplace(md, c);
        if (!fresh) it->second += c;
      }
      for (auto it = expr.begin(); it != expr.end();) it = it->second.is_zero() ? expr.erase(it) : std::next(it);
    }
    if (!expr.empty()) pool.push_back(std::move(expr));
  }

  const i64 cols = std::min(prec, 4 * sturm_bound_gamma0(n, k));
  ModP mp(modulus);
  ModPEchelon ech(mp);
  std::vector<ZSeries> rows;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    ZSeries s(modulus, 1, prec);
    for (const auto& [m, c] : pool[i]) s = zs_axpy(s, c, product(m));
    s.normalize();
    if (ech.add(mp.of(s, cols))) {
      rows.push_back(std::move(s));
      chosen.push_back(i);
    }
  }
  const ZSeries target = ZSeries::from_qexpansion(f.expansion).embed(modulus);
  std::vector<CycNumber> c =
      rows.empty() ? std::vector<CycNumber>{} : solve_square(rows, target, ech.pivots(), modulus);
  if (!zs_equal(combine(rows, c, modulus, 1, prec), target)) return std::nullopt;

  std::map<EisMonomial, CycNumber> acc;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (c[r].is_zero()) continue;
    for (const auto& [m, coeff] : pool[chosen[r]]) {
      std::vector<EisIndex> fs;
      for (i64 b : m) fs.emplace_back(n, 0, b, 1);
      EisMonomial mon(n, std::move(fs));
      CycNumber v = c[r] * coeff;
      auto [it, fresh] = acc.emplace(mon, v);
      if (!fresh) it->second += v;
    }
  }
  std::vector<EisTerm> terms;
  for (auto& [m, v] : acc) terms.push_back({m, v});
  return make_decomposition(n, k, terms);
}

// Horner evaluation grouped by the factor at position `depth`.
struct FlatTerm {
  std::vector<EisIndex> factors;
  CycNumber coeff;
};

ZSeries eval_rec(const std::vector<const FlatTerm*>& ts, std::size_t depth, i64 modulus, i64 n, i64 prec) {
  ZSeries acc(modulus, n, prec);
  CycNumber constant = CycNumber::zero(modulus);
  std::map<EisIndex, std::vector<const FlatTerm*>> groups;
  for (const FlatTerm* t : ts) {
    if (t->factors.size() == depth) constant += t->coeff;
    else groups[t->factors[depth]].push_back(t);
  }
  if (!constant.is_zero()) acc = zs_add(acc, constant_series(constant, modulus, n, prec));
  for (const auto& [idx, sub] : groups) {
    auto e = eis_zseries(idx, prec);
    const bool linear = std::all_of(sub.begin(), sub.end(), [&](const FlatTerm* t) { return t->factors.size() == depth + 1; });
    if (linear) {
      CycNumber c = CycNumber::zero(modulus);
      for (const FlatTerm* t : sub) c += t->coeff;
      acc = zs_axpy(acc, c, *e);
    } else {
      acc = zs_add(acc, zs_mul(*e, eval_rec(sub, depth + 1, modulus, n, prec), prec));
    }
    acc.normalize();
  }
  return acc;
}

struct DecompositionCache {
  std::shared_mutex mutex;
  std::map<std::string, EisDecomposition> entries;
};

DecompositionCache& decomposition_cache() {
  static DecompositionCache c;
  return c;
}

void check_sl2(const MatZ& g) {
  require(g.det() == 1, ErrorCode::InvalidArgument, "matrix " + g.to_string() + " is not in SL2(Z)");
}

}  // namespace

EisBasis build_basis(i64 n, int k, i64 prec) {
  require(n >= 2, ErrorCode::Unsupported, "build_basis: level must be at least 2");
  require(k >= 1, ErrorCode::InvalidArgument, "build_basis: weight must be positive");
  const i64 need = sturm_bound(n, k);
  require(prec >= need, ErrorCode::InvalidArgument,
          "build_basis: precision " + std::to_string(prec) + " is below the Sturm bound " + std::to_string(need));
  ModP mp(n);
  EisBasis b{n, k, prec, basis_monomials(n, k, prec, mp), {}};
  if (k >= 2) {
    const i64 dim = dim_modular_forms_gamma(n, k);
    if (static_cast<i64>(b.rank()) != dim)
      fail(ErrorCode::Internal, "build_basis: saturated rank " + std::to_string(b.rank()) +
                                    " differs from dim M_k(Gamma(N)) = " + std::to_string(dim));
  }
  for (const auto& m : b.monomials) b.expansions.push_back(monomial_expansion(m, prec));
  return b;
}

EisDecomposition express_in_basis(const QExpansion& f, const EisBasis& basis) {
  require(f.width() == basis.level, ErrorCode::InvalidArgument, "express_in_basis: expansion width must equal N");
  require(f.prec() >= basis.prec, ErrorCode::InvalidArgument, "express_in_basis: expansion shorter than the basis precision");
  const i64 modulus = lcm(basis.level, f.modulus());
  const i64 prec = f.prec();
  std::vector<ZSeries> rows;
  ModP mp(modulus);
  ModPEchelon ech(mp);
  for (const auto& m : basis.monomials) {
    rows.push_back(*monomial_zseries(m, prec));
    if (!ech.add(mp.of(rows.back(), basis.prec))) fail(ErrorCode::Internal, "express_in_basis: basis is dependent");
  }
  const ZSeries target = ZSeries::from_qexpansion(f).embed(modulus);
  std::vector<CycNumber> c =
      rows.empty() ? std::vector<CycNumber>{} : solve_square(rows, target, ech.pivots(), modulus);
  if (!zs_equal(combine(rows, c, modulus, basis.level, prec), target))
    fail(ErrorCode::NotModular, "input is not modular of the declared type: no Eisenstein combination matches its expansion");
  std::vector<EisTerm> terms;
  for (std::size_t i = 0; i < c.size(); ++i) terms.push_back({basis.monomials[i], c[i]});
  return make_decomposition(basis.level, basis.weight, terms);
}

EisDecomposition express_in_basis(const ModularFormInput& f) {
  f.validate();
  require(f.weight >= 2, ErrorCode::Unsupported,
          "weight-1 forms are not in the Eisenstein span (weight-1 cusp forms are missed); expansion unsupported");
  if (f.expansion.is_zero()) return EisDecomposition{f.level, f.weight, {}};
  if (f.group != GroupTag::Gamma) {
    if (auto d = express_in_pool(f)) return *d;
  }
  if (f.group == GroupTag::Gamma || f.level <= 8) {
    require(f.level >= 2, ErrorCode::Unsupported, "level 1 forms are outside the Eisenstein algebra of level N >= 2");
    const EisBasis basis = build_basis(f.level, f.weight, sturm_bound(f.level, f.weight));
    return express_in_basis(f.at_level_width(), basis);
  }
  fail(ErrorCode::NotModular,
       "input is not modular of the declared type, or lies outside the span of products of E^(1)_{0,b} at level " +
           std::to_string(f.level));
}

EisDecomposition make_decomposition(i64 n, int k, const std::vector<EisTerm>& terms) {
  std::map<EisMonomial, CycNumber> acc;
  for (const auto& t : terms) {
    require(t.monomial.level() == n, ErrorCode::InvalidArgument, "decomposition: monomial level mismatch");
    require(t.monomial.weight() == k, ErrorCode::InvalidArgument, "decomposition: monomial weight mismatch");
    auto c = canonical(t.monomial);
    if (c.sign == 0 || t.coeff.is_zero()) continue;
    CycNumber v = c.sign > 0 ? t.coeff : -t.coeff;
    auto [it, fresh] = acc.emplace(c.monomial, v);
    if (!fresh) it->second += v;
  }
  EisDecomposition d{n, k, {}};
  for (auto& [m, v] : acc)
    if (!v.is_zero()) d.terms.push_back({m, v});
  return d;
}

EisDecomposition slash_decomposition(const EisDecomposition& d, const MatZ& g) {
  check_sl2(g);
  const MatModN gm = MatModN::reduce(g, d.level);
  std::vector<EisTerm> terms;
  for (const auto& t : d.terms) terms.push_back({index_slash(t.monomial, gm), t.coeff});
  return make_decomposition(d.level, d.weight, terms);
}

EisDecomposition galois_decomposition(const EisDecomposition& d, i64 lambda) {
  require(gcd(lambda, d.modulus()) == 1, ErrorCode::Domain, "galois_decomposition: lambda is not a unit");
  const MatModN gm(d.level, 1, 0, 0, lambda);
  std::vector<EisTerm> terms;
  for (const auto& t : d.terms)
    terms.push_back({index_slash(t.monomial, gm), t.coeff.galois(mod(lambda, t.coeff.modulus()))});
  return make_decomposition(d.level, d.weight, terms);
}

QExpansion evaluate(const EisDecomposition& d, const MatZ& g, i64 prec) {
  require(prec >= 1, ErrorCode::InvalidArgument, "evaluate: precision must be positive");
  const EisDecomposition s = slash_decomposition(d, g);
  const i64 modulus = s.modulus();
  std::vector<FlatTerm> flat;
  for (const auto& t : s.terms) flat.push_back({t.monomial.factors(), t.coeff.embed(modulus)});
  std::vector<const FlatTerm*> ptrs;
  for (const auto& t : flat) ptrs.push_back(&t);
  return eval_rec(ptrs, 0, modulus, d.level, prec).to_qexpansion();
}

i64 default_precision(const ModularFormInput& f) {
  if (f.group == GroupTag::Gamma) return 4 * sturm_bound(f.level, f.weight);
  return f.level * 4 * sturm_bound_gamma0(f.level, f.weight);
}

const EisDecomposition& decomposition_of(const ModularFormInput& f) {
  auto& c = decomposition_cache();
  const std::string key = f.cache_key();
  {
    std::shared_lock lock(c.mutex);
    auto it = c.entries.find(key);
    if (it != c.entries.end()) return it->second;
  }
  EisDecomposition d = express_in_basis(f);
  std::unique_lock lock(c.mutex);
  return c.entries.emplace(key, std::move(d)).first->second;
}

void clear_decomposition_cache() {
  std::unique_lock lock(decomposition_cache().mutex);
  decomposition_cache().entries.clear();
}

QExpansion slash_expand(const ModularFormInput& f, const MatZ& g, i64 prec) {
  check_sl2(g);
  return evaluate(decomposition_of(f), g, prec);
}

bool galois_slash_check(const EisDecomposition& d, const MatZ& g, i64 lambda, i64 prec) {
  check_sl2(g);
  require(gcd(lambda, d.modulus()) == 1, ErrorCode::Domain, "galois_slash_check: lambda is not a unit");
  QExpansion lhs = evaluate(d, g, prec);
  lhs = lhs.apply_galois(mod(lambda, lhs.modulus()));
  const QExpansion rhs = evaluate(galois_decomposition(d, lambda), g_lambda(g, lambda, d.level), prec);
  return zs_equal(ZSeries::from_qexpansion(lhs), ZSeries::from_qexpansion(rhs));
}

bool galois_slash_check(const ModularFormInput& f, const MatZ& g, i64 lambda, i64 prec) {
  check_sl2(g);
  const EisDecomposition& d = decomposition_of(f);
  require(gcd(lambda, lcm(d.modulus(), lcm(f.field_modulus, f.chi().order()))) == 1, ErrorCode::Domain,
          "galois_slash_check: lambda is not a unit");
  QExpansion lhs = evaluate(d, g, prec);
  lhs = lhs.apply_galois(mod(lambda, lhs.modulus()));
  const ModularFormInput fs = f.galois_conjugate(lambda);
  const QExpansion rhs = slash_expand(fs, g_lambda(g, lambda, f.level), prec);
  return zs_equal(ZSeries::from_qexpansion(lhs), ZSeries::from_qexpansion(rhs));
}

}  // namespace cuspfield
