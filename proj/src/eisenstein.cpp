#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "cuspfield/error.hpp"
#include "eisenstein_internal.hpp"

namespace cuspfield {

EisIndex::EisIndex(i64 level_, i64 a_, i64 b_, int weight_, bool tilde_)
    : level(level_), weight(weight_), tilde(tilde_) {
  require(level_ >= 1, ErrorCode::InvalidArgument, "Eisenstein level must be positive");
  require(weight_ >= 1, ErrorCode::InvalidArgument, "Eisenstein weight must be positive");
  require(weight_ != 2 || tilde_, ErrorCode::InvalidArgument,
          "weight-2 Eisenstein series are only available in the holomorphic tilde form");
  require(!tilde_ || weight_ == 2, ErrorCode::InvalidArgument, "the tilde form exists only in weight 2");
  a = mod(a_, level_);
  b = mod(b_, level_);
}

std::string EisIndex::to_string() const {
  return std::string(tilde ? "Et" : "E") + std::to_string(weight) + "(" + std::to_string(a) + "," +
         std::to_string(b) + ")/" + std::to_string(level);
}

SignedIndex canonical(const EisIndex& idx) {
  const i64 n = idx.level;
  EisIndex neg = idx;
  neg.a = mod(-idx.a, n);
  neg.b = mod(-idx.b, n);
  if (idx.tilde && idx.a == 0 && idx.b == 0) return {idx, 0};
  const bool odd = idx.weight % 2 == 1;
  if (neg == idx) return {idx, odd ? 0 : 1};
  if (idx < neg) return {idx, 1};
  return {neg, odd ? -1 : 1};
}

EisIndex index_slash(const EisIndex& idx, const MatModN& g) {
  require(g.n == idx.level, ErrorCode::InvalidArgument, "index_slash: matrix modulus differs from the level");
  require(gcd(g.det(), g.n) == 1, ErrorCode::InvalidArgument, "index_slash: matrix is not invertible mod N");
  EisIndex out = idx;
  out.a = mod(idx.a * g.a + idx.b * g.c, idx.level);
  out.b = mod(idx.a * g.b + idx.b * g.d, idx.level);
  return out;
}

namespace {

std::vector<mpq_class> bernoulli_numbers(int n) {
  std::vector<mpq_class> b(n + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    mpq_class s = 0;
    mpz_class binom = 1;  // C(m+1, j)
    for (int j = 0; j < m; ++j) {
      s += binom * b[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    b[m] = -s / (m + 1);
  }
  return b;
}

// theta^(k-1) ((z+1)/(z-1)) = P(z) / (z-1)^k with theta = z d/dz.
std::vector<mpz_class> theta_numerator(int k) {
  std::vector<mpz_class> p{1, 1};
  for (int j = 0; j + 1 < k; ++j) {
    std::vector<mpz_class> next(p.size() + 1);
    // P' (z - 1) - (j+1) P
    std::vector<mpz_class> t(p.size());
    for (std::size_t i = 1; i < p.size(); ++i) {
      t[i] += p[i] * static_cast<long>(i);
      t[i - 1] -= p[i] * static_cast<long>(i);
    }
    for (std::size_t i = 0; i < p.size(); ++i) t[i] -= p[i] * (j + 1);
    for (std::size_t i = 0; i < t.size(); ++i) next[i + 1] = t[i];
    p = next;
  }
  return p;
}

}  // namespace

CycNumber eis_constant_term(const EisIndex& idx) {
  const i64 n = idx.level;
  const int k = idx.weight;
  if (idx.tilde) {
    if (idx.a != 0) return CycNumber::rational(mpq_class(1, 12), n);
    if (idx.b == 0) return CycNumber::zero(n);
    CycNumber z = CycNumber::zeta(n, idx.b);
    CycNumber zm1 = z - CycNumber::one(n);
    return z / (zm1 * zm1) + CycNumber::rational(mpq_class(1, 12), n);
  }
  if (idx.a != 0) {
    if (k == 1) {
      mpq_class v = mpq_class(1, 2) - mpq_class(idx.a, n);
      v.canonicalize();
      return CycNumber::rational(v, n);
    }
    return CycNumber::zero(n);
  }
  if (idx.b == 0) {
    if (k % 2 == 1) return CycNumber::zero(n);
    mpq_class v = -bernoulli_numbers(k)[k] / k;
    return CycNumber::rational(v, n);
  }
  CycNumber z = CycNumber::zeta(n, idx.b);
  auto p = theta_numerator(k);
  CycNumber num = CycNumber::zero(n);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (sgn(p[i]) != 0) num += CycNumber::zeta(n, idx.b * static_cast<i64>(i)) * mpq_class(p[i]);
  CycNumber zm1 = z - CycNumber::one(n), den = CycNumber::one(n);
  for (int i = 0; i < k; ++i) den *= zm1;
  return num / den * mpq_class(-1, 2);
}

namespace {

std::shared_ptr<ZSeries> compute_eis(const EisIndex& idx, i64 prec) {
  const i64 n = idx.level;
  const int k = idx.weight;
  // group-ring accumulation: g[t * n + j] is the coefficient of zeta_N^j at q^(t/N)
  std::vector<i64> g(static_cast<std::size_t>(prec * n), 0);
  const i64 neg_a = mod(-idx.a, n);
  const bool even = k % 2 == 0;
  for (i64 m = 1; m < prec; ++m) {
    const i64 r = m % n;
    const bool plus = r == idx.a, minus = r == neg_a;
    if (!plus && !minus) continue;
    for (i64 nn = 1; m * nn < prec; ++nn) {
      i64 pw = 1;
      for (int e = 1; e < k; ++e) pw *= nn;
      const i64 t = m * nn;
      if (plus) g[t * n + mod(idx.b * nn, n)] += pw;
      if (minus) g[t * n + mod(-idx.b * nn, n)] += even ? pw : -pw;
    }
  }
  if (idx.tilde)
    for (i64 m = 1; m * n < prec; ++m)
      for (i64 nn = 1; m * nn * n < prec; ++nn) g[m * nn * n * n] -= 2 * nn;

  auto out = std::make_shared<ZSeries>(n, n, prec);
  const CycNumber a0 = eis_constant_term(idx);
  mpz_class den = 1;
  for (const auto& c : a0.coords()) den = lcm(den, mpz_class(c.get_den()));
  out->den = den;
  const auto& data = cyclo_data(n);
  for (std::size_t i = 0; i < out->phi && prec > 0; ++i) out->row(0)[i] = a0.coord(i).get_num() * (den / a0.coord(i).get_den());
  std::vector<i64> acc(out->phi);
  for (i64 t = 1; t < prec; ++t) {
    std::fill(acc.begin(), acc.end(), 0);
    bool any = false;
    for (i64 j = 0; j < n; ++j) {
      const i64 v = g[t * n + j];
      if (v == 0) continue;
      any = true;
      const auto& zr = data.zeta_pow[j];
      for (std::size_t i = 0; i < out->phi; ++i) acc[i] += v * zr[i];
    }
    if (!any) continue;
    mpz_class* row = out->row(t);
    for (std::size_t i = 0; i < out->phi; ++i)
      if (acc[i] != 0) row[i] = mpz_class(static_cast<long>(acc[i])) * den;
  }
  return out;
}

struct Caches {
  std::shared_mutex mutex;
  std::map<EisIndex, std::shared_ptr<const ZSeries>> single;
  std::map<std::pair<EisMonomial, i64>, std::shared_ptr<const ZSeries>> products;
};

Caches& caches() {
  static Caches c;
  return c;
}

constexpr std::size_t kCacheLimit = 4096;

}  // namespace

std::shared_ptr<const ZSeries> eis_zseries(const EisIndex& idx, i64 prec) {
  auto& c = caches();
  {
    std::shared_lock lock(c.mutex);
    auto it = c.single.find(idx);
    if (it != c.single.end() && it->second->prec >= prec) {
      if (it->second->prec == prec) return it->second;
      return std::make_shared<const ZSeries>(it->second->truncate(prec));
    }
  }
  std::shared_ptr<const ZSeries> s = compute_eis(idx, prec);
  std::unique_lock lock(c.mutex);
  if (c.single.size() > kCacheLimit) c.single.clear();
  auto& slot = c.single[idx];
  if (!slot || slot->prec < prec) slot = s;
  return s;
}

QExpansion eis_expansion(const EisIndex& idx, i64 prec) {
  require(prec >= 1, ErrorCode::InvalidArgument, "eis_expansion: precision must be positive");
  return eis_zseries(idx, prec)->to_qexpansion();
}

EisMonomial::EisMonomial(i64 level, std::vector<EisIndex> factors) : level_(level), factors_(std::move(factors)) {
  for (const auto& f : factors_)
    require(f.level == level, ErrorCode::InvalidArgument, "monomial factor has a different level");
  std::sort(factors_.begin(), factors_.end());
}

int EisMonomial::weight() const {
  int k = 0;
  for (const auto& f : factors_) k += f.weight;
  return k;
}

std::string EisMonomial::to_string() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? "*" : "") + factors_[i].to_string();
  return out;
}

SignedMonomial canonical(const EisMonomial& m) {
  int sign = 1;
  std::vector<EisIndex> f;
  for (const auto& x : m.factors()) {
    auto c = canonical(x);
    sign *= c.sign;
    f.push_back(c.index);
  }
  return {EisMonomial(m.level(), std::move(f)), sign};
}

EisMonomial index_slash(const EisMonomial& m, const MatModN& g) {
  std::vector<EisIndex> f;
  for (const auto& x : m.factors()) f.push_back(index_slash(x, g));
  return EisMonomial(m.level(), std::move(f));
}

std::shared_ptr<const ZSeries> monomial_zseries(const EisMonomial& m, i64 prec) {
  auto& c = caches();
  const auto key = std::make_pair(m, prec);
  {
    std::shared_lock lock(c.mutex);
    auto it = c.products.find(key);
    if (it != c.products.end()) return it->second;
  }
  std::shared_ptr<const ZSeries> result;
  if (m.factors().empty()) {
    auto one = std::make_shared<ZSeries>(1, m.level(), prec);
    one->row(0)[0] = 1;
    result = one;
  } else {
    ZSeries acc = *eis_zseries(m.factors()[0], prec);
    for (std::size_t i = 1; i < m.factors().size(); ++i) acc = zs_mul(acc, *eis_zseries(m.factors()[i], prec), prec);
    result = std::make_shared<const ZSeries>(std::move(acc));
  }
  std::unique_lock lock(c.mutex);
  if (c.products.size() > kCacheLimit) c.products.clear();
  c.products[key] = result;
  return result;
}

QExpansion monomial_expansion(const EisMonomial& m, i64 prec) {
  require(prec >= 1, ErrorCode::InvalidArgument, "monomial_expansion: precision must be positive");
  return monomial_zseries(m, prec)->to_qexpansion();
}

std::size_t monomial_cache_size() {
  std::shared_lock lock(caches().mutex);
  return caches().products.size();
}

void clear_monomial_cache() {
  std::unique_lock lock(caches().mutex);
  caches().products.clear();
  caches().single.clear();
}

}  // namespace cuspfield
