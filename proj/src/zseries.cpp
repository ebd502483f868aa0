#include "zseries.hpp"

#include <algorithm>
#include <cmath>

#include "cuspfield/error.hpp"

namespace cuspfield {

namespace {

using i128 = __int128;

mpz_class from_i128(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

bool fits_i64(const mpz_class& z) {
  return mpz_sizeinbase(z.get_mpz_t(), 2) <= 62;
}

// Coordinates of a cyclotomic scalar as integers over a common denominator.
void integral_coords(const CycNumber& c, std::vector<mpz_class>& out, mpz_class& den) {
  den = 1;
  for (const auto& q : c.coords()) den = lcm(den, mpz_class(q.get_den()));
  out.clear();
  for (const auto& q : c.coords()) out.push_back(mpz_class(q.get_num() * (den / q.get_den())));
}

// raw has 2 phi - 1 slots; fold the high part back through zeta_pow.
template <class T>
void fold(const CycloData& d, std::vector<T>& raw, std::size_t phi) {
  for (std::size_t j = raw.size(); j-- > phi;) {
    if (raw[j] == 0) continue;
    const auto& row = d.zeta_pow[static_cast<i64>(j) % d.modulus];
    for (std::size_t i = 0; i < phi; ++i)
      if (row[i] != 0) raw[i] += raw[j] * static_cast<long>(row[i]);
    raw[j] = 0;
  }
}

}  // namespace

ZSeries::ZSeries(i64 m, i64 w, i64 p) : modulus(m), width(w), prec(p) {
  phi = static_cast<std::size_t>(cyclo_data(m).degree);
  num.assign(static_cast<std::size_t>(p) * phi, mpz_class(0));
}

bool ZSeries::row_zero(i64 n) const {
  const mpz_class* r = row(n);
  for (std::size_t i = 0; i < phi; ++i)
    if (sgn(r[i]) != 0) return false;
  return true;
}

bool ZSeries::is_zero() const {
  return std::all_of(num.begin(), num.end(), [](const mpz_class& z) { return sgn(z) == 0; });
}

ZSeries ZSeries::from_qexpansion(const QExpansion& f) {
  ZSeries z(f.modulus(), f.width(), f.prec());
  mpz_class den = 1;
  for (const auto& c : f.coeffs())
    for (const auto& q : c.coords())
      if (q.get_den() != 1) den = lcm(den, mpz_class(q.get_den()));
  z.den = den;
  for (i64 n = 0; n < f.prec(); ++n) {
    auto coords = f.coeff(n).coords();
    mpz_class* r = z.row(n);
    for (std::size_t i = 0; i < z.phi; ++i)
      if (sgn(coords[i]) != 0) r[i] = coords[i].get_num() * (den / coords[i].get_den());
  }
  return z;
}

QExpansion ZSeries::to_qexpansion() const {
  std::vector<CycNumber> coeffs;
  coeffs.reserve(static_cast<std::size_t>(prec));
  for (i64 n = 0; n < prec; ++n) {
    std::vector<mpq_class> c(phi);
    const mpz_class* r = row(n);
    for (std::size_t i = 0; i < phi; ++i) {
      if (sgn(r[i]) == 0) continue;
      c[i] = mpq_class(r[i], den);
      c[i].canonicalize();
    }
    coeffs.emplace_back(modulus, std::move(c));
  }
  return QExpansion(width, std::move(coeffs), modulus);
}

void ZSeries::normalize() {
  mpz_class g = den;
  for (const auto& z : num) {
    if (g == 1) break;
    if (sgn(z) != 0) g = gcd(g, z);
  }
  if (sgn(den) < 0) g = -g;
  if (g == 1) return;
  den /= g;
  for (auto& z : num)
    if (sgn(z) != 0) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
}

ZSeries ZSeries::embed(i64 target) const {
  if (target == modulus) return *this;
  require(target % modulus == 0, ErrorCode::InvalidArgument, "series embed: modulus must divide target");
  ZSeries out(target, width, prec);
  out.den = den;
  const auto& d = cyclo_data(target);
  const i64 step = target / modulus;
  for (i64 n = 0; n < prec; ++n) {
    const mpz_class* r = row(n);
    mpz_class* o = out.row(n);
    for (std::size_t i = 0; i < phi; ++i) {
      if (sgn(r[i]) == 0) continue;
      const auto& zr = d.zeta_pow[(static_cast<i64>(i) * step) % target];
      for (std::size_t j = 0; j < out.phi; ++j)
        if (zr[j] != 0) o[j] += r[i] * static_cast<long>(zr[j]);
    }
  }
  return out;
}

ZSeries ZSeries::rescale_width(i64 new_width) const {
  require(new_width % width == 0, ErrorCode::InvalidArgument, "series rescale: width must divide");
  const i64 r = new_width / width;
  ZSeries out(modulus, new_width, prec * r);
  out.den = den;
  for (i64 n = 0; n < prec; ++n)
    for (std::size_t i = 0; i < phi; ++i) out.row(n * r)[i] = row(n)[i];
  return out;
}

ZSeries ZSeries::truncate(i64 new_prec) const {
  ZSeries out = *this;
  if (new_prec < prec) {
    out.prec = new_prec;
    out.num.resize(static_cast<std::size_t>(new_prec) * phi);
  }
  return out;
}

ZSeries ZSeries::galois(i64 lambda) const {
  require(gcd(lambda, modulus) == 1, ErrorCode::Domain, "series galois: exponent not coprime to modulus");
  if (mod(lambda, modulus) == 1 % modulus) return *this;
  ZSeries out(modulus, width, prec);
  out.den = den;
  const auto& d = cyclo_data(modulus);
  for (i64 n = 0; n < prec; ++n) {
    const mpz_class* r = row(n);
    mpz_class* o = out.row(n);
    for (std::size_t i = 0; i < phi; ++i) {
      if (sgn(r[i]) == 0) continue;
      const auto& zr = d.zeta_pow[mod(static_cast<i64>(i) * lambda, modulus)];
      for (std::size_t j = 0; j < phi; ++j)
        if (zr[j] != 0) o[j] += r[i] * static_cast<long>(zr[j]);
    }
  }
  return out;
}

ZSeries zs_add(const ZSeries& a0, const ZSeries& b0) {
  require(a0.width == b0.width, ErrorCode::InvalidArgument, "series width mismatch");
  const i64 m = lcm(a0.modulus, b0.modulus);
  const ZSeries a = a0.embed(m), b = b0.embed(m);
  const i64 p = std::min(a.prec, b.prec);
  ZSeries out(m, a.width, p);
  out.den = lcm(a.den, b.den);
  const mpz_class fa = out.den / a.den, fb = out.den / b.den;
  const std::size_t count = static_cast<std::size_t>(p) * out.phi;
  for (std::size_t i = 0; i < count; ++i) out.num[i] = a.num[i] * fa + b.num[i] * fb;
  return out;
}

ZSeries zs_scale(const ZSeries& a0, const CycNumber& c0) {
  const i64 m = lcm(a0.modulus, c0.modulus());
  const ZSeries a = a0.embed(m);
  const CycNumber c = c0.embed(m);
  std::vector<mpz_class> cn;
  mpz_class cden;
  integral_coords(c, cn, cden);
  ZSeries out(m, a.width, a.prec);
  out.den = a.den * cden;
  const auto& d = cyclo_data(m);
  const std::size_t phi = out.phi;
  std::vector<std::pair<std::size_t, mpz_class>> cnz;
  for (std::size_t i = 0; i < phi; ++i)
    if (sgn(cn[i]) != 0) cnz.emplace_back(i, cn[i]);
  std::vector<mpz_class> raw(2 * phi - 1);
  for (i64 n = 0; n < a.prec; ++n) {
    if (a.row_zero(n)) continue;
    for (auto& x : raw) x = 0;
    const mpz_class* r = a.row(n);
    for (std::size_t i = 0; i < phi; ++i) {
      if (sgn(r[i]) == 0) continue;
      for (const auto& [j, v] : cnz) raw[i + j] += r[i] * v;
    }
    fold(d, raw, phi);
    for (std::size_t i = 0; i < phi; ++i) out.row(n)[i] = raw[i];
  }
  return out;
}

ZSeries zs_axpy(const ZSeries& a, const CycNumber& c, const ZSeries& b) {
  if (c.is_zero()) return a;
  return zs_add(a, zs_scale(b, c));
}

ZSeries zs_mul(const ZSeries& a0, const ZSeries& b0, i64 prec) {
  require(a0.width == b0.width, ErrorCode::InvalidArgument, "series width mismatch");
  const i64 m = lcm(a0.modulus, b0.modulus);
  const ZSeries a = a0.embed(m), b = b0.embed(m);
  prec = std::min({prec, a.prec, b.prec});
  ZSeries out(m, a.width, prec);
  out.den = a.den * b.den;
  const std::size_t phi = out.phi;
  const std::size_t slots = 2 * phi - 1;
  const auto& d = cyclo_data(m);

  struct Entry {
    std::size_t i;
    const mpz_class* v;
  };
  auto sparse_rows = [&](const ZSeries& s, std::vector<i64>& idx, std::vector<std::vector<Entry>>& rows,
                         bool& small, double& maxlog) {
    small = true;
    maxlog = 0;
    for (i64 n = 0; n < prec; ++n) {
      std::vector<Entry> e;
      const mpz_class* r = s.row(n);
      for (std::size_t i = 0; i < phi; ++i) {
        if (sgn(r[i]) == 0) continue;
        e.push_back({i, &r[i]});
        if (!fits_i64(r[i])) small = false;
        maxlog = std::max(maxlog, static_cast<double>(mpz_sizeinbase(r[i].get_mpz_t(), 2)));
      }
      if (!e.empty()) {
        idx.push_back(n);
        rows.push_back(std::move(e));
      }
    }
  };
  std::vector<i64> ia, ib;
  std::vector<std::vector<Entry>> ra, rb;
  bool sa = false, sb = false;
  double la = 0, lb = 0;
  sparse_rows(a, ia, ra, sa, la);
  sparse_rows(b, ib, rb, sb, lb);
  if (ia.empty() || ib.empty()) return out;

  i64 max_zeta = 1;
  for (const auto& row : d.zeta_pow)
    for (i64 v : row) max_zeta = std::max(max_zeta, v < 0 ? -v : v);
  const double terms = static_cast<double>(std::min(ia.size(), ib.size())) * static_cast<double>(phi);
  const double bound_log = la + lb + std::log2(terms + 1) + std::log2(1.0 + static_cast<double>(phi * max_zeta)) + 1;

  if (sa && sb && bound_log < 125) {
    std::vector<std::vector<std::pair<std::size_t, i64>>> fa(ra.size()), fb(rb.size());
    for (std::size_t x = 0; x < ra.size(); ++x)
      for (const auto& e : ra[x]) fa[x].emplace_back(e.i, e.v->get_si());
    for (std::size_t x = 0; x < rb.size(); ++x)
      for (const auto& e : rb[x]) fb[x].emplace_back(e.i, e.v->get_si());
    std::vector<i128> acc(static_cast<std::size_t>(prec) * slots, 0);
    for (std::size_t x = 0; x < ia.size(); ++x) {
      const i64 ta = ia[x];
      for (std::size_t y = 0; y < ib.size(); ++y) {
        const i64 t = ta + ib[y];
        if (t >= prec) break;
        i128* base = acc.data() + static_cast<std::size_t>(t) * slots;
        for (const auto& [i, va] : fa[x])
          for (const auto& [j, vb] : fb[y]) base[i + j] += static_cast<i128>(va) * vb;
      }
    }
    std::vector<i128> raw(slots);
    for (i64 t = 0; t < prec; ++t) {
      std::copy(acc.begin() + t * slots, acc.begin() + (t + 1) * slots, raw.begin());
      fold(d, raw, phi);
      mpz_class* o = out.row(t);
      for (std::size_t i = 0; i < phi; ++i)
        if (raw[i] != 0) o[i] = from_i128(raw[i]);
    }
    return out;
  }

  std::vector<mpz_class> acc(static_cast<std::size_t>(prec) * slots);
  for (std::size_t x = 0; x < ia.size(); ++x) {
    const i64 ta = ia[x];
    for (std::size_t y = 0; y < ib.size(); ++y) {
      const i64 t = ta + ib[y];
      if (t >= prec) break;
      mpz_class* base = acc.data() + static_cast<std::size_t>(t) * slots;
      for (const auto& ea : ra[x])
        for (const auto& eb : rb[y])
          mpz_addmul(base[ea.i + eb.i].get_mpz_t(), ea.v->get_mpz_t(), eb.v->get_mpz_t());
    }
  }
  std::vector<mpz_class> raw(slots);
  for (i64 t = 0; t < prec; ++t) {
    for (std::size_t s = 0; s < slots; ++s) raw[s] = acc[t * slots + s];
    fold(d, raw, phi);
    for (std::size_t i = 0; i < phi; ++i) out.row(t)[i] = raw[i];
  }
  return out;
}

bool zs_equal(const ZSeries& a0, const ZSeries& b0) {
  if (a0.width != b0.width || a0.prec != b0.prec) return false;
  const i64 m = lcm(a0.modulus, b0.modulus);
  const ZSeries a = a0.embed(m), b = b0.embed(m);
  for (std::size_t i = 0; i < a.num.size(); ++i)
    if (a.num[i] * b.den != b.num[i] * a.den) return false;
  return true;
}

}  // namespace cuspfield
