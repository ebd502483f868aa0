#pragma once

// Reduction of cyclotomic data modulo a prime p = 1 (mod M), used to pick
// independent rows and columns cheaply before exact solving. Independence
// modulo p implies independence over Q(zeta_M).

#include <cstdint>
#include <vector>

#include "cuspfield/arith.hpp"
#include "cuspfield/cyclotomic.hpp"
#include "cuspfield/error.hpp"
#include "zseries.hpp"

namespace cuspfield {

class ModP {
 public:
  using u64 = std::uint64_t;

  explicit ModP(i64 modulus, i64 skip = 0) : modulus_(modulus) {
    i64 k = ((i64{1} << 30) / modulus) + 1 + skip * 7919;
    while (!is_prime(k * modulus + 1)) ++k;
    p_ = static_cast<u64>(k * modulus + 1);
    // element of exact order M
    for (u64 g = 2;; ++g) {
      u64 w = pow(g, (p_ - 1) / static_cast<u64>(modulus));
      bool ok = true;
      for (i64 q : prime_divisors(modulus))
        if (pow(w, static_cast<u64>(modulus / q)) == 1) ok = false;
      if (modulus == 1 || ok) {
        zeta_ = modulus == 1 ? 1 : w;
        break;
      }
    }
  }

  u64 prime() const { return p_; }
  u64 mul(u64 a, u64 b) const { return a * b % p_; }
  u64 add(u64 a, u64 b) const { return (a + b) % p_; }
  u64 sub(u64 a, u64 b) const { return (a + p_ - b) % p_; }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    a %= p_;
    while (e) {
      if (e & 1) r = r * a % p_;
      a = a * a % p_;
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p_ - 2); }

  u64 of(const mpz_class& z) const {
    mpz_class r = z % static_cast<unsigned long>(p_);
    if (r < 0) r += static_cast<unsigned long>(p_);
    return r.get_ui();
  }
  u64 of(const mpq_class& q) const {
    u64 d = of(mpz_class(q.get_den()));
    if (d == 0) fail(ErrorCode::Internal, "modular reduction hit a denominator divisible by p");
    return mul(of(mpz_class(q.get_num())), inv(d));
  }
  /// Image of zeta_m^i, m | M.
  u64 zeta(i64 m, i64 i) const {
    return pow(zeta_, static_cast<u64>(mod(i * (modulus_ / m), modulus_)));
  }
  u64 of(const CycNumber& x) const {
    u64 acc = 0;
    for (std::size_t i = 0; i < x.coords().size(); ++i)
      if (sgn(x.coord(i)) != 0) acc = add(acc, mul(of(x.coord(i)), zeta(x.modulus(), static_cast<i64>(i))));
    return acc;
  }
  /// Coefficients 0..count-1 of a series, its modulus dividing M.
  std::vector<u64> of(const ZSeries& s, i64 count) const {
    std::vector<u64> pw(s.phi);
    for (std::size_t i = 0; i < s.phi; ++i) pw[i] = zeta(s.modulus, static_cast<i64>(i));
    u64 dinv = of(mpz_class(s.den));
    if (dinv == 0) fail(ErrorCode::Internal, "modular reduction hit a denominator divisible by p");
    dinv = inv(dinv);
    std::vector<u64> out(static_cast<std::size_t>(count), 0);
    for (i64 n = 0; n < count && n < s.prec; ++n) {
      const mpz_class* r = s.row(n);
      u64 acc = 0;
      for (std::size_t i = 0; i < s.phi; ++i)
        if (sgn(r[i]) != 0) acc = add(acc, mul(of(r[i]), pw[i]));
      out[static_cast<std::size_t>(n)] = mul(acc, dinv);
    }
    return out;
  }

 private:
  i64 modulus_;
  u64 p_ = 0;
  u64 zeta_ = 1;
};

/// Incremental row echelon form modulo p.
class ModPEchelon {
 public:
  using u64 = ModP::u64;
  explicit ModPEchelon(const ModP& f) : f_(f) {}

  /// True (and the row is kept) when v is independent of the accepted rows.
  bool add(std::vector<u64> v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t p = pivots_[i];
      if (v[p] == 0) continue;
      const u64 c = v[p];
      for (std::size_t j = p; j < v.size(); ++j)
        if (rows_[i][j]) v[j] = f_.sub(v[j], f_.mul(c, rows_[i][j]));
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) return false;
    const u64 inv = f_.inv(v[p]);
    for (std::size_t j = p; j < v.size(); ++j) v[j] = f_.mul(v[j], inv);
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  const ModP& f_;
  std::vector<std::vector<u64>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace cuspfield
