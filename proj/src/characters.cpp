#include "cuspfield/characters.hpp"

#include "cuspfield/error.hpp"

namespace cuspfield {

namespace {

i64 crt_lift(i64 residue, i64 pe, i64 n) {
  // x = residue mod pe, x = 1 mod n / pe
  const i64 rest = n / pe;
  if (rest == 1) return mod(residue, n);
  __int128 x = static_cast<__int128>(mod(residue, pe)) * rest % n * inv_mod(rest, pe) % n +
               static_cast<__int128>(pe) * inv_mod(pe, rest) % n;
  return mod(static_cast<i64>(x % n), n);
}

i64 smallest_primitive_root(i64 p, i64 pe) {
  const i64 phi = euler_phi(pe);
  const auto qs = prime_divisors(phi);
  for (i64 g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (i64 q : qs)
      if (pow_mod(g, phi / q, pe) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  fail(ErrorCode::Internal, "no primitive root found");
}

}  // namespace

std::vector<UnitGenerator> unit_generators(i64 n) {
  require(n >= 1, ErrorCode::InvalidArgument, "character modulus must be positive");
  std::vector<UnitGenerator> out;
  for (auto [p, e] : factor(n)) {
    i64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;
      out.push_back({crt_lift(-1, pe, n), 2});
      if (e >= 3) out.push_back({crt_lift(5, pe, n), pe / 4});
    } else {
      out.push_back({crt_lift(smallest_primitive_root(p, pe), pe, n), euler_phi(pe)});
    }
  }
  return out;
}

mpq_class DirichletCharacter::frac(const mpq_class& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  mpq_class r = x - mpq_class(fl);
  r.canonicalize();
  return r;
}

DirichletCharacter::DirichletCharacter(i64 n, std::vector<mpq_class> table)
    : modulus_(n), table_(std::move(table)) {
  mpz_class ord = 1;
  for (const auto& r : table_)
    if (sgn(r) >= 0) ord = lcm(ord, mpz_class(r.get_den()));
  order_ = ord.get_si();
  for (const auto& g : unit_generators(n)) gen_exps_.push_back(table_[g.value]);
}

DirichletCharacter DirichletCharacter::trivial(i64 n) {
  return from_generator_exponents(n, std::vector<mpq_class>(unit_generators(n).size()));
}

DirichletCharacter DirichletCharacter::from_generator_exponents(i64 n, const std::vector<mpq_class>& r) {
  auto gens = unit_generators(n);
  require(r.size() == gens.size(), ErrorCode::InvalidArgument,
          "character modulo " + std::to_string(n) + " needs " + std::to_string(gens.size()) +
              " generator values, got " + std::to_string(r.size()));
  std::vector<mpq_class> exps;
  for (std::size_t i = 0; i < r.size(); ++i) {
    mpq_class x = frac(r[i]);
    mpq_class t = x * gens[i].order;
    t.canonicalize();
    require(t.get_den() == 1, ErrorCode::InvalidArgument,
            "character value on generator " + std::to_string(gens[i].value) + " is not a root of unity of order dividing " +
                std::to_string(gens[i].order));
    exps.push_back(x);
  }
  std::vector<mpq_class> table(static_cast<std::size_t>(n), mpq_class(-1));
  // enumerate products of generator powers
  std::vector<i64> e(gens.size(), 0);
  std::size_t count = 0;
  while (true) {
    i64 x = 1 % n;
    mpq_class s = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      x = static_cast<i64>(static_cast<__int128>(x) * pow_mod(gens[i].value, e[i], n) % n);
      s += exps[i] * e[i];
    }
    if (sgn(table[x]) >= 0) fail(ErrorCode::Internal, "unit generators are not independent");
    table[x] = frac(s);
    ++count;
    std::size_t i = 0;
    while (i < gens.size() && ++e[i] == gens[i].order) e[i++] = 0;
    if (i == gens.size()) break;
  }
  if (static_cast<i64>(count) != euler_phi(n)) fail(ErrorCode::Internal, "unit generators do not span");
  return DirichletCharacter(n, std::move(table));
}

std::optional<mpq_class> DirichletCharacter::exponent(i64 a) const {
  const mpq_class& r = table_[mod(a, modulus_)];
  if (sgn(r) < 0) return std::nullopt;
  return r;
}

CycNumber DirichletCharacter::value(i64 a) const { return value_in(a, order_); }

CycNumber DirichletCharacter::value_in(i64 a, i64 m) const {
  require(m % order_ == 0, ErrorCode::InvalidArgument, "character order does not divide the target modulus");
  auto r = exponent(a);
  if (!r) return CycNumber::zero(m);
  mpq_class t = *r * m;
  return CycNumber::zeta(m, mpz_class(t.get_num() / t.get_den()).get_si());
}

int DirichletCharacter::parity() const {
  if (modulus_ <= 2) return 1;
  return sgn(*exponent(-1)) == 0 ? 1 : -1;
}

i64 DirichletCharacter::conductor() const {
  const auto us = units(modulus_);
  for (i64 d : divisors(modulus_)) {
    bool ok = true;
    for (i64 x : us)
      if (mod(x, d) == 1 % d && sgn(table_[x]) != 0) {
        ok = false;
        break;
      }
    if (ok) return d;
  }
  return modulus_;
}

DirichletCharacter DirichletCharacter::primitive() const {
  const i64 d = conductor();
  if (d == modulus_) return *this;
  std::vector<mpq_class> table(static_cast<std::size_t>(d), mpq_class(-1));
  for (i64 u : units(d)) {
    i64 x = u;
    while (gcd(x, modulus_) != 1) x += d;
    table[u % d] = table_[x % modulus_];
  }
  if (d == 1) table[0] = 0;
  return DirichletCharacter(d, std::move(table));
}

DirichletCharacter DirichletCharacter::extend(i64 multiple) const {
  require(multiple % modulus_ == 0, ErrorCode::InvalidArgument, "extend: target must be a multiple of the modulus");
  std::vector<mpq_class> table(static_cast<std::size_t>(multiple), mpq_class(-1));
  for (i64 x : units(multiple)) table[x] = table_[x % modulus_];
  return DirichletCharacter(multiple, std::move(table));
}

DirichletCharacter DirichletCharacter::conj() const { return power(-1); }

DirichletCharacter DirichletCharacter::power(i64 lambda) const {
  std::vector<mpq_class> table = table_;
  for (auto& r : table)
    if (sgn(r) >= 0) r = frac(r * lambda);
  return DirichletCharacter(modulus_, std::move(table));
}

std::string DirichletCharacter::to_string() const {
  std::string out = std::to_string(modulus_) + ":";
  auto gens = unit_generators(modulus_);
  for (std::size_t i = 0; i < gens.size(); ++i)
    out += (i ? ", " : " ") + std::to_string(gens[i].value) + "->" + gen_exps_[i].get_str();
  return out;
}

std::pair<DirichletCharacter, DirichletCharacter> q_part(const DirichletCharacter& chi, i64 q) {
  const i64 n = chi.modulus();
  require(q > 0 && n % q == 0 && gcd(q, n / q) == 1, ErrorCode::InvalidArgument,
          "q_part: Q must be a maximal divisor of the modulus");
  auto part = [&](i64 m) {
    std::vector<mpq_class> gexp;
    for (const auto& g : unit_generators(m)) gexp.push_back(*chi.exponent(crt_lift(g.value, m, n)));
    return DirichletCharacter::from_generator_exponents(m, gexp);
  };
  return {part(q), part(n / q)};
}

CycNumber gauss_sum_raw(const DirichletCharacter& chi) {
  const i64 m = chi.modulus();
  const i64 big = lcm(m, chi.order());
  CycNumber s = CycNumber::zero(big);
  for (i64 u : units(m)) s += chi.value_in(u, big) * CycNumber::zeta(big, (big / m) * u);
  return s;
}

CycNumber gauss_sum(const DirichletCharacter& chi) {
  require(chi.conductor() == chi.modulus(), ErrorCode::InvalidArgument,
          "gauss_sum: character modulo " + std::to_string(chi.modulus()) + " is not primitive");
  return gauss_sum_raw(chi);
}

AbelianFieldDescriptor field_of_character(const DirichletCharacter& chi) {
  return AbelianFieldDescriptor::cyclotomic(chi.order()).reduced();
}

}  // namespace cuspfield
