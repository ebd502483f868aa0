#include "cuspfield/arith.hpp"

#include <algorithm>
#include <cstdlib>

#include "cuspfield/error.hpp"

namespace cuspfield {

i64 gcd(i64 a, i64 b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return std::llabs(a / gcd(a, b) * b);
}

Egcd egcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
    std::tie(old_t, t) = std::pair{t, old_t - q * t};
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

i64 mod(i64 a, i64 n) {
  require(n > 0, ErrorCode::InvalidArgument, "mod: modulus must be positive");
  i64 r = a % n;
  return r < 0 ? r + n : r;
}

i64 inv_mod(i64 a, i64 n) {
  if (n == 1) return 0;
  auto e = egcd(mod(a, n), n);
  require(e.g == 1, ErrorCode::Domain,
          "inv_mod: " + std::to_string(a) + " is not a unit modulo " + std::to_string(n));
  return mod(e.x, n);
}

i64 pow_mod(i64 a, i64 e, i64 n) {
  if (n == 1) return 0;
  if (e < 0) {
    a = inv_mod(a, n);
    e = -e;
  }
  __int128 result = 1, base = mod(a, n);
  while (e > 0) {
    if (e & 1) result = result * base % n;
    base = base * base % n;
    e >>= 1;
  }
  return static_cast<i64>(result);
}

std::vector<std::pair<i64, int>> factor(i64 n) {
  n = std::llabs(n);
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> out;
  for (auto [p, e] : factor(n)) out.push_back(p);
  return out;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (auto [p, e] : factor(n)) {
    std::size_t count = out.size();
    i64 pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < count; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int valuation(i64 n, i64 p) {
  if (n == 0) return 1 << 20;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factor(n)) r = r / p * (p - 1);
  return r;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<i64> units(i64 n) {
  if (n == 1) return {0};
  std::vector<i64> out;
  for (i64 a = 1; a < n; ++a)
    if (gcd(a, n) == 1) out.push_back(a);
  return out;
}

i64 part_supported_on(i64 n, i64 d) {
  i64 r = 1;
  for (auto [p, e] : factor(n)) {
    if (d % p != 0) continue;
    for (int j = 0; j < e; ++j) r *= p;
  }
  return r;
}

i64 index_gamma(i64 n) {
  i64 r = n * n * n;
  for (i64 p : prime_divisors(n)) r = r / (p * p) * (p * p - 1);
  return r;
}

i64 index_gamma0(i64 n) {
  i64 r = n;
  for (i64 p : prime_divisors(n)) r = r / p * (p + 1);
  return r;
}

SquareSplit split_square(i64 n) {
  SquareSplit s{1, 1};
  for (auto [p, e] : factor(n)) {
    for (int j = 0; j < e / 2; ++j) s.square_root *= p;
    if (e % 2) s.squarefree *= p;
  }
  return s;
}

}  // namespace cuspfield
