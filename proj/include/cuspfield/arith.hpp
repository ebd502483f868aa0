#pragma once

// Small-integer number theory helpers shared by every module.

#include <cstdint>
#include <utility>
#include <vector>

namespace cuspfield {

using i64 = std::int64_t;

/// Nonnegative gcd with the convention gcd(0, n) = |n|.
i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
struct Egcd {
  i64 g, x, y;
};
Egcd egcd(i64 a, i64 b);

/// Least nonnegative residue.
i64 mod(i64 a, i64 n);
/// Inverse of a modulo n; throws Domain if gcd(a, n) != 1.
i64 inv_mod(i64 a, i64 n);
i64 pow_mod(i64 a, i64 e, i64 n);

/// Prime factorization as (p, e) pairs in increasing p.
std::vector<std::pair<i64, int>> factor(i64 n);
std::vector<i64> prime_divisors(i64 n);
std::vector<i64> divisors(i64 n);
int valuation(i64 n, i64 p);
i64 euler_phi(i64 n);
bool is_prime(i64 n);

/// Units of Z/nZ in increasing order; {0} stands for the unit of Z/1Z.
std::vector<i64> units(i64 n);

/// prod_{p | d} p^{v_p(n)}; gcd(0, .) convention: every prime divides 0.
i64 part_supported_on(i64 n, i64 d);

/// Index of Gamma(N) in SL2(Z): N^3 prod (1 - p^-2).
i64 index_gamma(i64 n);
/// Index of Gamma0(N) in SL2(Z): N prod (1 + 1/p).
i64 index_gamma0(i64 n);

/// Squarefree decomposition n = s^2 * r.
struct SquareSplit {
  i64 square_root;
  i64 squarefree;
};
SquareSplit split_square(i64 n);

}  // namespace cuspfield
