#pragma once

// Eta quotients prod eta(d tau)^r_d as integer q-series, for test oracles and
// corpus generation.

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "cuspfield/qseries.hpp"

namespace cftest {

using cuspfield::i64;

/// Coefficients c_0..c_{count-1} of q^(-shift) prod eta(d tau)^r with
/// shift = sum d r / 24, which must be an integer.
inline std::vector<mpz_class> eta_quotient(const std::vector<std::pair<i64, int>>& factors, i64 count) {
  std::vector<mpz_class> acc(static_cast<std::size_t>(count), 0);
  acc[0] = 1;
  for (auto [d, r] : factors) {
    for (int rep = 0; rep < (r < 0 ? -r : r); ++rep) {
      for (i64 n = d; n < count; n += d) {
        // multiply (r > 0) or divide (r < 0) by (1 - q^n)
        if (r > 0) {
          for (i64 i = count - 1; i >= n; --i) acc[static_cast<std::size_t>(i)] -= acc[static_cast<std::size_t>(i - n)];
        } else {
          for (i64 i = n; i < count; ++i) acc[static_cast<std::size_t>(i)] += acc[static_cast<std::size_t>(i - n)];
        }
      }
    }
  }
  return acc;
}

/// q^shift * (eta quotient) as a width-1 expansion with `count` coefficients.
inline cuspfield::QExpansion eta_expansion(const std::vector<std::pair<i64, int>>& factors, i64 count) {
  i64 s = 0;
  for (auto [d, r] : factors) s += d * r;
  const i64 shift = s / 24;
  auto body = eta_quotient(factors, count);
  std::vector<cuspfield::CycNumber> c(static_cast<std::size_t>(count), cuspfield::CycNumber::zero());
  for (i64 n = shift; n < count; ++n) c[static_cast<std::size_t>(n)] = cuspfield::CycNumber::rational(mpq_class(body[static_cast<std::size_t>(n - shift)]));
  return cuspfield::QExpansion(1, std::move(c), 1);
}

}  // namespace cftest
