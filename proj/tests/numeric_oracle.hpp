#pragma once

// Numerical modularity oracle shared by unit and acceptance tests:
// E_{(a,b)g}(tau) against (c tau + d)^-k E_{a,b}(g tau) at points where both
// sides converge quickly.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cuspfield/eisenstein.hpp"

namespace cftest {

using cuspfield::EisIndex;
using cuspfield::i64;
using cuspfield::MatZ;
using cplx = std::complex<double>;

/// Sample points with |c tau + d| = 1, so Im(tau) = Im(g tau).
inline std::vector<cplx> sample_points(const MatZ& g) {
  std::vector<cplx> pts;
  for (double theta : {std::numbers::pi / 2, std::numbers::pi / 3, 2 * std::numbers::pi / 3}) {
    if (g.c == 0) {
      pts.push_back(cplx(std::cos(theta), 0.9 * std::sin(theta) + 0.2));
      continue;
    }
    cplx w = std::polar(1.0, g.c > 0 ? theta : -theta);
    pts.push_back((w - static_cast<double>(g.d)) / static_cast<double>(g.c));
  }
  return pts;
}

inline i64 terms_for(double im_tau, i64 width) {
  const double rate = 2 * std::numbers::pi * im_tau / static_cast<double>(width);
  return static_cast<i64>(std::ceil(70.0 / rate)) + 30;
}

struct OracleResult {
  double max_error = 0;
  double max_tail = 0;
};

inline OracleResult eisenstein_modularity(const EisIndex& idx, const MatZ& g) {
  OracleResult out;
  const auto gm = cuspfield::MatModN::reduce(g, idx.level);
  const EisIndex moved = cuspfield::index_slash(idx, gm);
  for (cplx tau : sample_points(g)) {
    cplx gtau = (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) /
                (static_cast<double>(g.c) * tau + static_cast<double>(g.d));
    const i64 p1 = terms_for(tau.imag(), idx.level), p2 = terms_for(gtau.imag(), idx.level);
    auto lhs = cuspfield::eis_expansion(moved, p1).eval_numeric(tau, p1);
    auto rhs = cuspfield::eis_expansion(idx, p2).eval_numeric(gtau, p2);
    cplx factor = std::pow(static_cast<double>(g.c) * tau + static_cast<double>(g.d), -idx.weight);
    out.max_error = std::max(out.max_error, std::abs(lhs.value - factor * rhs.value));
    out.max_tail = std::max({out.max_tail, lhs.tail_estimate, rhs.tail_estimate});
  }
  return out;
}

}  // namespace cftest
