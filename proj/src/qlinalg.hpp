#pragma once

// Exact Gaussian elimination over Q and over cyclotomic fields.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

#include "cuspfield/cyclotomic.hpp"

namespace cuspfield {

using QMatrix = std::vector<std::vector<mpq_class>>;
using CycMatrix = std::vector<std::vector<CycNumber>>;

inline bool field_is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool field_is_zero(const CycNumber& x) { return x.is_zero(); }
inline mpq_class field_inv(const mpq_class& x) { return 1 / x; }
inline CycNumber field_inv(const CycNumber& x) { return x.inv(); }

inline std::size_t field_height(const mpq_class& x) {
  return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
}
inline std::size_t field_height(const CycNumber& x) {
  std::size_t h = 0;
  for (const auto& c : x.coords())
    if (sgn(c) != 0) h += field_height(c);
  return h;
}

/// Reduced row echelon form in place. Pivots are chosen per column by least
/// height among the remaining rows. Returns pivot columns in row order.
template <class T>
std::vector<std::size_t> row_reduce(std::vector<std::vector<T>>& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t best = m.size();
    std::size_t best_h = 0;
    for (std::size_t r = row; r < m.size(); ++r) {
      if (field_is_zero(m[r][col])) continue;
      std::size_t h = field_height(m[r][col]);
      if (best == m.size() || h < best_h) {
        best = r;
        best_h = h;
      }
    }
    if (best == m.size()) continue;
    std::swap(m[row], m[best]);
    T inv = field_inv(m[row][col]);
    for (std::size_t c = col; c < m[row].size(); ++c)
      if (!field_is_zero(m[row][c])) m[row][c] = m[row][c] * inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || field_is_zero(m[r][col])) continue;
      T factor = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c)
        if (!field_is_zero(m[row][c])) m[r][c] = m[r][c] - factor * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// One solution of a x = b (free variables set to zero), or nullopt.
template <class T>
std::optional<std::vector<T>> solve_linear(std::vector<std::vector<T>> a, const std::vector<T>& b,
                                           const T& zero) {
  const std::size_t n = a.empty() ? 0 : a[0].size();
  for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
  auto pivots = row_reduce(a, n + 1);
  std::vector<T> x(n, zero);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == n) return std::nullopt;
    x[pivots[i]] = a[i][n];
  }
  return x;
}

inline std::optional<std::vector<mpq_class>> solve_exact(QMatrix a, const std::vector<mpq_class>& b) {
  return solve_linear<mpq_class>(std::move(a), b, mpq_class(0));
}

/// Incremental echelon basis over Q(zeta_M): reports whether a new vector is
/// independent of the ones already accepted.
class CycEchelon {
 public:
  CycEchelon(i64 modulus, std::size_t length) : modulus_(modulus), length_(length) {}

  bool add(std::vector<CycNumber> v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t p = pivots_[i];
      if (v[p].is_zero()) continue;
      CycNumber f = v[p];
      for (std::size_t c = p; c < length_; ++c)
        if (!rows_[i][c].is_zero()) v[c] -= f * rows_[i][c];
    }
    std::size_t p = 0;
    while (p < length_ && v[p].is_zero()) ++p;
    if (p == length_) return false;
    CycNumber inv = v[p].inv();
    for (std::size_t c = p; c < length_; ++c)
      if (!v[c].is_zero()) v[c] *= inv;
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  i64 modulus() const { return modulus_; }

 private:
  i64 modulus_;
  std::size_t length_;
  std::vector<std::vector<CycNumber>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace cuspfield
