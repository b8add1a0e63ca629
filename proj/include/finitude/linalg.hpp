#pragma once

// Dense exact linear algebra over Q and Q(i).

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "finitude/scalar.hpp"

namespace finitude::linalg {

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Gaussian& x) { return x.is_zero(); }

template <class F>
using Matrix = std::vector<std::vector<F>>;

/// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<std::size_t> row_reduce(Matrix<F>& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(m[p][c])) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    F inv = F(1) / m[r][c];
    for (std::size_t k = c; k < cols; ++k) m[r][k] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      F f = m[i][c];
      for (std::size_t k = c; k < cols; ++k)
        if (!is_zero(m[r][k])) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) {
  return row_reduce(m).size();
}

/// Some x with A x = b, if one exists.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& a, const std::vector<F>& b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a.front().size() : 0;
  Matrix<F> aug(rows, std::vector<F>(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  auto piv = row_reduce(aug);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  std::vector<F> x(cols, F(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][cols];
  return x;
}

/// Hermitian positive definiteness by symmetric elimination: every pivot must
/// be a positive rational. Input must be Hermitian.
inline bool is_positive_definite(Matrix<Gaussian> m) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Gaussian& p = m[k][k];
    if (!p.is_real() || sgn(p.re()) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      Gaussian f = m[i][k] / p;
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return true;
}

inline bool is_hermitian(const Matrix<Gaussian>& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[i][j] != m[j][i].conj()) return false;
  return true;
}

}  // namespace finitude::linalg
