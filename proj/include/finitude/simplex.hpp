#pragma once

// Exact two-phase simplex for  min c.x  s.t.  A x = b, x >= 0  over Q.
// Bland's rule, so it terminates without perturbation.

#include <cstddef>
#include <vector>

#include "finitude/errors.hpp"
#include "finitude/scalar.hpp"

namespace finitude {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  std::vector<Rational> x;  // primal optimum
  std::vector<Rational> y;  // dual optimum: A^T y <= c, b.y = value
};

inline LpResult simplex_solve(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                              const std::vector<Rational>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  require(b.size() == m, "simplex: rhs length mismatch");
  for (const auto& row : a) require(row.size() == n, "simplex: row length mismatch");

  // Columns 0..n-1 original, n..n+m-1 artificial, last = rhs.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols));
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(b[i]) < 0) sign[i] = -1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = sign[i] * a[i][j];
    t[i][n + i] = 1;
    t[i][cols - 1] = sign[i] * b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  auto pivot = [&](std::size_t r, std::size_t col) {
    Rational inv = 1 / t[r][col];
    for (auto& v : t[r]) v *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(t[i][col]) == 0) continue;
      Rational f = t[i][col];
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(t[r][j]) != 0) t[i][j] -= f * t[r][j];
    }
    basis[r] = col;
  };

  // Returns false when unbounded.
  auto run = [&](const std::vector<Rational>& cost, std::size_t allowed) -> bool {
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < allowed && enter == cols; ++j) {
        Rational d = cost[j];
        for (std::size_t i = 0; i < m; ++i)
          if (sgn(t[i][j]) != 0) d -= cost[basis[i]] * t[i][j];
        if (sgn(d) < 0) enter = j;
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(t[i][enter]) <= 0) continue;
        Rational ratio = t[i][cols - 1] / t[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  };

  LpResult res;
  std::vector<Rational> phase1(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  run(phase1, n + m);
  Rational infeas = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) infeas += t[i][cols - 1];
  if (sgn(infeas) != 0) {
    res.status = LpStatus::infeasible;
    return res;
  }
  // Drive zero-level artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(t[i][j]) != 0) {
        pivot(i, j);
        break;
      }
  }
  std::vector<Rational> phase2(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  if (!run(phase2, n)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  res.status = LpStatus::optimal;
  res.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
  res.value = 0;
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  res.y.assign(m, Rational(0));
  for (std::size_t r = 0; r < m; ++r) {
    Rational yr = 0;
    for (std::size_t i = 0; i < m; ++i) yr += phase2[basis[i]] * t[i][n + r];
    res.y[r] = sign[r] * yr;
  }
  return res;
}

/// Checks primal feasibility, dual feasibility and zero duality gap.
inline bool lp_certificate_holds(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                                 const std::vector<Rational>& c, const LpResult& r) {
  if (r.status != LpStatus::optimal) return false;
  const std::size_t m = a.size(), n = c.size();
  for (std::size_t j = 0; j < n; ++j)
    if (sgn(r.x[j]) < 0) return false;
  for (std::size_t i = 0; i < m; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) s += a[i][j] * r.x[j];
    if (s != b[i]) return false;
  }
  Rational dual_value = 0;
  for (std::size_t i = 0; i < m; ++i) dual_value += b[i] * r.y[i];
  for (std::size_t j = 0; j < n; ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a[i][j] * r.y[i];
    if (s > c[j]) return false;
  }
  return dual_value == r.value;
}

}  // namespace finitude
