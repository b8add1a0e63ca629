#pragma once

// Small named semigroups used by tests, the acceptance run and sample data.

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "finitude/errors.hpp"
#include "finitude/semigroup.hpp"

namespace finitude::catalog {

namespace detail {

inline std::string map_label(const std::vector<int>& m) {
  std::string s;
  for (int y : m) s += (y < 0 ? std::string("-") : std::to_string(y));
  return s;
}

inline FiniteInverseSemigroup from_partial_bijections(const std::vector<PartialBijection>& elems) {
  const std::size_t n = elems.size();
  std::map<PartialBijection, Index> pos;
  for (Index i = 0; i < n; ++i) pos.emplace(elems[i], i);
  std::vector<std::string> labels;
  std::vector<Index> flat(n * n), star(n);
  for (std::size_t a = 0; a < n; ++a) {
    labels.push_back(map_label(elems[a].mapping()));
    star[a] = pos.at(elems[a].inverse());
    for (std::size_t b = 0; b < n; ++b) flat[a * n + b] = pos.at(elems[a] * elems[b]);
  }
  return validate_inverse(FiniteSemigroup::trusted(std::move(labels), std::move(flat), std::move(star)));
}

}  // namespace detail

/// Brandt semigroup B_n: zero "0" at index 0, then E_ij (i,j = 1..n) in
/// lexicographic order. E_ij E_kl = [j = k] E_il.
inline FiniteInverseSemigroup brandt(int n) {
  require(n >= 1, "B_n needs n >= 1");
  const Index size = static_cast<Index>(n * n + 1);
  auto idx = [n](int i, int j) { return static_cast<Index>(1 + (i - 1) * n + (j - 1)); };
  std::vector<std::string> labels{"0"};
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) labels.push_back("E" + std::to_string(i) + std::to_string(j));
  std::vector<Index> flat(static_cast<std::size_t>(size) * size, 0), star(size, 0);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      star[idx(i, j)] = idx(j, i);
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
          if (j == k) flat[static_cast<std::size_t>(idx(i, j)) * size + idx(k, l)] = idx(i, l);
    }
  return validate_inverse(FiniteSemigroup::trusted(std::move(labels), std::move(flat), std::move(star)));
}

/// Symmetric inverse monoid I_n, every partial bijection of {0..n-1}.
/// Ordered by increasing rank, then by mapping; labels list images with '-'
/// for undefined points (so the identity of I_3 is "012").
inline FiniteInverseSemigroup symmetric_inverse_monoid(int n) {
  require(n >= 1 && n <= 6, "I_n supported for 1 <= n <= 6");
  std::vector<PartialBijection> elems;
  std::vector<int> m(n, -1);
  std::function<void(int, std::vector<char>&)> rec = [&](int x, std::vector<char>& used) {
    if (x == n) {
      elems.emplace_back(m);
      return;
    }
    m[x] = -1;
    rec(x + 1, used);
    for (int y = 0; y < n; ++y)
      if (!used[y]) {
        used[y] = 1;
        m[x] = y;
        rec(x + 1, used);
        used[y] = 0;
        m[x] = -1;
      }
  };
  std::vector<char> used(n, 0);
  rec(0, used);
  std::stable_sort(elems.begin(), elems.end(), [](const PartialBijection& a, const PartialBijection& b) {
    if (a.rank() != b.rank()) return a.rank() < b.rank();
    return a.mapping() < b.mapping();
  });
  return detail::from_partial_bijections(elems);
}

/// The symmetric group S_n inside I_n.
inline FiniteInverseSemigroup symmetric_group(int n) {
  require(n >= 1 && n <= 6, "S_n supported for 1 <= n <= 6");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<PartialBijection> elems;
  do elems.emplace_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return detail::from_partial_bijections(elems);
}

/// Z/n with labels "0".."n-1".
inline FiniteInverseSemigroup cyclic_group(int n) {
  require(n >= 1, "Z/n needs n >= 1");
  std::vector<std::string> labels;
  std::vector<Index> flat, star;
  for (int a = 0; a < n; ++a) {
    labels.push_back(std::to_string(a));
    star.push_back(static_cast<Index>((n - a) % n));
    for (int b = 0; b < n; ++b) flat.push_back(static_cast<Index>((a + b) % n));
  }
  return validate_inverse(FiniteSemigroup::trusted(std::move(labels), std::move(flat), std::move(star)));
}

/// Chain semilattice e0 < e1 < ... < e{k-1}, product = minimum.
inline FiniteInverseSemigroup chain(int k) {
  require(k >= 1, "chain needs k >= 1");
  std::vector<std::string> labels;
  std::vector<Index> flat, star;
  for (int a = 0; a < k; ++a) {
    labels.push_back("e" + std::to_string(a));
    star.push_back(static_cast<Index>(a));
    for (int b = 0; b < k; ++b) flat.push_back(static_cast<Index>(std::min(a, b)));
  }
  return validate_inverse(FiniteSemigroup::trusted(std::move(labels), std::move(flat), std::move(star)));
}

/// Full transformation monoid T_n; element labels list images, so "012" is
/// the identity of T_3. Product (st)(x) = s(t(x)).
inline FiniteSemigroup full_transformation_monoid(int n) {
  require(n >= 1 && n <= 5, "T_n supported for 1 <= n <= 5");
  std::vector<std::vector<int>> maps;
  std::vector<int> m(n, 0);
  for (;;) {
    maps.push_back(m);
    int x = n - 1;
    while (x >= 0 && m[x] == n - 1) m[x--] = 0;
    if (x < 0) break;
    ++m[x];
  }
  // by increasing image size, then lexicographic
  auto image_size = [](const std::vector<int>& t) {
    std::vector<int> s(t);
    std::sort(s.begin(), s.end());
    return std::unique(s.begin(), s.end()) - s.begin();
  };
  std::stable_sort(maps.begin(), maps.end(), [&](const auto& a, const auto& b) {
    auto ia = image_size(a), ib = image_size(b);
    if (ia != ib) return ia < ib;
    return a < b;
  });
  std::map<std::vector<int>, Index> pos;
  for (Index i = 0; i < maps.size(); ++i) pos.emplace(maps[i], i);
  std::vector<std::string> labels;
  std::vector<Index> flat;
  for (const auto& s : maps) {
    labels.push_back(detail::map_label(s));
    for (const auto& t : maps) {
      std::vector<int> st(n);
      for (int x = 0; x < n; ++x) st[x] = s[t[x]];
      flat.push_back(pos.at(st));
    }
  }
  return FiniteSemigroup::trusted(std::move(labels), std::move(flat), std::nullopt);
}

/// {0, x} with every product equal to 0.
inline FiniteSemigroup null_semigroup() {
  return FiniteSemigroup::from_table({"0", "x"}, {{0, 0}, {0, 0}});
}

/// {x, y} with xy = x.
inline FiniteSemigroup left_zero_semigroup() {
  return FiniteSemigroup::from_table({"x", "y"}, {{0, 0}, {1, 1}});
}

/// A group G together with a zero (index 0): G^0. The zero is labelled "0",
/// or "z", "z'", ... when G already uses that label.
inline FiniteInverseSemigroup with_zero(const FiniteInverseSemigroup& g) {
  const std::size_t n = g.size() + 1;
  std::string zero = "0";
  if (g.base().find(zero)) zero = "z";
  while (g.base().find(zero)) zero += "'";
  std::vector<std::string> labels{zero};
  for (Index a = 0; a < g.size(); ++a) labels.push_back(g.label(a));
  std::vector<Index> flat(n * n, 0), star(n, 0);
  for (Index a = 0; a < g.size(); ++a) {
    star[a + 1] = g.star(a) + 1;
    for (Index b = 0; b < g.size(); ++b) flat[(a + 1) * n + (b + 1)] = g.mul(a, b) + 1;
  }
  return validate_inverse(FiniteSemigroup::trusted(std::move(labels), std::move(flat), std::move(star)));
}

}  // namespace finitude::catalog
