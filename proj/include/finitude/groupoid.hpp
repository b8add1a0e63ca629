#pragma once

// Finite discrete groupoids. Arrows are indexed 0..N-1; compose(a, b) is the
// composite "a after b", defined exactly when ran(b) == dom(a).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "finitude/errors.hpp"
#include "finitude/semigroup.hpp"

namespace finitude {

inline constexpr std::size_t kDefaultMaxBisectionArrows = 20;

struct RawGroupoid {
  std::size_t objects = 0;
  std::vector<std::pair<Index, Index>> arrows;  // (dom, ran)
  std::vector<std::tuple<Index, Index, Index>> compose;
  std::vector<std::string> object_labels;  // optional
  std::vector<std::string> arrow_labels;   // optional
};

class FiniteGroupoid {
 public:
  FiniteGroupoid() = default;

  std::size_t object_count() const { return object_labels_.size(); }
  std::size_t arrow_count() const { return dom_.size(); }

  Index dom(Index a) const { return dom_[a]; }
  Index ran(Index a) const { return ran_[a]; }
  Index identity(Index x) const { return identity_[x]; }
  Index inverse(Index a) const { return inverse_[a]; }
  bool is_identity(Index a) const { return identity_[dom_[a]] == a; }

  bool composable(Index a, Index b) const { return ran_[b] == dom_[a]; }
  /// a after b, or kNoIndex when ran(b) != dom(a).
  Index compose(Index a, Index b) const { return compose_[static_cast<std::size_t>(a) * arrow_count() + b]; }

  const std::string& object_label(Index x) const { return object_labels_[x]; }
  const std::string& arrow_label(Index a) const { return arrow_labels_[a]; }
  const std::vector<std::string>& arrow_labels() const { return arrow_labels_; }
  const std::vector<std::string>& object_labels() const { return object_labels_; }

  std::optional<Index> find_arrow(const std::string& label) const {
    for (Index a = 0; a < arrow_count(); ++a)
      if (arrow_labels_[a] == label) return a;
    return std::nullopt;
  }

  /// Arrows x -> y.
  std::vector<Index> hom(Index x, Index y) const {
    std::vector<Index> out;
    for (Index a = 0; a < arrow_count(); ++a)
      if (dom_[a] == x && ran_[a] == y) out.push_back(a);
    return out;
  }

  RawGroupoid raw() const {
    RawGroupoid r;
    r.objects = object_count();
    r.object_labels = object_labels_;
    r.arrow_labels = arrow_labels_;
    for (Index a = 0; a < arrow_count(); ++a) r.arrows.emplace_back(dom_[a], ran_[a]);
    for (Index a = 0; a < arrow_count(); ++a)
      for (Index b = 0; b < arrow_count(); ++b)
        if (composable(a, b)) r.compose.emplace_back(a, b, compose(a, b));
    return r;
  }

  friend FiniteGroupoid validate_groupoid(const RawGroupoid& raw);

 private:
  std::vector<std::string> object_labels_;
  std::vector<std::string> arrow_labels_;
  std::vector<Index> dom_, ran_, identity_, inverse_, compose_;
};

namespace detail {
inline std::string arrow_name(const RawGroupoid& r, Index a) {
  if (a < r.arrow_labels.size()) return "arrow " + std::to_string(a) + " (" + r.arrow_labels[a] + ")";
  return "arrow " + std::to_string(a);
}
}  // namespace detail

/// Exhaustive check of the category and inverse axioms.
inline FiniteGroupoid validate_groupoid(const RawGroupoid& raw) {
  const std::size_t n = raw.arrows.size();
  const std::size_t m = raw.objects;
  require(m > 0, "groupoid must have at least one object");
  require(raw.object_labels.empty() || raw.object_labels.size() == m, "object label count mismatch");
  require(raw.arrow_labels.empty() || raw.arrow_labels.size() == n, "arrow label count mismatch");
  auto name = [&](Index a) { return detail::arrow_name(raw, a); };

  FiniteGroupoid g;
  for (Index x = 0; x < m; ++x)
    g.object_labels_.push_back(raw.object_labels.empty() ? std::to_string(x) : raw.object_labels[x]);
  for (Index a = 0; a < n; ++a) {
    auto [d, r] = raw.arrows[a];
    require(d < m && r < m, name(a) + " has an endpoint out of range");
    g.dom_.push_back(d);
    g.ran_.push_back(r);
    g.arrow_labels_.push_back(raw.arrow_labels.empty() ? std::to_string(a) : raw.arrow_labels[a]);
  }
  g.compose_.assign(n * n, kNoIndex);
  for (auto [a, b, c] : raw.compose) {
    require(a < n && b < n && c < n, "compose entry out of range");
    require(g.ran_[b] == g.dom_[a], "compose: dom/ran mismatch for pair (" + name(a) + ", " + name(b) + ")");
    require(g.dom_[c] == g.dom_[b] && g.ran_[c] == g.ran_[a],
            "compose: result " + name(c) + " has wrong endpoints for pair (" + name(a) + ", " + name(b) + ")");
    Index& slot = g.compose_[a * n + b];
    require(slot == kNoIndex || slot == c,
            "compose: pair (" + name(a) + ", " + name(b) + ") has two results");
    slot = c;
  }
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (g.ran_[b] == g.dom_[a])
        require(g.compose_[a * n + b] != kNoIndex,
                "compose: composable pair (" + name(a) + ", " + name(b) + ") has no result");

  // Identities.
  g.identity_.assign(m, kNoIndex);
  for (Index x = 0; x < m; ++x) {
    for (Index u = 0; u < n && g.identity_[x] == kNoIndex; ++u) {
      if (g.dom_[u] != x || g.ran_[u] != x) continue;
      bool ok = true;
      for (Index a = 0; a < n && ok; ++a) {
        if (g.dom_[a] == x) ok = g.compose_[a * n + u] == a;
        if (ok && g.ran_[a] == x) ok = g.compose_[u * n + a] == a;
      }
      if (ok) g.identity_[x] = u;
    }
    require(g.identity_[x] != kNoIndex, "object " + g.object_labels_[x] + " has no identity arrow");
  }
  // Associativity on composable triples.
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      if (g.ran_[b] != g.dom_[a]) continue;
      Index ab = g.compose_[a * n + b];
      for (Index c = 0; c < n; ++c) {
        if (g.ran_[c] != g.dom_[b]) continue;
        require(g.compose_[ab * n + c] == g.compose_[a * n + g.compose_[b * n + c]],
                "compose is not associative at (" + name(a) + ", " + name(b) + ", " + name(c) + ")");
      }
    }
  // Inverses.
  g.inverse_.assign(n, kNoIndex);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n && g.inverse_[a] == kNoIndex; ++b)
      if (g.dom_[b] == g.ran_[a] && g.ran_[b] == g.dom_[a] && g.compose_[b * n + a] == g.identity_[g.dom_[a]] &&
          g.compose_[a * n + b] == g.identity_[g.ran_[a]])
        g.inverse_[a] = b;
    require(g.inverse_[a] != kNoIndex, name(a) + " is not invertible");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Constructions

/// Pair groupoid on n objects; arrow (i,j) has dom j, ran i and index i*n + j.
inline FiniteGroupoid pair_groupoid(std::size_t n) {
  RawGroupoid r;
  r.objects = n;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      r.arrows.emplace_back(j, i);
      r.arrow_labels.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index l = 0; l < n; ++l)
        r.compose.emplace_back(static_cast<Index>(i * n + j), static_cast<Index>(j * n + l),
                               static_cast<Index>(i * n + l));
  return validate_groupoid(r);
}

/// One-object groupoid of a group given by table.
inline FiniteGroupoid group_groupoid(const FiniteSemigroup& group) {
  require(group.is_group(), "group_groupoid needs a group");
  RawGroupoid r;
  r.objects = 1;
  r.arrow_labels = group.labels();
  for (Index a = 0; a < group.size(); ++a) r.arrows.emplace_back(0, 0);
  for (Index a = 0; a < group.size(); ++a)
    for (Index b = 0; b < group.size(); ++b) r.compose.emplace_back(a, b, group.mul(a, b));
  return validate_groupoid(r);
}

/// Objects and arrows of `b` follow those of `a`; labels gain "L:"/"R:" prefixes
/// only when they would collide.
inline FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  RawGroupoid r;
  const Index oa = static_cast<Index>(a.object_count());
  const Index na = static_cast<Index>(a.arrow_count());
  r.objects = a.object_count() + b.object_count();
  std::set<std::string> la(a.arrow_labels().begin(), a.arrow_labels().end());
  std::set<std::string> lo(a.object_labels().begin(), a.object_labels().end());
  bool clash = false;
  for (const auto& s : b.arrow_labels()) clash = clash || la.count(s);
  for (const auto& s : b.object_labels()) clash = clash || lo.count(s);
  auto lab = [&](const std::string& p, const std::string& s) { return clash ? p + s : s; };
  for (Index x = 0; x < a.object_count(); ++x) r.object_labels.push_back(lab("L:", a.object_label(x)));
  for (Index x = 0; x < b.object_count(); ++x) r.object_labels.push_back(lab("R:", b.object_label(x)));
  for (Index g = 0; g < na; ++g) {
    r.arrows.emplace_back(a.dom(g), a.ran(g));
    r.arrow_labels.push_back(lab("L:", a.arrow_label(g)));
  }
  for (Index g = 0; g < b.arrow_count(); ++g) {
    r.arrows.emplace_back(b.dom(g) + oa, b.ran(g) + oa);
    r.arrow_labels.push_back(lab("R:", b.arrow_label(g)));
  }
  for (auto [x, y, z] : a.raw().compose) r.compose.emplace_back(x, y, z);
  for (auto [x, y, z] : b.raw().compose) r.compose.emplace_back(x + na, y + na, z + na);
  return validate_groupoid(r);
}

/// Universal groupoid of a finite inverse semigroup: objects are the
/// idempotents (in index order), arrow i is element i with dom s*s and ran ss*,
/// and s.t = st whenever s*s = tt*.
inline FiniteGroupoid universal_groupoid(const FiniteInverseSemigroup& s) {
  RawGroupoid r;
  std::map<Index, Index> obj;
  for (Index e : s.idempotents()) {
    obj.emplace(e, static_cast<Index>(r.object_labels.size()));
    r.object_labels.push_back(s.label(e));
  }
  r.objects = obj.size();
  for (Index a = 0; a < s.size(); ++a) {
    r.arrows.emplace_back(obj.at(s.dom(a)), obj.at(s.ran(a)));
    r.arrow_labels.push_back(s.label(a));
  }
  for (Index a = 0; a < s.size(); ++a)
    for (Index b = 0; b < s.size(); ++b)
      if (s.dom(a) == s.ran(b)) r.compose.emplace_back(a, b, s.mul(a, b));
  return validate_groupoid(r);
}

// ---------------------------------------------------------------------------
// Orbits and isotropy

struct Orbit {
  std::vector<Index> objects;  // ascending
  Index basepoint = 0;
  /// transversal[k] is an arrow basepoint -> objects[k].
  std::vector<Index> transversal;
  /// Arrows basepoint -> basepoint, ascending.
  std::vector<Index> isotropy_arrows;
  FiniteSemigroup isotropy;
};

struct OrbitDecomposition {
  std::vector<Orbit> orbits;  // ordered by least object
  std::vector<Index> orbit_of;

  /// Transversal arrow basepoint -> y.
  Index transversal_to(Index y) const {
    const Orbit& o = orbits[orbit_of[y]];
    auto it = std::lower_bound(o.objects.begin(), o.objects.end(), y);
    return o.transversal[it - o.objects.begin()];
  }
};

inline OrbitDecomposition orbits_and_isotropy(const FiniteGroupoid& g) {
  OrbitDecomposition d;
  d.orbit_of.assign(g.object_count(), kNoIndex);
  for (Index base = 0; base < g.object_count(); ++base) {
    if (d.orbit_of[base] != kNoIndex) continue;
    Orbit o;
    o.basepoint = base;
    std::map<Index, Index> reach;
    for (Index a = 0; a < g.arrow_count(); ++a)
      if (g.dom(a) == base && !reach.count(g.ran(a))) reach.emplace(g.ran(a), a);
    for (auto [y, a] : reach) {
      o.objects.push_back(y);
      o.transversal.push_back(y == base ? g.identity(base) : a);
      d.orbit_of[y] = static_cast<Index>(d.orbits.size());
    }
    o.isotropy_arrows = g.hom(base, base);
    std::map<Index, Index> pos;
    for (Index i = 0; i < o.isotropy_arrows.size(); ++i) pos[o.isotropy_arrows[i]] = i;
    std::vector<std::string> labels;
    std::vector<Index> flat, star;
    for (Index a : o.isotropy_arrows) {
      labels.push_back(g.arrow_label(a));
      star.push_back(pos.at(g.inverse(a)));
      for (Index b : o.isotropy_arrows) flat.push_back(pos.at(g.compose(a, b)));
    }
    o.isotropy = FiniteSemigroup::trusted(std::move(labels), std::move(flat), std::move(star));
    ensure(o.isotropy.is_group(), "isotropy at object " + g.object_label(base) + " is not a group");
    d.orbits.push_back(std::move(o));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Bisections

/// Sorted arrow set with dom and ran injective on it.
using Bisection = std::vector<Index>;

inline bool is_bisection(const FiniteGroupoid& g, const Bisection& u) {
  std::set<Index> doms, rans;
  for (Index a : u)
    if (!doms.insert(g.dom(a)).second || !rans.insert(g.ran(a)).second) return false;
  return std::is_sorted(u.begin(), u.end()) && std::adjacent_find(u.begin(), u.end()) == u.end();
}

/// {ab : a in U, b in V composable}.
inline Bisection bisection_product(const FiniteGroupoid& g, const Bisection& u, const Bisection& v) {
  Bisection out;
  for (Index a : u)
    for (Index b : v)
      if (g.composable(a, b)) out.push_back(g.compose(a, b));
  std::sort(out.begin(), out.end());
  return out;
}

inline Bisection bisection_inverse(const FiniteGroupoid& g, const Bisection& u) {
  Bisection out;
  for (Index a : u) out.push_back(g.inverse(a));
  std::sort(out.begin(), out.end());
  return out;
}

/// Identity arrows at dom(U).
inline Bisection bisection_dom(const FiniteGroupoid& g, const Bisection& u) {
  Bisection out;
  for (Index a : u) out.push_back(g.identity(g.dom(a)));
  std::sort(out.begin(), out.end());
  return out;
}

inline Bisection bisection_ran(const FiniteGroupoid& g, const Bisection& u) {
  Bisection out;
  for (Index a : u) out.push_back(g.identity(g.ran(a)));
  std::sort(out.begin(), out.end());
  return out;
}

/// Every bisection, in lexicographic order of their sorted arrow lists
/// (so the empty bisection comes first).
inline std::vector<Bisection> enumerate_bisections(const FiniteGroupoid& g,
                                                   std::size_t max_arrows = kDefaultMaxBisectionArrows) {
  if (g.arrow_count() > max_arrows)
    throw size_error("bisection enumeration limited to " + std::to_string(max_arrows) + " arrows, groupoid has " +
                     std::to_string(g.arrow_count()));
  std::vector<Bisection> out;
  std::vector<char> dom_used(g.object_count(), 0), ran_used(g.object_count(), 0);
  Bisection cur;
  auto rec = [&](auto&& self, Index from) -> void {
    out.push_back(cur);
    for (Index a = from; a < g.arrow_count(); ++a) {
      if (dom_used[g.dom(a)] || ran_used[g.ran(a)]) continue;
      dom_used[g.dom(a)] = ran_used[g.ran(a)] = 1;
      cur.push_back(a);
      self(self, a + 1);
      cur.pop_back();
      dom_used[g.dom(a)] = ran_used[g.ran(a)] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

struct BisectionMonoidCheck {
  bool ok = true;
  std::string failure;
};

/// Inverse-monoid laws on an enumerated bisection set: closure, U U^-1 U = U,
/// (U^-1)^-1 = U, dom/ran identities, and associativity on up to
/// `max_triples` triples (all triples when the count fits).
inline BisectionMonoidCheck verify_bisection_monoid(const FiniteGroupoid& g, const std::vector<Bisection>& all,
                                                    std::size_t max_triples = 2'000'000) {
  BisectionMonoidCheck r;
  std::set<Bisection> members(all.begin(), all.end());
  auto fail = [&](std::string why) {
    if (r.ok) r.failure = std::move(why);
    r.ok = false;
  };
  for (const auto& u : all) {
    auto ui = bisection_inverse(g, u);
    if (!members.count(ui)) fail("inverse not a bisection");
    if (bisection_inverse(g, ui) != u) fail("(U^-1)^-1 != U");
    if (bisection_product(g, bisection_product(g, u, ui), u) != u) fail("U U^-1 U != U");
    if (bisection_product(g, ui, u) != bisection_dom(g, u)) fail("U^-1 U != dom(U)");
    if (bisection_product(g, u, ui) != bisection_ran(g, u)) fail("U U^-1 != ran(U)");
  }
  for (const auto& u : all)
    for (const auto& v : all)
      if (!members.count(bisection_product(g, u, v))) fail("product of bisections is not a bisection");
  const std::size_t n = all.size();
  const std::size_t stride = (n * n * n > max_triples) ? (n * n * n) / max_triples + 1 : 1;
  std::size_t counter = 0;
  for (const auto& u : all)
    for (const auto& v : all) {
      auto uv = bisection_product(g, u, v);
      for (const auto& w : all) {
        if (counter++ % stride != 0) continue;
        if (bisection_product(g, uv, w) != bisection_product(g, u, bisection_product(g, v, w)))
          fail("bisection product is not associative");
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Restriction

struct Restriction {
  FiniteGroupoid groupoid;
  std::vector<Index> objects;  // ambient indices, ascending
  std::vector<Index> arrows;   // ambient indices, ascending
  /// ambient arrow -> restricted arrow, kNoIndex outside.
  std::vector<Index> arrow_index;
};

inline bool is_invariant(const FiniteGroupoid& g, const std::vector<Index>& objects) {
  std::set<Index> in(objects.begin(), objects.end());
  for (Index a = 0; a < g.arrow_count(); ++a)
    if (in.count(g.dom(a)) != in.count(g.ran(a))) return false;
  return true;
}

inline Restriction restrict(const FiniteGroupoid& g, std::vector<Index> objects) {
  std::sort(objects.begin(), objects.end());
  objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
  require(!objects.empty(), "restriction to an empty object set");
  for (Index x : objects) require(x < g.object_count(), "restriction object out of range");
  require(is_invariant(g, objects), "object set is not invariant");
  Restriction r;
  r.objects = objects;
  std::map<Index, Index> opos;
  for (Index i = 0; i < objects.size(); ++i) opos[objects[i]] = i;
  r.arrow_index.assign(g.arrow_count(), kNoIndex);
  RawGroupoid raw;
  raw.objects = objects.size();
  for (Index x : objects) raw.object_labels.push_back(g.object_label(x));
  for (Index a = 0; a < g.arrow_count(); ++a)
    if (opos.count(g.dom(a))) {
      r.arrow_index[a] = static_cast<Index>(r.arrows.size());
      r.arrows.push_back(a);
      raw.arrows.emplace_back(opos[g.dom(a)], opos[g.ran(a)]);
      raw.arrow_labels.push_back(g.arrow_label(a));
    }
  for (Index a : r.arrows)
    for (Index b : r.arrows)
      if (g.composable(a, b))
        raw.compose.emplace_back(r.arrow_index[a], r.arrow_index[b], r.arrow_index[g.compose(a, b)]);
  r.groupoid = validate_groupoid(raw);
  return r;
}

}  // namespace finitude
