#pragma once

// Finite semigroups stored by full multiplication table, inverse semigroups,
// Green's relations and the D-class verdict for stable finiteness.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finitude/detail/scc.hpp"
#include "finitude/errors.hpp"

namespace finitude {

using Index = std::uint32_t;
inline constexpr Index kNoIndex = std::numeric_limits<Index>::max();

inline constexpr std::size_t kDefaultMaxSemigroupSize = 100000;

// ---------------------------------------------------------------------------
// PartialBijection

/// Partial injective map on {0,...,n-1}; entries are targets or -1.
/// Products compose like functions: (s * t)(x) = s(t(x)).
class PartialBijection {
 public:
  static constexpr int kUndefined = -1;

  explicit PartialBijection(std::vector<int> mapping) : map_(std::move(mapping)) {
    require(!map_.empty(), "partial bijection must have positive degree");
    std::vector<char> hit(map_.size(), 0);
    for (int y : map_) {
      if (y == kUndefined) continue;
      require(y >= 0 && static_cast<std::size_t>(y) < map_.size(),
              "partial bijection target out of range: " + std::to_string(y));
      require(!hit[y], "partial bijection is not injective at target " + std::to_string(y));
      hit[y] = 1;
    }
  }

  static PartialBijection identity(int n) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    return PartialBijection(std::move(m));
  }

  /// Identity restricted to the given points.
  static PartialBijection partial_identity(int n, const std::vector<int>& domain) {
    std::vector<int> m(n, kUndefined);
    for (int x : domain) m.at(x) = x;
    return PartialBijection(std::move(m));
  }

  int degree() const { return static_cast<int>(map_.size()); }
  const std::vector<int>& mapping() const { return map_; }
  std::optional<int> at(int x) const {
    if (map_[x] == kUndefined) return std::nullopt;
    return map_[x];
  }

  int rank() const {
    return static_cast<int>(std::count_if(map_.begin(), map_.end(), [](int y) { return y != kUndefined; }));
  }

  bool is_idempotent() const {
    for (std::size_t x = 0; x < map_.size(); ++x)
      if (map_[x] != kUndefined && map_[x] != static_cast<int>(x)) return false;
    return true;
  }

  PartialBijection inverse() const {
    std::vector<int> m(map_.size(), kUndefined);
    for (std::size_t x = 0; x < map_.size(); ++x)
      if (map_[x] != kUndefined) m[map_[x]] = static_cast<int>(x);
    return PartialBijection(std::move(m));
  }

  friend PartialBijection operator*(const PartialBijection& s, const PartialBijection& t) {
    require(s.degree() == t.degree(), "partial bijections of different degree");
    std::vector<int> m(t.map_.size(), kUndefined);
    for (std::size_t x = 0; x < m.size(); ++x)
      if (t.map_[x] != kUndefined) m[x] = s.map_[t.map_[x]];
    return PartialBijection(std::move(m));
  }

  friend auto operator<=>(const PartialBijection&, const PartialBijection&) = default;
  friend bool operator==(const PartialBijection&, const PartialBijection&) = default;

 private:
  std::vector<int> map_;
};

// ---------------------------------------------------------------------------
// FiniteSemigroup

class FiniteSemigroup {
 public:
  FiniteSemigroup() = default;

  /// Validates the table (range, associativity) and the involution if given.
  static FiniteSemigroup from_table(std::vector<std::string> labels,
                                    const std::vector<std::vector<Index>>& table,
                                    std::optional<std::vector<Index>> star = std::nullopt) {
    const std::size_t n = labels.size();
    require(n > 0, "semigroup must be nonempty");
    require(table.size() == n, "multiplication table has wrong number of rows");
    std::vector<Index> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      require(table[i].size() == n, "multiplication table row " + std::to_string(i) + " has wrong length");
      for (Index v : table[i]) {
        require(v < n, "multiplication table entry out of range in row " + std::to_string(i));
        flat.push_back(v);
      }
    }
    FiniteSemigroup s(std::move(labels), std::move(flat), std::nullopt);
    if (auto bad = s.associativity_failure())
      throw precondition_error("table is not associative at (" + s.label(bad->at(0)) + ", " +
                               s.label(bad->at(1)) + ", " + s.label(bad->at(2)) + ")");
    if (star) s.set_star(std::move(*star));
    return s;
  }

  /// For constructions that are associative by design (closure of maps, products).
  static FiniteSemigroup trusted(std::vector<std::string> labels, std::vector<Index> flat,
                                 std::optional<std::vector<Index>> star) {
    FiniteSemigroup s(std::move(labels), std::move(flat), std::nullopt);
    if (star) s.set_star(std::move(*star));
    return s;
  }

  std::size_t size() const { return labels_.size(); }
  Index mul(Index a, Index b) const { return table_[static_cast<std::size_t>(a) * size() + b]; }
  const std::string& label(Index a) const { return labels_.at(a); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Index> find(std::string_view label) const {
    for (Index i = 0; i < size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  bool has_star() const { return star_.has_value(); }
  Index star(Index a) const {
    require(star_.has_value(), "semigroup has no involution");
    return (*star_)[a];
  }
  const std::optional<std::vector<Index>>& star_map() const { return star_; }

  bool is_idempotent(Index a) const { return mul(a, a) == a; }

  std::vector<Index> idempotents() const {
    std::vector<Index> out;
    for (Index a = 0; a < size(); ++a)
      if (is_idempotent(a)) out.push_back(a);
    return out;
  }

  std::optional<Index> identity() const {
    for (Index u = 0; u < size(); ++u) {
      bool ok = true;
      for (Index x = 0; x < size() && ok; ++x) ok = mul(u, x) == x && mul(x, u) == x;
      if (ok) return u;
    }
    return std::nullopt;
  }

  std::optional<Index> zero() const {
    for (Index z = 0; z < size(); ++z) {
      bool ok = true;
      for (Index x = 0; x < size() && ok; ++x) ok = mul(z, x) == z && mul(x, z) == z;
      if (ok) return z;
    }
    return std::nullopt;
  }

  bool is_group() const {
    auto e = identity();
    if (!e) return false;
    for (Index a = 0; a < size(); ++a) {
      bool inv = false;
      for (Index b = 0; b < size() && !inv; ++b) inv = mul(a, b) == *e && mul(b, a) == *e;
      if (!inv) return false;
    }
    return true;
  }

  /// First (a,b,c) with (ab)c != a(bc), if any.
  std::optional<std::vector<Index>> associativity_failure() const {
    for (Index a = 0; a < size(); ++a)
      for (Index b = 0; b < size(); ++b) {
        Index ab = mul(a, b);
        for (Index c = 0; c < size(); ++c)
          if (mul(ab, c) != mul(a, mul(b, c))) return std::vector<Index>{a, b, c};
      }
    return std::nullopt;
  }

  /// Same elements, product reversed.
  FiniteSemigroup opposite() const {
    std::vector<Index> flat(table_.size());
    for (Index a = 0; a < size(); ++a)
      for (Index b = 0; b < size(); ++b) flat[static_cast<std::size_t>(a) * size() + b] = mul(b, a);
    return trusted(labels_, std::move(flat), star_);
  }

  /// Subsemigroup on `elements` (must be closed); returned indices follow `elements`.
  FiniteSemigroup restrict_to(const std::vector<Index>& elements) const {
    std::map<Index, Index> pos;
    for (Index i = 0; i < elements.size(); ++i) pos[elements[i]] = i;
    std::vector<std::string> labels;
    std::vector<Index> flat;
    for (Index a : elements) labels.push_back(label(a));
    for (Index a : elements)
      for (Index b : elements) {
        auto it = pos.find(mul(a, b));
        require(it != pos.end(), "subset is not closed under multiplication");
        flat.push_back(it->second);
      }
    std::optional<std::vector<Index>> star;
    if (star_) {
      star.emplace();
      for (Index a : elements) {
        auto it = pos.find((*star_)[a]);
        if (it == pos.end()) {
          star.reset();
          break;
        }
        star->push_back(it->second);
      }
    }
    return trusted(std::move(labels), std::move(flat), std::move(star));
  }

 private:
  FiniteSemigroup(std::vector<std::string> labels, std::vector<Index> flat,
                  std::optional<std::vector<Index>> star)
      : labels_(std::move(labels)), table_(std::move(flat)), star_(std::move(star)) {}

  void set_star(std::vector<Index> star) {
    require(star.size() == size(), "involution has wrong length");
    for (Index a = 0; a < size(); ++a) {
      require(star[a] < size(), "involution entry out of range");
      require(star[star[a]] == a, "involution is not an involution at " + label(a));
    }
    for (Index a = 0; a < size(); ++a)
      for (Index b = 0; b < size(); ++b)
        require(star[mul(a, b)] == mul(star[b], star[a]),
                "involution is not an anti-homomorphism at (" + label(a) + ", " + label(b) + ")");
    star_ = std::move(star);
  }

  std::vector<std::string> labels_;
  std::vector<Index> table_;
  std::optional<std::vector<Index>> star_;
};

// ---------------------------------------------------------------------------
// FiniteInverseSemigroup

class FiniteInverseSemigroup {
 public:
  const FiniteSemigroup& base() const { return base_; }
  std::size_t size() const { return base_.size(); }
  Index mul(Index a, Index b) const { return base_.mul(a, b); }
  Index star(Index a) const { return base_.star(a); }
  const std::string& label(Index a) const { return base_.label(a); }
  const std::vector<Index>& idempotents() const { return idempotents_; }
  bool is_idempotent(Index a) const { return base_.is_idempotent(a); }

  /// s*s
  Index dom(Index s) const { return mul(star(s), s); }
  /// ss*
  Index ran(Index s) const { return mul(s, star(s)); }

  friend FiniteInverseSemigroup validate_inverse(const FiniteSemigroup& s);

 private:
  FiniteInverseSemigroup(FiniteSemigroup base, std::vector<Index> idempotents)
      : base_(std::move(base)), idempotents_(std::move(idempotents)) {}

  FiniteSemigroup base_;
  std::vector<Index> idempotents_;
};

/// Succeeds iff every s has exactly one t with sts = s and tst = t.
inline FiniteInverseSemigroup validate_inverse(const FiniteSemigroup& s) {
  const Index n = static_cast<Index>(s.size());
  std::vector<Index> star(n, kNoIndex);
  for (Index a = 0; a < n; ++a) {
    std::vector<Index> found;
    for (Index t = 0; t < n; ++t)
      if (s.mul(s.mul(a, t), a) == a && s.mul(s.mul(t, a), t) == t) found.push_back(t);
    if (found.empty()) throw precondition_error("not regular: " + s.label(a) + " has no inverse");
    if (found.size() > 1)
      throw precondition_error("not inverse: " + s.label(a) + " has " + std::to_string(found.size()) +
                               " inverses");
    star[a] = found.front();
  }
  auto idem = s.idempotents();
  for (Index e : idem)
    for (Index f : idem)
      if (s.mul(e, f) != s.mul(f, e))
        throw precondition_error("not inverse: idempotents " + s.label(e) + " and " + s.label(f) +
                                 " do not commute");
  if (s.has_star())
    for (Index a = 0; a < n; ++a)
      require(s.star(a) == star[a], "declared involution differs from the inverse at " + s.label(a));
  std::vector<Index> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) flat.push_back(s.mul(a, b));
  return FiniteInverseSemigroup(FiniteSemigroup::trusted(s.labels(), std::move(flat), std::move(star)),
                                std::move(idem));
}

// ---------------------------------------------------------------------------
// closure

namespace detail {
inline std::string generator_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "g" + std::to_string(i);
}
}  // namespace detail

struct ClosureResult {
  FiniteInverseSemigroup semigroup;
  std::vector<PartialBijection> elements;
};

/// Inverse subsemigroup of I_n generated by `generators`. Elements appear in
/// breadth-first discovery order over the generators followed by their
/// inverses; labels are the discovering words.
inline ClosureResult closure_with_elements(const std::vector<PartialBijection>& generators,
                                           std::size_t max_size = kDefaultMaxSemigroupSize) {
  require(!generators.empty(), "closure needs at least one generator");
  const int degree = generators.front().degree();
  for (const auto& g : generators) require(g.degree() == degree, "generators have different degrees");

  std::vector<PartialBijection> letters;
  std::vector<std::string> letter_names;
  auto add_letter = [&](const PartialBijection& p, std::string name) {
    if (std::find(letters.begin(), letters.end(), p) != letters.end()) return;
    letters.push_back(p);
    letter_names.push_back(std::move(name));
  };
  for (std::size_t i = 0; i < generators.size(); ++i) add_letter(generators[i], detail::generator_name(i));
  for (std::size_t i = 0; i < generators.size(); ++i)
    add_letter(generators[i].inverse(), detail::generator_name(i) + "*");

  std::map<PartialBijection, Index> index_of;
  std::vector<PartialBijection> elems;
  std::vector<std::string> labels;
  auto insert = [&](const PartialBijection& p, const std::string& name) {
    if (index_of.count(p)) return;
    if (elems.size() >= max_size)
      throw size_error("closure exceeds the size bound of " + std::to_string(max_size) + " elements");
    index_of.emplace(p, static_cast<Index>(elems.size()));
    elems.push_back(p);
    labels.push_back(name);
  };
  for (std::size_t i = 0; i < letters.size(); ++i) insert(letters[i], letter_names[i]);
  for (std::size_t k = 0; k < elems.size(); ++k)
    for (std::size_t i = 0; i < letters.size(); ++i) {
      PartialBijection y = elems[k] * letters[i];
      if (!index_of.count(y)) insert(y, labels[k] + letter_names[i]);
    }

  const std::size_t n = elems.size();
  std::vector<Index> flat(n * n);
  std::vector<Index> star(n);
  for (std::size_t a = 0; a < n; ++a) {
    star[a] = index_of.at(elems[a].inverse());
    for (std::size_t b = 0; b < n; ++b) flat[a * n + b] = index_of.at(elems[a] * elems[b]);
  }
  std::vector<Index> idem;
  for (Index a = 0; a < n; ++a)
    if (elems[a].is_idempotent()) idem.push_back(a);
  auto s = FiniteSemigroup::trusted(std::move(labels), std::move(flat), std::move(star));
  return {validate_inverse(s), std::move(elems)};
}

inline FiniteInverseSemigroup closure(const std::vector<PartialBijection>& generators,
                                      std::size_t max_size = kDefaultMaxSemigroupSize) {
  return closure_with_elements(generators, max_size).semigroup;
}

// ---------------------------------------------------------------------------
// Green's relations

struct Partition {
  std::vector<Index> class_of;
  std::vector<std::vector<Index>> classes;

  std::size_t count() const { return classes.size(); }
  bool same(Index a, Index b) const { return class_of[a] == class_of[b]; }

  /// Classes numbered by least element from an arbitrary labelling.
  static Partition from_labels(const std::vector<std::uint32_t>& raw) {
    Partition p;
    p.class_of.assign(raw.size(), kNoIndex);
    std::map<std::uint32_t, Index> renum;
    for (Index a = 0; a < raw.size(); ++a) {
      auto [it, fresh] = renum.emplace(raw[a], static_cast<Index>(renum.size()));
      if (fresh) p.classes.emplace_back();
      p.class_of[a] = it->second;
      p.classes[it->second].push_back(a);
    }
    return p;
  }
};

struct GreenStructure {
  Partition R, L, J, H, D;
  /// j_leq[a][b] iff J-class a <= J-class b.
  std::vector<std::vector<char>> j_leq;

  bool j_below(Index class_a, Index class_b) const { return j_leq[class_a][class_b] != 0; }
};

inline GreenStructure green(const FiniteSemigroup& s) {
  const Index n = static_cast<Index>(s.size());
  std::vector<std::vector<Index>> right(n), left(n), both(n);
  for (Index a = 0; a < n; ++a)
    for (Index x = 0; x < n; ++x) {
      right[a].push_back(s.mul(a, x));
      left[a].push_back(s.mul(x, a));
      both[a].push_back(s.mul(a, x));
      both[a].push_back(s.mul(x, a));
    }
  GreenStructure g;
  g.R = Partition::from_labels(detail::strongly_connected_components(right));
  g.L = Partition::from_labels(detail::strongly_connected_components(left));
  g.J = Partition::from_labels(detail::strongly_connected_components(both));

  std::map<std::pair<Index, Index>, std::uint32_t> h_key;
  std::vector<std::uint32_t> h_raw(n);
  for (Index a = 0; a < n; ++a) {
    auto [it, fresh] = h_key.emplace(std::make_pair(g.R.class_of[a], g.L.class_of[a]),
                                     static_cast<std::uint32_t>(h_key.size()));
    h_raw[a] = it->second;
  }
  g.H = Partition::from_labels(h_raw);

  // D = R v L
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](const Partition& p) {
    for (const auto& cls : p.classes)
      for (Index a : cls) parent[find(a)] = find(cls.front());
  };
  unite(g.R);
  unite(g.L);
  std::vector<std::uint32_t> d_raw(n);
  for (Index a = 0; a < n; ++a) d_raw[a] = find(a);
  g.D = Partition::from_labels(d_raw);

  // J-order from reachability between classes.
  const std::size_t k = g.J.count();
  std::vector<std::set<Index>> succ(k);
  for (Index a = 0; a < n; ++a)
    for (Index b : both[a])
      if (g.J.class_of[a] != g.J.class_of[b]) succ[g.J.class_of[a]].insert(g.J.class_of[b]);
  g.j_leq.assign(k, std::vector<char>(k, 0));
  for (Index top = 0; top < k; ++top) {
    std::vector<Index> stack{top};
    g.j_leq[top][top] = 1;
    while (!stack.empty()) {
      Index c = stack.back();
      stack.pop_back();
      for (Index d : succ[c])
        if (!g.j_leq[d][top]) {
          g.j_leq[d][top] = 1;
          stack.push_back(d);
        }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Natural partial order

class NaturalOrder {
 public:
  explicit NaturalOrder(const FiniteInverseSemigroup& s) : n_(s.size()), leq_(n_ * n_, 0) {
    for (Index t = 0; t < n_; ++t)
      for (Index e : s.idempotents()) leq_[static_cast<std::size_t>(s.mul(t, e)) * n_ + t] = 1;
  }

  bool leq(Index s, Index t) const { return leq_[static_cast<std::size_t>(s) * n_ + t] != 0; }

  /// {u : u <= t}, ascending.
  std::vector<Index> down_set(Index t) const {
    std::vector<Index> out;
    for (Index u = 0; u < n_; ++u)
      if (leq(u, t)) out.push_back(u);
    return out;
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<char> leq_;
};

inline NaturalOrder natural_order(const FiniteInverseSemigroup& s) { return NaturalOrder(s); }

// ---------------------------------------------------------------------------
// Maximal subgroups

struct Subgroup {
  FiniteSemigroup group;
  /// elements[i] is the index in the ambient semigroup of group element i.
  std::vector<Index> elements;
  /// position of the idempotent within `elements`.
  Index identity = 0;
};

namespace detail {
inline Subgroup subgroup_on(const FiniteSemigroup& s, std::vector<Index> elems, Index e) {
  Subgroup out;
  out.elements = std::move(elems);
  out.group = s.restrict_to(out.elements);
  out.identity = static_cast<Index>(std::find(out.elements.begin(), out.elements.end(), e) - out.elements.begin());
  ensure(out.group.is_group(), "H-class of " + s.label(e) + " is not a group");
  ensure(out.group.identity() == out.identity, "maximal subgroup identity is not the idempotent");
  return out;
}
}  // namespace detail

/// The group {s : ss* = e = s*s}.
inline Subgroup maximal_subgroup(const FiniteInverseSemigroup& s, Index e) {
  require(e < s.size() && s.is_idempotent(e), "maximal_subgroup needs an idempotent");
  std::vector<Index> elems;
  for (Index a = 0; a < s.size(); ++a)
    if (s.ran(a) == e && s.dom(a) == e) elems.push_back(a);
  return detail::subgroup_on(s.base(), std::move(elems), e);
}

/// H-class of an idempotent in an arbitrary finite semigroup.
inline Subgroup h_class_group(const FiniteSemigroup& s, const GreenStructure& g, Index e) {
  require(e < s.size() && s.is_idempotent(e), "h_class_group needs an idempotent");
  return detail::subgroup_on(s, g.H.classes[g.H.class_of[e]], e);
}

/// Bijection H_e -> H_f, x |-> s* x s, for an s with ss* = e and s*s = f.
/// Returns pairs (x, image); verified to be a group isomorphism.
inline std::vector<std::pair<Index, Index>> subgroup_isomorphism(const FiniteInverseSemigroup& s, Index e,
                                                                 Index f) {
  std::optional<Index> conj;
  for (Index a = 0; a < s.size() && !conj; ++a)
    if (s.ran(a) == e && s.dom(a) == f) conj = a;
  require(conj.has_value(), "idempotents are not D-related");
  const Index c = *conj;
  auto he = maximal_subgroup(s, e);
  auto hf = maximal_subgroup(s, f);
  std::vector<std::pair<Index, Index>> out;
  std::set<Index> image;
  for (Index x : he.elements) {
    Index y = s.mul(s.mul(s.star(c), x), c);
    ensure(std::find(hf.elements.begin(), hf.elements.end(), y) != hf.elements.end(),
           "conjugate leaves the target subgroup");
    out.emplace_back(x, y);
    image.insert(y);
  }
  ensure(image.size() == hf.elements.size(), "conjugation is not bijective");
  for (auto [x1, y1] : out)
    for (auto [x2, y2] : out) {
      Index xy = s.mul(x1, x2);
      auto it = std::find_if(out.begin(), out.end(), [&](auto& p) { return p.first == xy; });
      ensure(it != out.end() && it->second == s.mul(y1, y2), "conjugation is not a homomorphism");
    }
  return out;
}

// ---------------------------------------------------------------------------
// D-class report

struct DClassEntry {
  std::vector<Index> elements;
  std::vector<Index> idempotents;
  std::size_t r_classes = 0;
  std::size_t l_classes = 0;
  std::size_t subgroup_order = 0;
};

struct DClassReport {
  std::vector<DClassEntry> classes;
  /// Stable finiteness of KS reduces to KG for each listed maximal subgroup;
  /// finite groups have finite-dimensional algebras, so in characteristic 0
  /// the conclusion is always "stably finite".
  bool stably_finite = true;
  std::vector<std::size_t> subgroup_orders() const {
    std::vector<std::size_t> out;
    for (const auto& c : classes) out.push_back(c.subgroup_order);
    return out;
  }
};

inline DClassReport d_class_report(const FiniteInverseSemigroup& s) {
  const auto g = green(s.base());
  DClassReport rep;
  for (const auto& cls : g.D.classes) {
    DClassEntry entry;
    entry.elements = cls;
    std::set<Index> rs, ls;
    for (Index a : cls) {
      rs.insert(g.R.class_of[a]);
      ls.insert(g.L.class_of[a]);
      if (s.is_idempotent(a)) entry.idempotents.push_back(a);
    }
    entry.r_classes = rs.size();
    entry.l_classes = ls.size();
    ensure(!entry.idempotents.empty(), "D-class of an inverse semigroup without idempotent");
    entry.subgroup_order = maximal_subgroup(s, entry.idempotents.front()).elements.size();
    rep.classes.push_back(std::move(entry));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Stability and J-class types

struct StabilityResult {
  bool stable = true;
  /// (s, t, side): side 'r' means s J st but not s R st; 'l' the dual.
  std::optional<std::tuple<Index, Index, char>> counterexample;
};

inline StabilityResult is_stable(const FiniteSemigroup& s, const GreenStructure& g) {
  for (Index a = 0; a < s.size(); ++a)
    for (Index t = 0; t < s.size(); ++t) {
      Index at = s.mul(a, t), ta = s.mul(t, a);
      if (g.J.same(a, at) && !g.R.same(a, at)) return {false, std::make_tuple(a, t, 'r')};
      if (g.J.same(a, ta) && !g.L.same(a, ta)) return {false, std::make_tuple(a, t, 'l')};
    }
  return {};
}

inline StabilityResult is_stable(const FiniteSemigroup& s) { return is_stable(s, green(s)); }

struct JClassInfo {
  Index j_class = 0;
  bool regular = false;
  /// For regular classes: idempotents grouped by R-class and by L-class.
  std::vector<std::vector<Index>> idempotents_by_r;
  std::vector<std::vector<Index>> idempotents_by_l;
  std::size_t r_classes = 0;
  std::size_t l_classes = 0;
};

/// J is regular iff J^2 meets J; otherwise null.
inline std::vector<JClassInfo> j_class_classify(const FiniteSemigroup& s, const GreenStructure& g) {
  std::vector<JClassInfo> out;
  for (Index c = 0; c < g.J.count(); ++c) {
    const auto& cls = g.J.classes[c];
    JClassInfo info;
    info.j_class = c;
    for (Index a : cls)
      for (Index b : cls)
        if (g.J.class_of[s.mul(a, b)] == c) info.regular = true;
    std::map<Index, std::vector<Index>> by_r, by_l;
    for (Index a : cls) {
      by_r[g.R.class_of[a]];
      by_l[g.L.class_of[a]];
      if (s.is_idempotent(a)) {
        by_r[g.R.class_of[a]].push_back(a);
        by_l[g.L.class_of[a]].push_back(a);
      }
    }
    info.r_classes = by_r.size();
    info.l_classes = by_l.size();
    if (info.regular) {
      for (auto& [_, v] : by_r) {
        ensure(!v.empty(), "R-class of a regular J-class without idempotent");
        info.idempotents_by_r.push_back(v);
      }
      for (auto& [_, v] : by_l) {
        ensure(!v.empty(), "L-class of a regular J-class without idempotent");
        info.idempotents_by_l.push_back(v);
      }
    }
    out.push_back(std::move(info));
  }
  return out;
}

inline std::vector<JClassInfo> j_class_classify(const FiniteSemigroup& s) { return j_class_classify(s, green(s)); }

}  // namespace finitude
