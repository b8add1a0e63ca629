#pragma once

// Finite-dimensional *-algebras over Q(i) presented by a basis, and the
// concrete maps between them: KS -> KG(S), restriction to invariant object
// sets, orbit blocks as matrix algebras, rook matrices.

#include <algorithm>
#include <functional>
#include <numeric>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "finitude/detail/sampler.hpp"
#include "finitude/errors.hpp"
#include "finitude/groupoid.hpp"
#include "finitude/scalar.hpp"
#include "finitude/semigroup.hpp"

namespace finitude {

using SparseVec = std::vector<std::pair<Index, Gaussian>>;

class FiniteBasisAlgebra;
using AlgebraPtr = std::shared_ptr<const FiniteBasisAlgebra>;

/// Basis, structure constants, optional basis-permuting involution and
/// optional unit. Products of basis elements are tabulated on construction.
class FiniteBasisAlgebra {
 public:
  struct Spec {
    std::string name;
    std::vector<std::string> labels;
    std::function<SparseVec(Index, Index)> product;
    std::optional<std::vector<Index>> star;
    std::optional<SparseVec> unit;
  };

  static AlgebraPtr make(Spec spec) {
    auto a = std::shared_ptr<FiniteBasisAlgebra>(new FiniteBasisAlgebra());
    const std::size_t n = spec.labels.size();
    a->name_ = std::move(spec.name);
    a->labels_ = std::move(spec.labels);
    for (Index i = 0; i < n; ++i) a->index_.emplace(a->labels_[i], i);
    require(a->index_.size() == n, "algebra basis labels are not unique");
    a->table_.resize(n * n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        SparseVec v = spec.product(i, j);
        v.erase(std::remove_if(v.begin(), v.end(), [](const auto& p) { return p.second.is_zero(); }), v.end());
        for (const auto& [k, c] : v) require(k < n, "structure constant index out of range");
        a->table_[i * n + j] = std::move(v);
      }
    if (spec.star) {
      require(spec.star->size() == n, "star has wrong length");
      for (Index i = 0; i < n; ++i) require((*spec.star)[i] < n && (*spec.star)[(*spec.star)[i]] == i, "star is not an involution");
    }
    a->star_ = std::move(spec.star);
    a->unit_ = std::move(spec.unit);
    return a;
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return labels_.size(); }
  const std::string& label(Index i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Index> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  Index index_of(const std::string& label) const {
    auto i = find(label);
    require(i.has_value(), "unknown basis label '" + label + "' in algebra " + name_);
    return *i;
  }

  const SparseVec& product(Index i, Index j) const { return table_[static_cast<std::size_t>(i) * dim() + j]; }

  /// Basis index of e_i e_j when it is a single basis element with coefficient 1.
  std::optional<Index> monomial_product(Index i, Index j) const {
    const auto& v = product(i, j);
    if (v.size() == 1 && v.front().second == Gaussian(1)) return v.front().first;
    return std::nullopt;
  }

  bool has_star() const { return star_.has_value(); }
  Index star(Index i) const {
    require(star_.has_value(), "algebra " + name_ + " has no involution");
    return (*star_)[i];
  }
  const std::optional<SparseVec>& unit() const { return unit_; }

 private:
  FiniteBasisAlgebra() = default;

  std::string name_;
  std::vector<std::string> labels_;
  std::map<std::string, Index> index_;
  std::vector<SparseVec> table_;
  std::optional<std::vector<Index>> star_;
  std::optional<SparseVec> unit_;
};

// ---------------------------------------------------------------------------
// AlgebraElement

class AlgebraElement {
 public:
  using Coeffs = std::map<Index, Gaussian>;

  explicit AlgebraElement(AlgebraPtr algebra) : alg_(std::move(algebra)) {}
  AlgebraElement(AlgebraPtr algebra, Coeffs c) : alg_(std::move(algebra)), coeffs_(std::move(c)) { prune(); }

  static AlgebraElement basis(AlgebraPtr a, Index i, Gaussian c = Gaussian(1)) {
    require(i < a->dim(), "basis index out of range");
    return AlgebraElement(std::move(a), Coeffs{{i, std::move(c)}});
  }

  static AlgebraElement from_sparse(AlgebraPtr a, const SparseVec& v) {
    AlgebraElement out(std::move(a));
    for (const auto& [i, c] : v) out.add(i, c);
    return out;
  }

  static AlgebraElement from_labels(AlgebraPtr a, const std::vector<std::pair<std::string, Gaussian>>& terms) {
    AlgebraElement out(a);
    for (const auto& [l, c] : terms) out.add(a->index_of(l), c);
    return out;
  }

  static AlgebraElement unit(AlgebraPtr a) {
    require(a->unit().has_value(), "algebra " + a->name() + " is not unital");
    return from_sparse(a, *a->unit());
  }

  const AlgebraPtr& algebra() const { return alg_; }
  const Coeffs& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_real() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& p) { return p.second.is_real(); });
  }

  Gaussian coefficient(Index i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? Gaussian() : it->second;
  }

  void add(Index i, const Gaussian& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = coeffs_.emplace(i, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  AlgebraElement star() const {
    AlgebraElement out(alg_);
    for (const auto& [i, c] : coeffs_) out.add(alg_->star(i), c.conj());
    return out;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    same(o);
    for (const auto& [i, c] : o.coeffs_) add(i, c);
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    same(o);
    for (const auto& [i, c] : o.coeffs_) add(i, -c);
    return *this;
  }
  AlgebraElement& operator*=(const Gaussian& s) {
    if (s.is_zero()) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [i, c] : coeffs_) c *= s;
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator-(AlgebraElement a) { return a *= Gaussian(-1); }
  friend AlgebraElement operator*(const Gaussian& s, AlgebraElement a) { return a *= s; }

  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    a.same(b);
    AlgebraElement out(a.alg_);
    for (const auto& [i, c] : a.coeffs_)
      for (const auto& [j, d] : b.coeffs_) {
        const auto& p = a.alg_->product(i, j);
        if (p.empty()) continue;
        Gaussian cd = c * d;
        for (const auto& [k, e] : p) out.add(k, cd * e);
      }
    return out;
  }

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.alg_ == b.alg_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (const auto& [i, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += "(" + finitude::to_string(c) + ")" + alg_->label(i);
    }
    return s;
  }

 private:
  void same(const AlgebraElement& o) const {
    require(alg_ == o.alg_, "elements belong to different algebras");
  }
  void prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
      it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
  }

  AlgebraPtr alg_;
  Coeffs coeffs_;
};

/// Random element with up to `terms` basis terms.
inline AlgebraElement random_element(const AlgebraPtr& a, detail::Sampler& rng, std::size_t terms, bool real_only) {
  AlgebraElement out(a);
  const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(terms) - 1));
  for (std::size_t t = 0; t < k; ++t)
    out.add(static_cast<Index>(rng.uniform(0, static_cast<std::int64_t>(a->dim()) - 1)), rng.small_gaussian(real_only));
  return out;
}

// ---------------------------------------------------------------------------
// Structural checks

struct AlgebraCheck {
  bool ok = true;
  std::string failure;
  std::size_t checked = 0;
};

/// Associativity on every basis triple when dim <= full_limit, else on
/// `samples` seeded random triples.
inline AlgebraCheck verify_associativity(const AlgebraPtr& a, std::uint64_t seed = 0, std::size_t full_limit = 200,
                                         std::size_t samples = 10000) {
  AlgebraCheck r;
  auto e = [&](Index i) { return AlgebraElement::basis(a, i); };
  auto check = [&](Index i, Index j, Index k) {
    ++r.checked;
    if ((e(i) * e(j)) * e(k) != e(i) * (e(j) * e(k)) && r.ok) {
      r.ok = false;
      r.failure = "not associative at (" + a->label(i) + ", " + a->label(j) + ", " + a->label(k) + ")";
    }
  };
  const Index n = static_cast<Index>(a->dim());
  if (n <= full_limit) {
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) check(i, j, k);
  } else {
    detail::Sampler rng(seed);
    for (std::size_t t = 0; t < samples; ++t)
      check(static_cast<Index>(rng.uniform(0, n - 1)), static_cast<Index>(rng.uniform(0, n - 1)),
            static_cast<Index>(rng.uniform(0, n - 1)));
  }
  return r;
}

/// SA1-SA4 on basis pairs: a** = a, (ab)* = b*a*, and conjugate-linearity
/// (exercised with an imaginary scalar).
inline AlgebraCheck verify_star_axioms(const AlgebraPtr& a) {
  AlgebraCheck r;
  auto fail = [&](std::string why) {
    if (r.ok) r.failure = std::move(why);
    r.ok = false;
  };
  const Index n = static_cast<Index>(a->dim());
  const Gaussian c(Rational(2), Rational(-3));
  for (Index i = 0; i < n; ++i) {
    auto x = AlgebraElement::basis(a, i);
    if (x.star().star() != x) fail("a** != a at " + a->label(i));
    if ((c * x).star() != c.conj() * x.star()) fail("(ca)* != conj(c)a* at " + a->label(i));
    for (Index j = 0; j < n; ++j) {
      ++r.checked;
      auto y = AlgebraElement::basis(a, j);
      if ((x * y).star() != y.star() * x.star()) fail("(ab)* != b*a* at (" + a->label(i) + ", " + a->label(j) + ")");
      if ((x + y).star() != x.star() + y.star()) fail("(a+b)* != a*+b*");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Constructions

/// KS: basis S, product from the table; unit iff S is a monoid.
inline AlgebraPtr semigroup_algebra(const FiniteSemigroup& s, std::string name = "KS") {
  FiniteBasisAlgebra::Spec spec;
  spec.name = std::move(name);
  spec.labels = s.labels();
  spec.product = [&s](Index i, Index j) { return SparseVec{{s.mul(i, j), Gaussian(1)}}; };
  spec.star = s.star_map();
  if (auto u = s.identity()) spec.unit = SparseVec{{*u, Gaussian(1)}};
  return FiniteBasisAlgebra::make(std::move(spec));
}

inline bool is_ideal(const FiniteSemigroup& s, const std::vector<Index>& subset) {
  std::set<Index> in(subset.begin(), subset.end());
  for (Index x : in)
    for (Index t = 0; t < s.size(); ++t)
      if (!in.count(s.mul(x, t)) || !in.count(s.mul(t, x))) return false;
  return true;
}

struct ContractedAlgebra {
  AlgebraPtr algebra;
  /// semigroup index -> basis index, kNoIndex for elements of the ideal.
  std::vector<Index> basis_of;
  /// basis index -> semigroup index.
  std::vector<Index> element_of;

  /// The quotient map KS -> K0[S/I].
  AlgebraElement project(const AlgebraElement& x) const {
    AlgebraElement out(algebra);
    for (const auto& [i, c] : x.coeffs())
      if (basis_of[i] != kNoIndex) out.add(basis_of[i], c);
    return out;
  }
};

/// Basis S \ I with st := 0 whenever st lies in I.
inline ContractedAlgebra contracted_algebra(const FiniteSemigroup& s, const std::vector<Index>& ideal,
                                            std::string name = "K0[S/I]") {
  require(is_ideal(s, ideal), "contracted_algebra: subset is not a two-sided ideal");
  std::set<Index> in(ideal.begin(), ideal.end());
  ContractedAlgebra c;
  c.basis_of.assign(s.size(), kNoIndex);
  FiniteBasisAlgebra::Spec spec;
  spec.name = std::move(name);
  for (Index x = 0; x < s.size(); ++x)
    if (!in.count(x)) {
      c.basis_of[x] = static_cast<Index>(c.element_of.size());
      c.element_of.push_back(x);
      spec.labels.push_back(s.label(x));
    }
  auto basis_of = c.basis_of;
  auto element_of = c.element_of;
  spec.product = [&s, basis_of, element_of](Index i, Index j) {
    Index k = basis_of[s.mul(element_of[i], element_of[j])];
    return k == kNoIndex ? SparseVec{} : SparseVec{{k, Gaussian(1)}};
  };
  if (s.has_star()) {
    bool closed = true;
    std::vector<Index> st;
    for (Index x : c.element_of) {
      Index y = basis_of[s.star(x)];
      closed = closed && y != kNoIndex;
      st.push_back(y);
    }
    if (closed) spec.star = std::move(st);
  }
  if (auto u = s.identity(); u && basis_of[*u] != kNoIndex) spec.unit = SparseVec{{basis_of[*u], Gaussian(1)}};
  c.algebra = FiniteBasisAlgebra::make(std::move(spec));
  return c;
}

/// Convolution algebra of a finite discrete groupoid on the arrow basis.
inline AlgebraPtr groupoid_algebra(const FiniteGroupoid& g, std::string name = "KG") {
  FiniteBasisAlgebra::Spec spec;
  spec.name = std::move(name);
  spec.labels = g.arrow_labels();
  spec.product = [&g](Index a, Index b) {
    return g.composable(a, b) ? SparseVec{{g.compose(a, b), Gaussian(1)}} : SparseVec{};
  };
  std::vector<Index> st;
  for (Index a = 0; a < g.arrow_count(); ++a) st.push_back(g.inverse(a));
  spec.star = std::move(st);
  SparseVec unit;
  for (Index x = 0; x < g.object_count(); ++x) unit.emplace_back(g.identity(x), Gaussian(1));
  spec.unit = std::move(unit);
  return FiniteBasisAlgebra::make(std::move(spec));
}

// ---------------------------------------------------------------------------
// KS -> KG(S)

struct SemigroupGroupoidIso {
  FiniteGroupoid groupoid;
  AlgebraPtr ks, kg;
  /// forward_images[s] = sum of delta_t over t <= s.
  std::vector<AlgebraElement> forward_images;
  /// inverse_images[s] = preimage of delta_s.
  std::vector<AlgebraElement> inverse_images;
  std::size_t pairs_checked = 0;

  AlgebraElement forward(const AlgebraElement& x) const {
    require(x.algebra() == ks, "forward: element is not in KS");
    AlgebraElement out(kg);
    for (const auto& [i, c] : x.coeffs()) out += c * forward_images[i];
    return out;
  }
  AlgebraElement inverse(const AlgebraElement& y) const {
    require(y.algebra() == kg, "inverse: element is not in KG(S)");
    AlgebraElement out(ks);
    for (const auto& [i, c] : y.coeffs()) out += c * inverse_images[i];
    return out;
  }
};

/// Builds s |-> sum_{t <= s} delta_t and its Moebius inverse, then checks
/// multiplicativity and star compatibility on all basis pairs and both round
/// trips on all basis elements. Any failure throws verification_error.
inline SemigroupGroupoidIso iso_semigroup_to_groupoid(const FiniteInverseSemigroup& s) {
  SemigroupGroupoidIso iso;
  iso.groupoid = universal_groupoid(s);
  iso.ks = semigroup_algebra(s.base(), "KS");
  iso.kg = groupoid_algebra(iso.groupoid, "KG(S)");
  const auto order = natural_order(s);
  const Index n = static_cast<Index>(s.size());

  for (Index x = 0; x < n; ++x) {
    AlgebraElement img(iso.kg);
    for (Index t : order.down_set(x)) img.add(t, Gaussian(1));
    iso.forward_images.push_back(std::move(img));
  }

  std::vector<Index> by_height(n);
  std::iota(by_height.begin(), by_height.end(), 0);
  std::stable_sort(by_height.begin(), by_height.end(),
                   [&](Index a, Index b) { return order.down_set(a).size() < order.down_set(b).size(); });
  std::vector<std::optional<AlgebraElement>> inv(n);
  for (Index x : by_height) {
    AlgebraElement pre = AlgebraElement::basis(iso.ks, x);
    for (Index t : order.down_set(x))
      if (t != x) {
        ensure(inv[t].has_value(), "Moebius recursion reached an element out of order");
        pre -= *inv[t];
      }
    inv[x] = std::move(pre);
  }
  for (auto& p : inv) iso.inverse_images.push_back(std::move(*p));

  for (Index a = 0; a < n; ++a) {
    auto ea = AlgebraElement::basis(iso.ks, a);
    ensure(iso.forward(ea).star() == iso.forward(ea.star()), "forward map does not preserve star at " + s.label(a));
    ensure(iso.inverse(iso.forward(ea)) == ea, "inverse after forward is not the identity at " + s.label(a));
    auto da = AlgebraElement::basis(iso.kg, a);
    ensure(iso.forward(iso.inverse(da)) == da, "forward after inverse is not the identity at " + s.label(a));
    for (Index b = 0; b < n; ++b) {
      auto eb = AlgebraElement::basis(iso.ks, b);
      ensure(iso.forward(ea * eb) == iso.forward(ea) * iso.forward(eb),
             "forward map is not multiplicative at (" + s.label(a) + ", " + s.label(b) + ")");
      ++iso.pairs_checked;
    }
  }
  return iso;
}

// ---------------------------------------------------------------------------
// Matrix algebras

inline Index matrix_basis_index(std::size_t n, std::size_t inner_dim, std::size_t i, std::size_t j, std::size_t k) {
  return static_cast<Index>((i * n + j) * inner_dim + k);
}

/// M_n(A) with basis E_ij (x) a, labelled "[i,j]a" with 1-based i, j.
inline AlgebraPtr matrix_algebra(const AlgebraPtr& a, std::size_t n) {
  require(n >= 1, "matrix_algebra needs n >= 1");
  const std::size_t d = a->dim();
  FiniteBasisAlgebra::Spec spec;
  spec.name = "M" + std::to_string(n) + "(" + a->name() + ")";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < d; ++k)
        spec.labels.push_back("[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]" + a->label(static_cast<Index>(k)));
  spec.product = [a, n, d](Index x, Index y) {
    const std::size_t ij = x / d, kl = y / d;
    const std::size_t i = ij / n, j = ij % n, k = kl / n, l = kl % n;
    SparseVec out;
    if (j != k) return out;
    for (const auto& [m, c] : a->product(static_cast<Index>(x % d), static_cast<Index>(y % d)))
      out.emplace_back(matrix_basis_index(n, d, i, l, m), c);
    return out;
  };
  if (a->has_star()) {
    std::vector<Index> st;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < d; ++k) st.push_back(matrix_basis_index(n, d, j, i, a->star(static_cast<Index>(k))));
    spec.star = std::move(st);
  }
  if (a->unit()) {
    SparseVec u;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [k, c] : *a->unit()) u.emplace_back(matrix_basis_index(n, d, i, i, k), c);
    spec.unit = std::move(u);
  }
  return FiniteBasisAlgebra::make(std::move(spec));
}

/// E_ij (x) x for an element x of the inner algebra (0-based i, j).
inline AlgebraElement matrix_entry(const AlgebraPtr& m, std::size_t n, std::size_t i, std::size_t j, const AlgebraElement& x) {
  const std::size_t d = x.algebra()->dim();
  require(m->dim() == n * n * d, "matrix_entry: dimension mismatch");
  AlgebraElement out(m);
  for (const auto& [k, c] : x.coeffs()) out.add(matrix_basis_index(n, d, i, j, k), c);
  return out;
}

// ---------------------------------------------------------------------------
// Rook matrices

/// Basis elements of an algebra closed (up to zero) under product and star.
struct SpanningSemigroup {
  AlgebraPtr algebra;
  std::vector<Index> elements;

  static SpanningSemigroup make(AlgebraPtr a, std::vector<Index> elements) {
    std::set<Index> in(elements.begin(), elements.end());
    for (Index x : elements) {
      require(!a->has_star() || in.count(a->star(x)), "spanning set is not closed under star");
      for (Index y : elements) {
        const auto& p = a->product(x, y);
        if (p.empty()) continue;
        auto m = a->monomial_product(x, y);
        require(m && in.count(*m), "spanning set is not closed under multiplication");
      }
    }
    return {std::move(a), std::move(elements)};
  }
};

/// Column j carries the entry `entry[j]` in row `row_of[j]`, or nothing when
/// row_of[j] < 0. So B = sum_j s_j E_{sigma(j), j}.
struct RookMatrix {
  std::vector<int> row_of;
  std::vector<Index> entry;

  std::size_t size() const { return row_of.size(); }
  friend bool operator==(const RookMatrix&, const RookMatrix&) = default;
};

inline RookMatrix rook_product(const SpanningSemigroup& s, const RookMatrix& b, const RookMatrix& c) {
  require(b.size() == c.size(), "rook matrices of different sizes");
  RookMatrix out{std::vector<int>(c.size(), -1), std::vector<Index>(c.size(), kNoIndex)};
  for (std::size_t j = 0; j < c.size(); ++j) {
    int t = c.row_of[j];
    if (t < 0 || b.row_of[t] < 0) continue;
    const auto& p = s.algebra->product(b.entry[t], c.entry[j]);
    if (p.empty()) continue;
    auto m = s.algebra->monomial_product(b.entry[t], c.entry[j]);
    ensure(m.has_value(), "rook entry product is not a spanning element");
    out.row_of[j] = b.row_of[t];
    out.entry[j] = *m;
  }
  return out;
}

inline RookMatrix rook_star(const SpanningSemigroup& s, const RookMatrix& b) {
  RookMatrix out{std::vector<int>(b.size(), -1), std::vector<Index>(b.size(), kNoIndex)};
  for (std::size_t j = 0; j < b.size(); ++j)
    if (b.row_of[j] >= 0) {
      out.row_of[b.row_of[j]] = static_cast<int>(j);
      out.entry[b.row_of[j]] = s.algebra->star(b.entry[j]);
    }
  return out;
}

inline AlgebraElement rook_embed(const AlgebraPtr& matrices, const SpanningSemigroup& s, const RookMatrix& b) {
  const std::size_t n = b.size();
  AlgebraElement out(matrices);
  for (std::size_t j = 0; j < n; ++j)
    if (b.row_of[j] >= 0)
      out.add(matrix_basis_index(n, s.algebra->dim(), static_cast<std::size_t>(b.row_of[j]), j, b.entry[j]), Gaussian(1));
  return out;
}

/// All n x n rook matrices with entries from the spanning semigroup.
inline std::vector<RookMatrix> enumerate_rook_matrices(const SpanningSemigroup& s, std::size_t n) {
  std::vector<RookMatrix> out;
  RookMatrix cur{std::vector<int>(n, -1), std::vector<Index>(n, kNoIndex)};
  std::vector<char> row_used(n, 0);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      out.push_back(cur);
      return;
    }
    cur.row_of[j] = -1;
    cur.entry[j] = kNoIndex;
    self(self, j + 1);
    for (std::size_t r = 0; r < n; ++r) {
      if (row_used[r]) continue;
      row_used[r] = 1;
      for (Index e : s.elements) {
        cur.row_of[j] = static_cast<int>(r);
        cur.entry[j] = e;
        self(self, j + 1);
      }
      row_used[r] = 0;
    }
    cur.row_of[j] = -1;
    cur.entry[j] = kNoIndex;
  };
  rec(rec, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Groupoid-algebra maps

struct LocalProjection {
  std::vector<Index> objects;
  AlgebraElement projection;
};

/// 1_U for U = all dom and ran objects of the supports; checks 1_U f 1_U = f.
inline LocalProjection local_projection(const FiniteGroupoid& g, const AlgebraPtr& kg,
                                        const std::vector<AlgebraElement>& elements) {
  std::set<Index> objs;
  for (const auto& f : elements) {
    require(f.algebra() == kg, "local_projection: element outside the groupoid algebra");
    for (const auto& [a, c] : f.coeffs()) {
      objs.insert(g.dom(a));
      objs.insert(g.ran(a));
    }
  }
  LocalProjection lp{{objs.begin(), objs.end()}, AlgebraElement(kg)};
  for (Index x : objs) lp.projection.add(g.identity(x), Gaussian(1));
  for (const auto& f : elements)
    ensure(lp.projection * f * lp.projection == f, "1_U f 1_U != f for a supplied element");
  ensure(lp.projection * lp.projection == lp.projection && lp.projection.star() == lp.projection,
         "local projection is not a projection");
  return lp;
}

struct RestrictionHom {
  Restriction restriction;
  AlgebraPtr source, target;
  std::size_t pairs_checked = 0;

  AlgebraElement apply(const AlgebraElement& f) const {
    require(f.algebra() == source, "restriction: element from another algebra");
    AlgebraElement out(target);
    for (const auto& [a, c] : f.coeffs())
      if (restriction.arrow_index[a] != kNoIndex) out.add(restriction.arrow_index[a], c);
    return out;
  }
};

/// f |-> f restricted to arrows inside the invariant object set; checked to be
/// multiplicative and star-preserving on all basis pairs.
inline RestrictionHom restriction_hom(const FiniteGroupoid& g, const AlgebraPtr& kg, std::vector<Index> objects) {
  RestrictionHom h{restrict(g, std::move(objects)), kg, nullptr};
  h.target = groupoid_algebra(h.restriction.groupoid, "KG|O");
  const Index n = static_cast<Index>(g.arrow_count());
  for (Index a = 0; a < n; ++a) {
    auto ea = AlgebraElement::basis(kg, a);
    ensure(h.apply(ea.star()) == h.apply(ea).star(), "restriction does not preserve star");
    for (Index b = 0; b < n; ++b) {
      auto eb = AlgebraElement::basis(kg, b);
      ensure(h.apply(ea * eb) == h.apply(ea) * h.apply(eb),
             "restriction is not multiplicative at (" + g.arrow_label(a) + ", " + g.arrow_label(b) + ")");
      ++h.pairs_checked;
    }
  }
  return h;
}

struct OrbitMatrixIso {
  Restriction restriction;
  Index basepoint = 0;  // ambient object
  AlgebraPtr source;         // K G|_O
  AlgebraPtr group_algebra;  // K G_x0
  AlgebraPtr matrices;       // M_|O|(K G_x0)
  /// image[a] = matrix basis index of the restricted arrow a.
  std::vector<Index> image;
  std::size_t pairs_checked = 0;

  AlgebraElement apply(const AlgebraElement& f) const {
    require(f.algebra() == source, "orbit iso: element from another algebra");
    AlgebraElement out(matrices);
    for (const auto& [a, c] : f.coeffs()) out.add(image[a], c);
    return out;
  }
};

/// gamma: y -> z  |->  E_{z,y} (x) (lambda_z^-1 gamma lambda_y).
inline OrbitMatrixIso orbit_matrix_iso(const FiniteGroupoid& g, std::vector<Index> orbit) {
  OrbitMatrixIso iso;
  iso.restriction = restrict(g, std::move(orbit));
  const FiniteGroupoid& h = iso.restriction.groupoid;
  auto dec = orbits_and_isotropy(h);
  require(dec.orbits.size() == 1, "orbit_matrix_iso: object set is not a single orbit");
  const Orbit& o = dec.orbits.front();
  iso.basepoint = iso.restriction.objects[o.basepoint];
  iso.source = groupoid_algebra(h, "KG|O");
  iso.group_algebra = semigroup_algebra(o.isotropy, "KG_x");
  const std::size_t n = o.objects.size();
  iso.matrices = matrix_algebra(iso.group_algebra, n);
  std::map<Index, Index> iso_pos;
  for (Index k = 0; k < o.isotropy_arrows.size(); ++k) iso_pos[o.isotropy_arrows[k]] = k;
  const std::size_t d = iso.group_algebra->dim();
  std::set<Index> hit;
  for (Index a = 0; a < h.arrow_count(); ++a) {
    Index y = h.dom(a), z = h.ran(a);
    Index ly = dec.transversal_to(y), lz = dec.transversal_to(z);
    Index loop = h.compose(h.inverse(lz), h.compose(a, ly));
    Index m = matrix_basis_index(n, d, z, y, iso_pos.at(loop));
    ensure(hit.insert(m).second, "orbit iso is not injective on the basis");
    iso.image.push_back(m);
  }
  ensure(hit.size() == iso.matrices->dim(), "orbit iso is not surjective on the basis");
  for (Index a = 0; a < h.arrow_count(); ++a) {
    auto ea = AlgebraElement::basis(iso.source, a);
    ensure(iso.apply(ea.star()) == iso.apply(ea).star(), "orbit iso does not preserve star");
    for (Index b = 0; b < h.arrow_count(); ++b) {
      auto eb = AlgebraElement::basis(iso.source, b);
      ensure(iso.apply(ea * eb) == iso.apply(ea) * iso.apply(eb),
             "orbit iso is not multiplicative at (" + h.arrow_label(a) + ", " + h.arrow_label(b) + ")");
      ++iso.pairs_checked;
    }
  }
  return iso;
}

// ---------------------------------------------------------------------------
// Witnesses and sup norm

struct WitnessReport {
  bool e_idempotent = false;
  bool a_in_corner = false;  // eae = a
  bool b_in_corner = false;  // ebe = b
  bool ab_is_e = false;
  bool ba_is_e = false;

  bool preconditions_hold() const { return e_idempotent && a_in_corner && b_in_corner && ab_is_e; }
  /// ab = e but ba != e.
  bool valid() const { return preconditions_hold() && !ba_is_e; }

  std::vector<std::string> failures() const {
    std::vector<std::string> f;
    if (!e_idempotent) f.push_back("e*e != e");
    if (!a_in_corner) f.push_back("e*a*e != a");
    if (!b_in_corner) f.push_back("e*b*e != b");
    if (!ab_is_e) f.push_back("a*b != e");
    return f;
  }
};

/// Works for any element type with *, == and a shared algebra.
template <class Elem>
WitnessReport witness_check(const Elem& e, const Elem& a, const Elem& b) {
  WitnessReport r;
  r.e_idempotent = e * e == e;
  r.a_in_corner = e * a * e == a;
  r.b_in_corner = e * b * e == b;
  r.ab_is_e = a * b == e;
  r.ba_is_e = b * a == e;
  return r;
}

/// max |f(gamma)|^2 over arrows (the square of the sup norm).
inline Rational sup_norm_sq(const AlgebraElement& f) {
  Rational best = 0;
  for (const auto& [a, c] : f.coeffs()) best = std::max(best, c.abs_squared());
  return best;
}

}  // namespace finitude
