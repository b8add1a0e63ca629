#pragma once

// J-order navigation, ideal complements and the left Schutzenberger
// representation of a finite semigroup by monomial matrices over a maximal
// subgroup.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finitude/algebra.hpp"
#include "finitude/errors.hpp"
#include "finitude/semigroup.hpp"

namespace finitude {

/// {s : J is not below-or-equal J_s}, as sorted element indices.
inline std::vector<Index> ideal_complement(const FiniteSemigroup& s, const GreenStructure& g, Index j_class) {
  require(j_class < g.J.count(), "unknown J-class");
  std::vector<Index> out;
  for (Index a = 0; a < s.size(); ++a)
    if (!g.j_below(j_class, g.J.class_of[a])) out.push_back(a);
  ensure(out.empty() || is_ideal(s, out), "ideal complement is not an ideal");
  std::vector<Index> with_j = out;
  with_j.insert(with_j.end(), g.J.classes[j_class].begin(), g.J.classes[j_class].end());
  std::sort(with_j.begin(), with_j.end());
  ensure(is_ideal(s, with_j), "J together with its ideal complement is not an ideal");
  return out;
}

/// A J-class maximal among those meeting `support`; least class index on ties.
inline Index maximal_jclass_meeting(const GreenStructure& g, const std::vector<Index>& support) {
  require(!support.empty(), "maximal_jclass_meeting needs a nonempty support");
  std::set<Index> meets;
  for (Index a : support) {
    require(a < g.J.class_of.size(), "support element out of range");
    meets.insert(g.J.class_of[a]);
  }
  for (Index c : meets) {
    bool maximal = true;
    for (Index d : meets)
      if (d != c && g.j_below(c, d)) maximal = false;
    if (maximal) return c;
  }
  ensure(false, "J-order on a finite set has no maximal element");
  return kNoIndex;
}

/// Column-monomial matrix over a group H: column j holds at most one entry
/// (row, group element). Rows may repeat when s collapses R-classes, as
/// constant maps do in a transformation monoid.
struct MonomialMatrix {
  std::size_t n = 0;
  std::vector<std::optional<std::pair<Index, Index>>> column;

  friend bool operator==(const MonomialMatrix&, const MonomialMatrix&) = default;
};

inline MonomialMatrix monomial_product(const FiniteSemigroup& h, const MonomialMatrix& a, const MonomialMatrix& b) {
  MonomialMatrix out{a.n, std::vector<std::optional<std::pair<Index, Index>>>(a.n)};
  for (std::size_t j = 0; j < b.n; ++j) {
    if (!b.column[j]) continue;
    auto [k, h2] = *b.column[j];
    if (!a.column[k]) continue;
    auto [i, h1] = *a.column[k];
    out.column[j] = std::make_pair(i, h.mul(h1, h2));
  }
  return out;
}

struct SchutzenbergerRep {
  /// True when built on the opposite semigroup; then `semigroup` is S^op.
  bool opposite = false;
  FiniteSemigroup semigroup;
  GreenStructure green;
  Index f = 0;
  Index j_class = 0;
  std::size_t r_classes = 0, l_classes = 0;
  /// Least element of each H-class inside L_f, in increasing order.
  std::vector<Index> transversal;
  Subgroup hf;
  std::vector<MonomialMatrix> rho;
  std::size_t pairs_checked = 0;
  /// Index into `transversal` of the H-class of f.
  std::size_t own_block = 0;

  AlgebraPtr k_hf, matrices, ks;

  std::size_t n() const { return transversal.size(); }

  AlgebraElement matrix_of(const MonomialMatrix& m) const {
    AlgebraElement out(matrices);
    for (std::size_t j = 0; j < m.n; ++j)
      if (m.column[j]) {
        auto [i, h] = *m.column[j];
        out.add(matrix_basis_index(m.n, k_hf->dim(), i, j, h), Gaussian(1));
      }
    return out;
  }

  /// Linear extension KS -> M_n(K H_f).
  AlgebraElement image(const AlgebraElement& x) const {
    require(x.algebra() == ks, "element is not in the semigroup algebra of this representation");
    AlgebraElement out(matrices);
    for (const auto& [s, c] : x.coeffs()) out = out + c * matrix_of(rho[s]);
    return out;
  }
};

/// Builds rho(s)_{ij} = h when s x_j = x_i h with h in H_f, and checks
/// rho(st) = rho(s) rho(t) on every pair. When the J-class of f has fewer
/// L-classes than R-classes and `allow_opposite` is set, the construction runs
/// on S^op instead.
inline SchutzenbergerRep schutzenberger_rep(const FiniteSemigroup& s0, Index f, bool allow_opposite = true) {
  require(f < s0.size(), "idempotent index out of range");
  require(s0.is_idempotent(f), "schutzenberger_rep needs an idempotent, got " + s0.label(f));
  SchutzenbergerRep rep;
  {
    auto g0 = green(s0);
    const Index jc = g0.J.class_of[f];
    std::set<Index> rs, ls;
    for (Index a : g0.J.classes[jc]) {
      rs.insert(g0.R.class_of[a]);
      ls.insert(g0.L.class_of[a]);
    }
    rep.opposite = allow_opposite && ls.size() < rs.size();
    rep.semigroup = rep.opposite ? s0.opposite() : s0;
    rep.green = rep.opposite ? green(rep.semigroup) : std::move(g0);
  }
  const auto& s = rep.semigroup;
  const auto& g = rep.green;
  rep.f = f;
  rep.j_class = g.J.class_of[f];
  {
    std::set<Index> rs, ls;
    for (Index a : g.J.classes[rep.j_class]) {
      rs.insert(g.R.class_of[a]);
      ls.insert(g.L.class_of[a]);
    }
    rep.r_classes = rs.size();
    rep.l_classes = ls.size();
  }
  rep.hf = h_class_group(s, g, f);

  // Transversal of L_f: least element per H-class.
  const auto& lf = g.L.classes[g.L.class_of[f]];
  std::map<Index, Index> least_in_h;
  for (Index a : lf) least_in_h.emplace(g.H.class_of[a], a);  // lf is sorted, so first wins
  for (auto [h, a] : least_in_h) rep.transversal.push_back(a);
  std::sort(rep.transversal.begin(), rep.transversal.end());
  ensure(rep.transversal.size() == rep.r_classes, "L_f does not meet every R-class of J once");
  std::map<Index, std::size_t> row_of_r;
  for (std::size_t i = 0; i < rep.transversal.size(); ++i) {
    row_of_r.emplace(g.R.class_of[rep.transversal[i]], i);
    if (g.H.same(rep.transversal[i], f)) rep.own_block = i;
  }

  // Freeness: x_i H_f covers each H-class of L_f bijectively.
  std::map<Index, std::pair<std::size_t, Index>> coord;  // element of L_f -> (i, h)
  for (std::size_t i = 0; i < rep.transversal.size(); ++i)
    for (Index h = 0; h < rep.hf.elements.size(); ++h) {
      Index y = s.mul(rep.transversal[i], rep.hf.elements[h]);
      ensure(g.H.same(y, rep.transversal[i]), "x_i h left the H-class of x_i");
      ensure(coord.emplace(y, std::make_pair(i, h)).second, "H_f does not act freely on L_f");
    }
  ensure(coord.size() == lf.size(), "x_i H_f does not cover L_f");

  const Index lf_class = g.L.class_of[f];
  for (Index a = 0; a < s.size(); ++a) {
    MonomialMatrix m{rep.n(), std::vector<std::optional<std::pair<Index, Index>>>(rep.n())};
    for (std::size_t j = 0; j < rep.n(); ++j) {
      Index y = s.mul(a, rep.transversal[j]);
      if (g.L.class_of[y] != lf_class) {
        ensure(g.J.class_of[y] != rep.j_class, "s x_j stayed in J but left L_f");
        continue;
      }
      m.column[j] = coord.at(y);
    }
    rep.rho.push_back(std::move(m));
  }

  for (Index a = 0; a < s.size(); ++a)
    for (Index b = 0; b < s.size(); ++b) {
      ensure(rep.rho[s.mul(a, b)] == monomial_product(rep.hf.group, rep.rho[a], rep.rho[b]),
             "rho(st) != rho(s) rho(t) at s=" + s.label(a) + ", t=" + s.label(b));
      ++rep.pairs_checked;
    }

  // H_f acts faithfully on the 1x1 block of its own H-class.
  std::set<Index> block_entries;
  for (Index h = 0; h < rep.hf.elements.size(); ++h) {
    const auto& c = rep.rho[rep.hf.elements[h]].column[rep.own_block];
    ensure(c.has_value() && c->first == rep.own_block, "H_f leaves its own block");
    block_entries.insert(c->second);
  }
  ensure(block_entries.size() == rep.hf.elements.size(), "H_f block is not faithful");

  rep.k_hf = semigroup_algebra(rep.hf.group, "KH");
  rep.matrices = matrix_algebra(rep.k_hf, rep.n());
  rep.ks = semigroup_algebra(s, "KS");
  return rep;
}

/// Action of x in KS on the span of `module` (elements of L_f or J): s.y = sy
/// when sy stays in the set, else 0. True when every basis vector dies.
inline bool annihilates(const FiniteSemigroup& s, const AlgebraElement& x, const std::vector<Index>& module) {
  std::set<Index> in(module.begin(), module.end());
  for (Index y : module) {
    std::map<Index, Gaussian> acc;
    for (const auto& [a, c] : x.coeffs()) {
      Index z = s.mul(a, y);
      if (in.count(z)) acc[z] += c;
    }
    for (const auto& [z, c] : acc)
      if (!c.is_zero()) return false;
  }
  return true;
}

struct KernelCheck {
  bool rho_zero = false;
  bool kills_lf = false;
  bool kills_j = false;
  bool agree() const { return rho_zero == kills_lf && kills_lf == kills_j; }
};

/// rho(x) = 0 versus x annihilating K L_f and K J, evaluated independently.
inline KernelCheck rep_kernel_check(const SchutzenbergerRep& rep, const AlgebraElement& x) {
  KernelCheck k;
  k.rho_zero = rep.image(x).is_zero();
  k.kills_lf = annihilates(rep.semigroup, x, rep.green.L.classes[rep.green.L.class_of[rep.f]]);
  k.kills_j = annihilates(rep.semigroup, x, rep.green.J.classes[rep.j_class]);
  return k;
}

struct AppendixEntry {
  Index j_class = 0;
  std::vector<Index> elements;
  std::size_t r_classes = 0, l_classes = 0;
  Index idempotent = 0;
  std::size_t subgroup_order = 0;
  bool opposite = false;
  std::size_t rep_dimension = 0;
  std::size_t pairs_checked = 0;
  std::size_t ideal_complement_size = 0;
};

struct AppendixVerdict {
  std::vector<AppendixEntry> regular;
  std::vector<Index> null_classes;
  std::vector<std::size_t> subgroup_orders() const {
    std::vector<std::size_t> out;
    for (const auto& e : regular) out.push_back(e.subgroup_order);
    return out;
  }
  /// Finite regular J-classes always have finitely many R- and L-classes, so
  /// KS is stably finite iff K H is for every listed maximal subgroup H.
  std::string reduction() const {
    std::string s = "KS stably finite iff KH stably finite for H in {";
    for (std::size_t i = 0; i < regular.size(); ++i) s += (i ? ", " : "") + std::string("order ") + std::to_string(regular[i].subgroup_order);
    return s + "}";
  }
  static constexpr const char* kBootstrapNote =
      "matrix-level reduction: R[S x B_n] = M_n(RS) x RS; not materialized";
};

inline AppendixVerdict appendix_verdict(const FiniteSemigroup& s) {
  const auto g = green(s);
  AppendixVerdict v;
  for (const auto& info : j_class_classify(s, g)) {
    if (!info.regular) {
      v.null_classes.push_back(info.j_class);
      continue;
    }
    AppendixEntry e;
    e.j_class = info.j_class;
    e.elements = g.J.classes[info.j_class];
    e.r_classes = info.r_classes;
    e.l_classes = info.l_classes;
    Index f = kNoIndex;
    for (Index a : e.elements)
      if (s.is_idempotent(a)) {
        f = a;
        break;
      }
    ensure(f != kNoIndex, "regular J-class without idempotent");
    e.idempotent = f;
    auto rep = schutzenberger_rep(s, f);
    e.subgroup_order = rep.hf.elements.size();
    e.opposite = rep.opposite;
    e.rep_dimension = rep.n();
    e.pairs_checked = rep.pairs_checked;
    e.ideal_complement_size = ideal_complement(s, g, info.j_class).size();
    v.regular.push_back(std::move(e));
  }
  return v;
}

}  // namespace finitude
