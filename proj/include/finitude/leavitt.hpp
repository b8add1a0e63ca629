#pragma once

// Directed graphs, the graph inverse semigroup P_E, relative Cohn algebras
// C^X(E) in a special-edge normal form, and the path groupoid G_{E,X} for
// no-exit graphs whose cycle vertices all lie in X.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "finitude/algebra.hpp"
#include "finitude/detail/scc.hpp"
#include "finitude/errors.hpp"
#include "finitude/linalg.hpp"
#include "finitude/scalar.hpp"

namespace finitude {

// ---------------------------------------------------------------------------
// Graphs and paths

struct Edge {
  std::string name;
  Index dom = 0;
  Index ran = 0;
};

class DirectedGraph {
 public:
  DirectedGraph() = default;

  static DirectedGraph make(std::vector<std::string> vertices, std::vector<Edge> edges) {
    auto valid_name = [](const std::string& s) {
      return !s.empty() && s.find_first_of(" .*()\t\n") == std::string::npos;
    };
    DirectedGraph g;
    std::set<std::string> seen;
    for (const auto& v : vertices) {
      require(valid_name(v), "invalid vertex name '" + v + "' (no spaces, '.', '*', '(' or ')')");
      require(seen.insert(v).second, "duplicate vertex name '" + v + "'");
    }
    for (const auto& e : edges) {
      require(valid_name(e.name), "invalid edge name '" + e.name + "' (no spaces, '.', '*', '(' or ')')");
      require(seen.insert(e.name).second, "edge name '" + e.name + "' repeats a vertex or edge name");
      require(e.dom < vertices.size() && e.ran < vertices.size(), "edge '" + e.name + "' has an unknown endpoint");
    }
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(edges);
    g.out_.assign(g.vertices_.size(), {});
    for (Index e = 0; e < g.edges_.size(); ++e) g.out_[g.edges_[e].dom].push_back(e);
    for (auto& lst : g.out_)
      std::sort(lst.begin(), lst.end(), [&g](Index a, Index b) { return g.edges_[a].name < g.edges_[b].name; });
    return g;
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex(Index v) const { return vertices_[v]; }
  const Edge& edge(Index e) const { return edges_[e]; }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Out-edges of v ordered by edge name.
  const std::vector<Index>& out_edges(Index v) const { return out_[v]; }
  std::size_t out_degree(Index v) const { return out_[v].size(); }

  std::optional<Index> find_vertex(const std::string& name) const {
    for (Index v = 0; v < vertices_.size(); ++v)
      if (vertices_[v] == name) return v;
    return std::nullopt;
  }
  std::optional<Index> find_edge(const std::string& name) const {
    for (Index e = 0; e < edges_.size(); ++e)
      if (edges_[e].name == name) return e;
    return std::nullopt;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> out_;
};

/// Vertices that emit at least one edge.
inline std::vector<Index> regular_vertices(const DirectedGraph& g) {
  std::vector<Index> out;
  for (Index v = 0; v < g.vertex_count(); ++v)
    if (g.out_degree(v) > 0) out.push_back(v);
  return out;
}

/// A path: the empty path at `base`, or consecutive edges starting at `base`.
struct Path {
  Index base = 0;
  std::vector<Index> edges;

  std::size_t length() const { return edges.size(); }
  friend auto operator<=>(const Path&, const Path&) = default;
  friend bool operator==(const Path&, const Path&) = default;
};

inline Path vertex_path(Index v) { return Path{v, {}}; }

inline Path edge_path(const DirectedGraph& g, Index e) { return Path{g.edge(e).dom, {e}}; }

inline Index path_ran(const DirectedGraph& g, const Path& p) {
  return p.edges.empty() ? p.base : g.edge(p.edges.back()).ran;
}

inline Path make_path(const DirectedGraph& g, Index base, std::vector<Index> edges) {
  Index at = base;
  for (Index e : edges) {
    require(e < g.edge_count() && g.edge(e).dom == at, "edges do not form a path");
    at = g.edge(e).ran;
  }
  return Path{base, std::move(edges)};
}

/// When q is a prefix of r, the remainder u with r = q u.
inline std::optional<Path> strip_prefix(const DirectedGraph& g, const Path& q, const Path& r) {
  if (q.base != r.base || q.edges.size() > r.edges.size()) return std::nullopt;
  if (!std::equal(q.edges.begin(), q.edges.end(), r.edges.begin())) return std::nullopt;
  return Path{path_ran(g, q), std::vector<Index>(r.edges.begin() + static_cast<std::ptrdiff_t>(q.edges.size()), r.edges.end())};
}

inline Path concat(const DirectedGraph& g, const Path& p, const Path& u) {
  ensure(path_ran(g, p) == u.base, "concatenating non-composable paths");
  Path out = p;
  out.edges.insert(out.edges.end(), u.edges.begin(), u.edges.end());
  return out;
}

inline std::string path_string(const DirectedGraph& g, const Path& p) {
  if (p.edges.empty()) return g.vertex(p.base);
  std::string s;
  for (Index e : p.edges) {
    if (!s.empty()) s += ".";
    s += g.edge(e).name;
  }
  return s;
}

/// All paths of length <= max_len, by length, then base, then edges.
inline std::vector<Path> paths_up_to(const DirectedGraph& g, std::size_t max_len) {
  std::vector<Path> out;
  for (Index v = 0; v < g.vertex_count(); ++v) out.push_back(vertex_path(v));
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Index e : g.out_edges(path_ran(g, out[i]))) {
        Path p = out[i];
        p.edges.push_back(e);
        out.push_back(std::move(p));
      }
    begin = end;
  }
  std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a < b;
  });
  return out;
}

// ---------------------------------------------------------------------------
// No-exit decision

struct ExitWitness {
  Index vertex = 0;
  Path cycle;       // closed path starting and ending at `vertex`
  Index exit_edge = 0;  // out-edge of `vertex` other than the cycle's first edge
};

struct NoExitResult {
  bool no_exit = true;
  std::optional<ExitWitness> witness;
};

/// Vertices lying on some cycle (nontrivial SCC or a loop).
inline std::vector<char> cycle_vertices(const DirectedGraph& g) {
  std::vector<std::vector<std::uint32_t>> adj(g.vertex_count());
  for (const auto& e : g.edges()) adj[e.dom].push_back(e.ran);
  auto comp = detail::strongly_connected_components(adj);
  std::vector<std::size_t> comp_size(g.vertex_count() + 1, 0);
  for (auto c : comp) ++comp_size[c];
  std::vector<char> on(g.vertex_count(), 0);
  for (Index v = 0; v < g.vertex_count(); ++v) on[v] = comp_size[comp[v]] > 1;
  for (const auto& e : g.edges())
    if (e.dom == e.ran) on[e.dom] = 1;
  return on;
}

/// No-exit iff every vertex on a cycle has out-degree exactly 1. Otherwise
/// the least offending vertex, a cycle through it and an exiting edge.
inline NoExitResult is_no_exit(const DirectedGraph& g) {
  auto on = cycle_vertices(g);
  for (Index v = 0; v < g.vertex_count(); ++v) {
    if (!on[v] || g.out_degree(v) == 1) continue;
    // Breadth-first search for the shortest return path to v, first edges in name order.
    std::vector<std::optional<Path>> best(g.vertex_count());
    std::vector<Path> frontier;
    std::optional<Path> cycle;
    for (Index e : g.out_edges(v)) {
      Path p{v, {e}};
      if (g.edge(e).ran == v) {
        cycle = p;
        break;
      }
      if (!best[g.edge(e).ran]) {
        best[g.edge(e).ran] = p;
        frontier.push_back(p);
      }
    }
    while (!cycle && !frontier.empty()) {
      std::vector<Path> next;
      for (const auto& p : frontier) {
        for (Index e : g.out_edges(path_ran(g, p))) {
          Path q = p;
          q.edges.push_back(e);
          if (g.edge(e).ran == v) {
            cycle = q;
            break;
          }
          if (!best[g.edge(e).ran]) {
            best[g.edge(e).ran] = q;
            next.push_back(q);
          }
        }
        if (cycle) break;
      }
      frontier = std::move(next);
    }
    ensure(cycle.has_value(), "cycle vertex without a return path");
    Index exit = kNoIndex;
    for (Index e : g.out_edges(v))
      if (e != cycle->edges.front()) {
        exit = e;
        break;
      }
    ensure(exit != kNoIndex, "vertex with out-degree >= 2 has no second edge");
    return {false, ExitWitness{v, *cycle, exit}};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Graph inverse semigroup P_E

/// pq* with ran(p) = ran(q). ZERO is represented by an empty optional.
struct Monomial {
  Path p, q;

  std::size_t length() const { return p.length() + q.length(); }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Total length first, then p, then q.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.length() != b.length()) return a.length() < b.length();
    return std::tie(a.p, a.q) < std::tie(b.p, b.q);
  }
};

inline Monomial make_monomial(const DirectedGraph& g, Path p, Path q) {
  require(path_ran(g, p) == path_ran(g, q), "pq* needs ran(p) = ran(q)");
  return Monomial{std::move(p), std::move(q)};
}

inline Monomial vertex_monomial(Index v) { return Monomial{vertex_path(v), vertex_path(v)}; }

/// (pq*)(rs*) = (pu)s* if r = qu;  p(su)* if q = ru;  ZERO otherwise.
inline std::optional<Monomial> pe_multiply(const DirectedGraph& g, const std::optional<Monomial>& a,
                                           const std::optional<Monomial>& b) {
  if (!a || !b) return std::nullopt;
  if (auto u = strip_prefix(g, a->q, b->p)) return Monomial{concat(g, a->p, *u), b->q};
  if (auto u = strip_prefix(g, b->p, a->q)) return Monomial{a->p, concat(g, b->q, *u)};
  return std::nullopt;
}

/// The partial bijection qx |-> px.
inline std::optional<Path> apply_monomial(const DirectedGraph& g, const std::optional<Monomial>& m, const Path& x) {
  if (!m) return std::nullopt;
  auto u = strip_prefix(g, m->q, x);
  if (!u) return std::nullopt;
  return concat(g, m->p, *u);
}

inline Monomial monomial_star(const Monomial& m) { return Monomial{m.q, m.p}; }

inline std::string monomial_string(const DirectedGraph& g, const Monomial& m) {
  if (m.q.edges.empty()) return path_string(g, m.p);
  std::string qs = m.q.edges.size() == 1 ? path_string(g, m.q) + "*" : "(" + path_string(g, m.q) + ")*";
  if (m.p.edges.empty()) return qs;
  return path_string(g, m.p) + " " + qs;
}

namespace detail {
inline Path parse_path(const DirectedGraph& g, const std::string& s) {
  if (auto v = g.find_vertex(s)) return vertex_path(*v);
  std::vector<Index> edges;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t dot = s.find('.', start);
    std::string name = s.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    auto e = g.find_edge(name);
    require(e.has_value(), "unknown edge '" + name + "' in path '" + s + "'");
    edges.push_back(*e);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  const Index base = g.edge(edges.front()).dom;
  return make_path(g, base, std::move(edges));
}
}  // namespace detail

/// Inverse of monomial_string: "v", "e.f", "e*", "(e.f)*", "e.f (g.h)*".
inline Monomial parse_monomial(const DirectedGraph& g, const std::string& label) {
  std::string p_part, q_part;
  auto sp = label.find(' ');
  if (sp != std::string::npos) {
    p_part = label.substr(0, sp);
    q_part = label.substr(sp + 1);
  } else if (!label.empty() && label.back() == '*') {
    q_part = label;
  } else {
    p_part = label;
  }
  std::optional<Path> q;
  if (!q_part.empty()) {
    require(q_part.back() == '*', "malformed monomial '" + label + "'");
    std::string inner = q_part.substr(0, q_part.size() - 1);
    if (!inner.empty() && inner.front() == '(') {
      require(inner.back() == ')', "malformed monomial '" + label + "'");
      inner = inner.substr(1, inner.size() - 2);
    }
    q = detail::parse_path(g, inner);
  }
  if (p_part.empty()) return make_monomial(g, vertex_path(path_ran(g, *q)), *q);
  Path p = detail::parse_path(g, p_part);
  if (!q) return make_monomial(g, p, vertex_path(path_ran(g, p)));
  return make_monomial(g, std::move(p), std::move(*q));
}

// ---------------------------------------------------------------------------
// Relative Cohn algebras

class CohnContext {
 public:
  /// X defaults to the regular vertices (the Leavitt case); gamma(v) defaults
  /// to the out-edge of v with least name.
  static std::shared_ptr<const CohnContext> make(DirectedGraph g, std::optional<std::vector<Index>> x = std::nullopt,
                                                 std::map<Index, Index> gamma = {}) {
    auto c = std::shared_ptr<CohnContext>(new CohnContext());
    c->graph_ = std::move(g);
    const auto& G = c->graph_;
    std::vector<Index> xs = x ? *x : regular_vertices(G);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    c->in_x_.assign(G.vertex_count(), 0);
    c->gamma_.assign(G.vertex_count(), kNoIndex);
    for (Index v : xs) {
      require(v < G.vertex_count(), "X names an unknown vertex");
      require(G.out_degree(v) > 0, "X contains the non-regular vertex " + G.vertex(v));
      c->in_x_[v] = 1;
      c->gamma_[v] = G.out_edges(v).front();
    }
    for (auto [v, e] : gamma) {
      require(v < G.vertex_count() && c->in_x_[v], "special edge given for a vertex outside X");
      require(e < G.edge_count() && G.edge(e).dom == v, "special edge is not an edge out of " + G.vertex(v));
      c->gamma_[v] = e;
    }
    c->x_ = std::move(xs);
    return c;
  }

  const DirectedGraph& graph() const { return graph_; }
  const std::vector<Index>& x() const { return x_; }
  bool in_x(Index v) const { return in_x_[v] != 0; }
  /// Special edge at v, or kNoIndex outside X.
  Index gamma(Index v) const { return gamma_[v]; }

  /// pq* is reducible iff p, q end in the same special edge.
  bool is_normal(const Monomial& m) const {
    if (m.p.edges.empty() || m.q.edges.empty()) return true;
    Index e = m.p.edges.back();
    if (e != m.q.edges.back()) return true;
    Index v = graph_.edge(e).dom;
    return !(in_x(v) && gamma_[v] == e);
  }

 private:
  CohnContext() = default;
  DirectedGraph graph_;
  std::vector<Index> x_;
  std::vector<char> in_x_;
  std::vector<Index> gamma_;
};

using CohnContextPtr = std::shared_ptr<const CohnContext>;
using MonomialTerms = std::map<Monomial, Gaussian, MonomialLess>;

enum class RewriteOrder { leftmost, rightmost };

class CohnElement;
CohnElement cohn_reduce(const CohnContextPtr& ctx, const std::vector<std::pair<std::optional<Monomial>, Gaussian>>& expr,
                        RewriteOrder order = RewriteOrder::leftmost);

/// Linear combination of normal-form monomials.
class CohnElement {
 public:
  explicit CohnElement(CohnContextPtr ctx) : ctx_(std::move(ctx)) {}

  static CohnElement monomial(const CohnContextPtr& ctx, const Monomial& m, Gaussian c = Gaussian(1)) {
    return cohn_reduce(ctx, {{m, std::move(c)}});
  }
  static CohnElement vertex(const CohnContextPtr& ctx, Index v) { return monomial(ctx, vertex_monomial(v)); }
  static CohnElement edge(const CohnContextPtr& ctx, Index e) {
    const auto& g = ctx->graph();
    return monomial(ctx, Monomial{edge_path(g, e), vertex_path(g.edge(e).ran)});
  }
  static CohnElement edge_star(const CohnContextPtr& ctx, Index e) { return edge(ctx, e).star(); }
  static CohnElement path(const CohnContextPtr& ctx, const Path& p) {
    return monomial(ctx, Monomial{p, vertex_path(path_ran(ctx->graph(), p))});
  }

  const CohnContextPtr& context() const { return ctx_; }
  const MonomialTerms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds a normal-form monomial; callers outside cohn_reduce must not pass
  /// reducible monomials.
  void add_normal(const Monomial& m, const Gaussian& c) {
    ensure(ctx_->is_normal(m), "add_normal given a reducible monomial");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  CohnElement star() const {
    CohnElement out(ctx_);
    for (const auto& [m, c] : terms_) out.add_normal(monomial_star(m), c.conj());
    return out;
  }

  CohnElement& operator+=(const CohnElement& o) {
    same(o);
    for (const auto& [m, c] : o.terms_) add_normal(m, c);
    return *this;
  }
  CohnElement& operator-=(const CohnElement& o) {
    same(o);
    for (const auto& [m, c] : o.terms_) add_normal(m, -c);
    return *this;
  }
  friend CohnElement operator+(CohnElement a, const CohnElement& b) { return a += b; }
  friend CohnElement operator-(CohnElement a, const CohnElement& b) { return a -= b; }
  friend CohnElement operator*(const Gaussian& s, const CohnElement& a) {
    CohnElement out(a.ctx_);
    for (const auto& [m, c] : a.terms_) out.add_normal(m, s * c);
    return out;
  }

  friend CohnElement operator*(const CohnElement& a, const CohnElement& b) {
    a.same(b);
    std::vector<std::pair<std::optional<Monomial>, Gaussian>> expr;
    const auto& g = a.ctx_->graph();
    for (const auto& [m1, c1] : a.terms_)
      for (const auto& [m2, c2] : b.terms_)
        if (auto m = pe_multiply(g, m1, m2)) expr.emplace_back(std::move(m), c1 * c2);
    return cohn_reduce(a.ctx_, expr);
  }

  friend bool operator==(const CohnElement& a, const CohnElement& b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const CohnElement& a, const CohnElement& b) { return !(a == b); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + finitude::to_string(c) + ")" + monomial_string(ctx_->graph(), m);
    }
    return s;
  }

 private:
  void same(const CohnElement& o) const { require(ctx_ == o.ctx_, "Cohn elements from different contexts"); }

  CohnContextPtr ctx_;
  MonomialTerms terms_;
};

/// Rewrites p'g(q'g)* -> p'q'* - sum_{e != g, dom e = v} p'e(q'e)* with
/// g = gamma(v), v in X, until no monomial is reducible. ZERO terms vanish.
inline CohnElement cohn_reduce(const CohnContextPtr& ctx,
                               const std::vector<std::pair<std::optional<Monomial>, Gaussian>>& expr,
                               RewriteOrder order) {
  const auto& g = ctx->graph();
  MonomialTerms work;
  auto push = [&work](const Monomial& m, const Gaussian& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = work.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) work.erase(it);
    }
  };
  for (const auto& [m, c] : expr) {
    if (!m) continue;
    require(path_ran(g, m->p) == path_ran(g, m->q), "pq* needs ran(p) = ran(q)");
    push(*m, c);
  }
  CohnElement out(ctx);
  while (!work.empty()) {
    auto it = order == RewriteOrder::leftmost ? work.begin() : std::prev(work.end());
    Monomial m = it->first;
    Gaussian c = it->second;
    work.erase(it);
    if (ctx->is_normal(m)) {
      out.add_normal(m, c);
      continue;
    }
    const Index special = m.p.edges.back();
    const Index v = g.edge(special).dom;
    Path p1 = m.p, q1 = m.q;
    p1.edges.pop_back();
    q1.edges.pop_back();
    push(Monomial{p1, q1}, c);
    for (Index e : g.out_edges(v)) {
      if (e == special) continue;
      Path pe = p1, qe = q1;
      pe.edges.push_back(e);
      qe.edges.push_back(e);
      push(Monomial{std::move(pe), std::move(qe)}, -c);
    }
  }
  return out;
}

/// Normal-form monomials of total length <= max_len, in MonomialLess order.
inline std::vector<Monomial> normal_monomials(const CohnContext& ctx, std::size_t max_len) {
  const auto& g = ctx.graph();
  auto paths = paths_up_to(g, max_len);
  std::vector<Monomial> out;
  for (const auto& p : paths)
    for (const auto& q : paths) {
      if (p.length() + q.length() > max_len || path_ran(g, p) != path_ran(g, q)) continue;
      Monomial m{p, q};
      if (ctx.is_normal(m)) out.push_back(std::move(m));
    }
  std::sort(out.begin(), out.end(), MonomialLess{});
  return out;
}

// ---------------------------------------------------------------------------
// Stable-finiteness verdict

struct GraphVerdict {
  NoExitResult no_exit;
  bool stably_finite = true;
  /// When an exit exists: e = v, a = p*, b = p in the Leavitt algebra.
  struct Witness {
    Index vertex = 0;
    Path cycle;
    Index exit_edge = 0;
    std::optional<CohnElement> e, a, b;
    WitnessReport report;
    bool pp_star_kills_exit = false;  // (pp*) * exit = 0
  };
  std::optional<Witness> witness;
};

inline GraphVerdict graph_verdict(const DirectedGraph& g) {
  GraphVerdict r;
  r.no_exit = is_no_exit(g);
  r.stably_finite = r.no_exit.no_exit;
  if (r.no_exit.no_exit) return r;
  const auto& w = *r.no_exit.witness;
  auto ctx = CohnContext::make(g);
  GraphVerdict::Witness wit;
  wit.vertex = w.vertex;
  wit.cycle = w.cycle;
  wit.exit_edge = w.exit_edge;
  auto v = CohnElement::vertex(ctx, w.vertex);
  auto p = CohnElement::path(ctx, w.cycle);
  wit.e = v;
  wit.a = p.star();
  wit.b = p;
  wit.report = witness_check(*wit.e, *wit.a, *wit.b);
  auto exit = CohnElement::edge(ctx, w.exit_edge);
  wit.pp_star_kills_exit = (p * p.star() * exit).is_zero() && !(v * exit).is_zero();
  ensure(wit.report.valid(), "exit witness failed witness_check");
  ensure(wit.pp_star_kills_exit, "pp* e != 0 for the exit edge e");
  r.witness = std::move(wit);
  return r;
}

// ---------------------------------------------------------------------------
// The path groupoid G_{E,X}

/// Finite unit theta_p (ran p outside X) or periodic unit q c^infinity keyed
/// by its shortest entry path q (ran q on a cycle, earlier vertices not).
struct PathUnit {
  bool periodic = false;
  Path path;
  friend auto operator<=>(const PathUnit&, const PathUnit&) = default;
  friend bool operator==(const PathUnit&, const PathUnit&) = default;
};

/// src -> dst with winding m (0 between finite units).
struct PathArrow {
  Index src = 0, dst = 0;
  std::int64_t winding = 0;
  friend auto operator<=>(const PathArrow&, const PathArrow&) = default;
  friend bool operator==(const PathArrow&, const PathArrow&) = default;
};

/// Finitely supported element of the convolution algebra of G_{E,X}.
class PathGroupoidElement {
 public:
  using Terms = std::map<PathArrow, Gaussian>;

  PathGroupoidElement() = default;
  static PathGroupoidElement arrow(const PathArrow& a, Gaussian c = Gaussian(1)) {
    PathGroupoidElement e;
    e.add(a, c);
    return e;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const PathArrow& a, const Gaussian& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(a, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  PathGroupoidElement star() const {
    PathGroupoidElement out;
    for (const auto& [a, c] : terms_) out.add(PathArrow{a.dst, a.src, -a.winding}, c.conj());
    return out;
  }

  PathGroupoidElement& operator+=(const PathGroupoidElement& o) {
    for (const auto& [a, c] : o.terms_) add(a, c);
    return *this;
  }
  PathGroupoidElement& operator-=(const PathGroupoidElement& o) {
    for (const auto& [a, c] : o.terms_) add(a, -c);
    return *this;
  }
  friend PathGroupoidElement operator+(PathGroupoidElement a, const PathGroupoidElement& b) { return a += b; }
  friend PathGroupoidElement operator-(PathGroupoidElement a, const PathGroupoidElement& b) { return a -= b; }
  friend PathGroupoidElement operator*(const Gaussian& s, const PathGroupoidElement& a) {
    PathGroupoidElement out;
    for (const auto& [x, c] : a.terms_) out.add(x, s * c);
    return out;
  }

  /// delta_(a->b, m) * delta_(c->d, n) = delta_(c->b, m+n) when d = a.
  friend PathGroupoidElement operator*(const PathGroupoidElement& x, const PathGroupoidElement& y) {
    PathGroupoidElement out;
    for (const auto& [a, c] : x.terms_)
      for (const auto& [b, d] : y.terms_)
        if (b.dst == a.src) out.add(PathArrow{b.src, a.dst, a.winding + b.winding}, c * d);
    return out;
  }

  friend bool operator==(const PathGroupoidElement&, const PathGroupoidElement&) = default;

 private:
  Terms terms_;
};

struct PathOrbit {
  std::vector<Index> units;
  bool periodic = false;
  /// Primitive cycle length; isotropy is l*Z inside the winding group.
  std::size_t cycle_length = 0;
};

class PathGroupoid {
 public:
  /// Requires a no-exit graph whose cycle vertices all lie in X.
  static PathGroupoid make(const CohnContextPtr& ctx) {
    PathGroupoid pg;
    pg.ctx_ = ctx;
    const auto& g = ctx->graph();
    auto ne = is_no_exit(g);
    if (!ne.no_exit)
      throw precondition_error("path groupoid needs a no-exit graph; vertex " + g.vertex(ne.witness->vertex) +
                               " lies on cycle " + path_string(g, ne.witness->cycle) + " with exit " +
                               g.edge(ne.witness->exit_edge).name);
    auto on = cycle_vertices(g);
    for (Index v = 0; v < g.vertex_count(); ++v)
      if (on[v] && !ctx->in_x(v))
        throw precondition_error("cycle vertex " + g.vertex(v) + " is not in X; the unit space would be infinite");

    // Cycles: follow the unique out-edge, rotate to start at the least edge index.
    pg.cycle_of_.assign(g.vertex_count(), kNoIndex);
    pg.position_.assign(g.vertex_count(), 0);
    for (Index v = 0; v < g.vertex_count(); ++v) {
      if (!on[v] || pg.cycle_of_[v] != kNoIndex) continue;
      std::vector<Index> edges;
      Index at = v;
      do {
        Index e = g.out_edges(at).front();
        edges.push_back(e);
        at = g.edge(e).ran;
      } while (at != v);
      std::rotate(edges.begin(), std::min_element(edges.begin(), edges.end()), edges.end());
      const Index id = static_cast<Index>(pg.cycles_.size());
      for (std::size_t k = 0; k < edges.size(); ++k) {
        pg.cycle_of_[g.edge(edges[k]).dom] = id;
        pg.position_[g.edge(edges[k]).dom] = k;
      }
      pg.cycles_.push_back(std::move(edges));
    }

    // Units.
    for (Index v = 0; v < g.vertex_count(); ++v) {
      std::vector<Path> stack{vertex_path(v)};
      while (!stack.empty()) {
        Path p = std::move(stack.back());
        stack.pop_back();
        Index r = path_ran(g, p);
        if (on[r]) {
          pg.units_.push_back(PathUnit{true, p});
          continue;
        }
        if (!ctx->in_x(r)) pg.units_.push_back(PathUnit{false, p});
        for (Index e : g.out_edges(r)) {
          Path q = p;
          q.edges.push_back(e);
          stack.push_back(std::move(q));
        }
      }
    }
    std::sort(pg.units_.begin(), pg.units_.end(), [](const PathUnit& a, const PathUnit& b) {
      if (a.path.length() != b.path.length()) return a.path.length() < b.path.length();
      return std::tie(a.path, a.periodic) < std::tie(b.path, b.periodic);
    });
    for (Index i = 0; i < pg.units_.size(); ++i) pg.unit_index_.emplace(pg.units_[i], i);

    // Every vertex is the start of some unit.
    for (Index v = 0; v < g.vertex_count(); ++v) {
      bool seen = std::any_of(pg.units_.begin(), pg.units_.end(), [v](const PathUnit& u) { return u.path.base == v; });
      ensure(seen, "no unit starts at vertex " + g.vertex(v));
    }

    // Orbits: finite units by range vertex, periodic units by cycle.
    std::map<std::pair<int, Index>, Index> key_to_orbit;
    pg.orbit_of_.assign(pg.units_.size(), kNoIndex);
    for (Index i = 0; i < pg.units_.size(); ++i) {
      const auto& u = pg.units_[i];
      Index r = path_ran(g, u.path);
      std::pair<int, Index> key = u.periodic ? std::make_pair(1, pg.cycle_of_[r]) : std::make_pair(0, r);
      auto [it, fresh] = key_to_orbit.emplace(key, static_cast<Index>(pg.orbits_.size()));
      if (fresh) {
        PathOrbit o;
        o.periodic = u.periodic;
        o.cycle_length = u.periodic ? pg.cycles_[pg.cycle_of_[r]].size() : 0;
        pg.orbits_.push_back(o);
      }
      pg.orbits_[it->second].units.push_back(i);
      pg.orbit_of_[i] = it->second;
    }
    return pg;
  }

  const CohnContextPtr& context() const { return ctx_; }
  const std::vector<PathUnit>& units() const { return units_; }
  const std::vector<PathOrbit>& orbits() const { return orbits_; }
  Index orbit_of(Index unit) const { return orbit_of_[unit]; }
  const std::vector<std::vector<Index>>& cycles() const { return cycles_; }

  std::optional<Index> find_unit(const PathUnit& u) const {
    auto it = unit_index_.find(u);
    if (it == unit_index_.end()) return std::nullopt;
    return it->second;
  }

  /// |q| - k for a periodic unit with entry q ending at cycle position k.
  std::int64_t height(Index unit) const {
    const auto& u = units_[unit];
    ensure(u.periodic, "height of a finite unit");
    Index r = path_ran(ctx_->graph(), u.path);
    return static_cast<std::int64_t>(u.path.length()) - static_cast<std::int64_t>(position_[r]);
  }

  bool is_arrow(const PathArrow& a) const {
    if (a.src >= units_.size() || a.dst >= units_.size() || orbit_of_[a.src] != orbit_of_[a.dst]) return false;
    const auto& o = orbits_[orbit_of_[a.src]];
    if (!o.periodic) return a.winding == 0;
    const auto l = static_cast<std::int64_t>(o.cycle_length);
    std::int64_t diff = a.winding - (height(a.dst) - height(a.src));
    return ((diff % l) + l) % l == 0;
  }

  PathArrow identity(Index unit) const { return PathArrow{unit, unit, 0}; }

  std::string unit_string(Index i) const {
    const auto& u = units_[i];
    std::string s = path_string(ctx_->graph(), u.path);
    if (!u.periodic) return s;
    Index r = path_ran(ctx_->graph(), u.path);
    std::string c;
    for (Index e : cycles_[cycle_of_[r]]) c += (c.empty() ? "" : ".") + ctx_->graph().edge(e).name;
    return (u.path.edges.empty() ? std::string() : s + ".") + "(" + c + ")^inf@" + ctx_->graph().vertex(r);
  }

  /// Image of v: identities at the units starting at v.
  PathGroupoidElement vertex_image(Index v) const {
    PathGroupoidElement out;
    for (Index i = 0; i < units_.size(); ++i)
      if (units_[i].path.base == v) out.add(identity(i), Gaussian(1));
    return out;
  }

  /// Image of pq*: for every unit theta_{qz}, the germ theta_{qz} -> theta_{pz}
  /// with winding |p| - |q| (0 on finite units).
  PathGroupoidElement monomial_image(const Monomial& m) const {
    const auto& g = ctx_->graph();
    PathGroupoidElement out;
    for (Index i = 0; i < units_.size(); ++i) {
      const auto& u = units_[i];
      if (!u.periodic) {
        auto z = strip_prefix(g, m.q, u.path);
        if (!z) continue;
        auto target = find_unit(PathUnit{false, concat(g, m.p, *z)});
        ensure(target.has_value(), "germ image of a finite unit is not a unit");
        out.add(PathArrow{i, *target, 0}, Gaussian(1));
        continue;
      }
      if (m.q.base != u.path.base) continue;
      bool prefix = true;
      for (std::size_t k = 0; k < m.q.length() && prefix; ++k) prefix = edge_at(i, k) == m.q.edges[k];
      if (!prefix) continue;
      // Walk p followed by the tail of u after |q| edges until a cycle vertex.
      auto on_cycle = [&](Index v) { return cycle_of_[v] != kNoIndex; };
      Path entry{m.p.base, {}};
      Index at = m.p.base;
      std::size_t k = 0;
      while (!on_cycle(at)) {
        Index e = k < m.p.length() ? m.p.edges[k] : edge_at(i, m.q.length() + (k - m.p.length()));
        entry.edges.push_back(e);
        at = g.edge(e).ran;
        ++k;
      }
      auto target = find_unit(PathUnit{true, entry});
      ensure(target.has_value(), "germ image of a periodic unit is not a unit");
      PathArrow a{i, *target, static_cast<std::int64_t>(m.p.length()) - static_cast<std::int64_t>(m.q.length())};
      ensure(is_arrow(a), "germ winding is outside the arrow coset");
      out.add(a, Gaussian(1));
    }
    return out;
  }

  PathGroupoidElement image(const CohnElement& x) const {
    require(x.context() == ctx_, "element from another Cohn context");
    PathGroupoidElement out;
    for (const auto& [m, c] : x.terms()) out += c * monomial_image(m);
    return out;
  }

  /// Materializes the groupoid when every unit is finite.
  std::optional<FiniteGroupoid> to_finite() const {
    for (const auto& o : orbits_)
      if (o.periodic) return std::nullopt;
    RawGroupoid raw;
    raw.objects = units_.size();
    std::map<std::pair<Index, Index>, Index> arrow_of;
    for (Index i = 0; i < units_.size(); ++i) raw.object_labels.push_back(unit_string(i));
    for (const auto& o : orbits_)
      for (Index s : o.units)
        for (Index d : o.units) {
          arrow_of.emplace(std::make_pair(s, d), static_cast<Index>(raw.arrows.size()));
          raw.arrows.emplace_back(s, d);
          raw.arrow_labels.push_back(unit_string(s) + "->" + unit_string(d));
        }
    for (const auto& [sd1, a1] : arrow_of)
      for (const auto& [sd2, a2] : arrow_of)
        if (sd2.second == sd1.first) raw.compose.emplace_back(a1, a2, arrow_of.at({sd2.first, sd1.second}));
    return validate_groupoid(raw);
  }

 private:
  /// The k-th edge of the infinite path of a periodic unit.
  Index edge_at(Index unit, std::size_t k) const {
    const auto& u = units_[unit];
    if (k < u.path.length()) return u.path.edges[k];
    Index r = path_ran(ctx_->graph(), u.path);
    const auto& c = cycles_[cycle_of_[r]];
    return c[(position_[r] + (k - u.path.length())) % c.size()];
  }

  CohnContextPtr ctx_;
  std::vector<PathUnit> units_;
  std::map<PathUnit, Index> unit_index_;
  std::vector<PathOrbit> orbits_;
  std::vector<Index> orbit_of_;
  std::vector<std::vector<Index>> cycles_;
  std::vector<Index> cycle_of_;
  std::vector<std::size_t> position_;
};

inline std::vector<PathUnit> units_enumerate(const CohnContextPtr& ctx) { return PathGroupoid::make(ctx).units(); }

// ---------------------------------------------------------------------------
// C^X(E) = K G_{E,X}

struct CohnIsoReport {
  std::size_t units = 0;
  std::size_t relations_checked = 0;
  std::size_t monomials = 0;      // normal-form monomials of length <= max_len
  std::size_t image_rank = 0;     // rank of their images
  std::size_t arrows_touched = 0;  // distinct arrows in the union of image supports
  std::size_t products_checked = 0;
  bool vertex_images_nonzero = false;
  std::optional<std::pair<std::size_t, std::size_t>> dimension_match;  // (Cohn dim, arrow count), acyclic case
  bool ok = false;
};

/// Maps generators to the groupoid algebra and verifies the defining
/// relations, nonvanishing of vertex images, linear independence of the
/// images of all normal-form monomials of length <= max_len, and
/// multiplicativity on pairs of those monomials with total length <= max_len.
/// A failed identity throws verification_error.
inline CohnIsoReport verify_cohn_groupoid_iso(const CohnContextPtr& ctx, std::size_t max_len = 6) {
  const auto& g = ctx->graph();
  auto pg = PathGroupoid::make(ctx);
  CohnIsoReport rep;
  rep.units = pg.units().size();

  std::vector<PathGroupoidElement> vimg, eimg;
  for (Index v = 0; v < g.vertex_count(); ++v) vimg.push_back(pg.vertex_image(v));
  for (Index e = 0; e < g.edge_count(); ++e) eimg.push_back(pg.monomial_image(Monomial{edge_path(g, e), vertex_path(g.edge(e).ran)}));

  auto check = [&](bool ok, const std::string& what) {
    ++rep.relations_checked;
    ensure(ok, "relation fails in the groupoid algebra: " + what);
  };
  for (Index v = 0; v < g.vertex_count(); ++v) {
    check(vimg[v] * vimg[v] == vimg[v] && vimg[v].star() == vimg[v], g.vertex(v) + " is a projection");
    for (Index w = 0; w < g.vertex_count(); ++w)
      if (w != v) check((vimg[v] * vimg[w]).is_zero(), g.vertex(v) + " " + g.vertex(w) + " = 0");
  }
  for (Index e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    check(vimg[ed.dom] * eimg[e] == eimg[e] && eimg[e] * vimg[ed.ran] == eimg[e], "dom(e) e = e = e ran(e) for " + ed.name);
    for (Index f = 0; f < g.edge_count(); ++f) {
      auto prod = eimg[e].star() * eimg[f];
      if (e == f) check(prod == vimg[ed.ran], ed.name + "* " + ed.name + " = ran");
      else check(prod.is_zero(), ed.name + "* " + g.edge(f).name + " = 0");
    }
  }
  for (Index v : ctx->x()) {
    PathGroupoidElement sum;
    for (Index e : g.out_edges(v)) sum += eimg[e] * eimg[e].star();
    check(sum == vimg[v], g.vertex(v) + " = sum ee*");
  }
  rep.vertex_images_nonzero = std::all_of(vimg.begin(), vimg.end(), [](const auto& x) { return !x.is_zero(); });
  ensure(rep.vertex_images_nonzero, "some vertex maps to zero");

  // Monomial images agree with products of generator images.
  auto monos = normal_monomials(*ctx, max_len);
  rep.monomials = monos.size();
  std::vector<PathGroupoidElement> mimg;
  for (const auto& m : monos) {
    PathGroupoidElement prod = vimg[m.p.base];
    for (Index e : m.p.edges) prod = prod * eimg[e];
    PathGroupoidElement qprod = vimg[m.q.base];
    for (Index e : m.q.edges) qprod = qprod * eimg[e];
    prod = prod * qprod.star();
    auto direct = pg.monomial_image(m);
    check(prod == direct, "image of " + monomial_string(g, m) + " matches the generator product");
    mimg.push_back(std::move(direct));
  }

  // Linear independence.
  std::map<PathArrow, std::size_t> coord;
  for (const auto& x : mimg)
    for (const auto& [a, c] : x.terms()) coord.emplace(a, coord.size());
  rep.arrows_touched = coord.size();
  linalg::Matrix<Rational> mat(mimg.size(), std::vector<Rational>(coord.size()));
  for (std::size_t i = 0; i < mimg.size(); ++i)
    for (const auto& [a, c] : mimg[i].terms()) {
      ensure(c.is_real(), "monomial image with non-real coefficient");
      mat[i][coord.at(a)] = c.re();
    }
  rep.image_rank = linalg::rank(std::move(mat));
  ensure(rep.image_rank == rep.monomials, "images of normal-form monomials are linearly dependent");

  // Multiplicativity.
  for (std::size_t i = 0; i < monos.size(); ++i)
    for (std::size_t j = 0; j < monos.size(); ++j) {
      if (monos[i].length() + monos[j].length() > max_len) continue;
      auto prod = CohnElement::monomial(ctx, monos[i]) * CohnElement::monomial(ctx, monos[j]);
      ensure(pg.image(prod) == mimg[i] * mimg[j], "image is not multiplicative at (" + monomial_string(g, monos[i]) +
                                                      ", " + monomial_string(g, monos[j]) + ")");
      ++rep.products_checked;
    }

  // Acyclic graphs: both sides are finite-dimensional.
  if (pg.cycles().empty()) {
    auto all = normal_monomials(*ctx, 2 * g.vertex_count());
    std::size_t arrows = 0;
    for (const auto& o : pg.orbits()) arrows += o.units.size() * o.units.size();
    rep.dimension_match = std::make_pair(all.size(), arrows);
    ensure(all.size() == arrows, "dimension of the Cohn algebra differs from the arrow count");
  }
  rep.ok = true;
  return rep;
}

}  // namespace finitude
