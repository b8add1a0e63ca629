#pragma once

// JSON ingestion and emission. Numbers are exact: a rational is [num, den]
// and a Gaussian rational is [re_num, re_den, im_num, im_den]; integers too
// large for 64 bits are written as decimal strings.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "finitude/algebra.hpp"
#include "finitude/catalog.hpp"
#include "finitude/errors.hpp"
#include "finitude/groupoid.hpp"
#include "finitude/leavitt.hpp"
#include "finitude/mean_trace.hpp"
#include "finitude/semigroup.hpp"

namespace finitude::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars

inline json integer(const mpz_class& z) {
  if (z.fits_slong_p()) return json(z.get_si());
  return json(z.get_str());
}

inline mpz_class parse_integer(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
  if (j.is_string()) {
    mpz_class z;
    require(z.set_str(j.get<std::string>(), 10) == 0, "malformed integer '" + j.get<std::string>() + "'");
    return z;
  }
  throw precondition_error("expected an integer, got " + j.dump());
}

inline json rational(const Rational& q) { return json::array({integer(q.get_num()), integer(q.get_den())}); }

inline Rational make_q(const mpz_class& num, const mpz_class& den) {
  require(den != 0, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Accepts [num, den], an integer, or a string "num/den".
inline Rational parse_rational(const json& j) {
  if (j.is_array()) {
    require(j.size() == 2, "rational must be [num, den]");
    return make_q(parse_integer(j[0]), parse_integer(j[1]));
  }
  if (j.is_string()) {
    Rational q;
    require(q.set_str(j.get<std::string>(), 10) == 0, "malformed rational '" + j.get<std::string>() + "'");
    require(q.get_den() != 0, "zero denominator");
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(j));
}

inline json gaussian(const Gaussian& z) {
  return json::array({integer(z.re().get_num()), integer(z.re().get_den()), integer(z.im().get_num()),
                      integer(z.im().get_den())});
}

/// Accepts [rn, rd, in, id], a rational, or an integer.
inline Gaussian parse_gaussian(const json& j) {
  if (j.is_array() && j.size() == 4)
    return Gaussian(make_q(parse_integer(j[0]), parse_integer(j[1])), make_q(parse_integer(j[2]), parse_integer(j[3])));
  return Gaussian(parse_rational(j));
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_text(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw precondition_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw precondition_error("malformed JSON in " + origin + ": " + e.what());
  }
}

template <class T>
T get(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw precondition_error(std::string("bad value for '") + key + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Semigroups

inline FiniteSemigroup parse_semigroup(const json& j, std::size_t max_size = kDefaultMaxSemigroupSize) {
  require(j.is_object(), "semigroup JSON must be an object");
  const auto kind = get<std::string>(j, "kind");
  if (kind == "partial_bijections") {
    const int degree = get<int>(j, "degree");
    require(degree >= 1, "degree must be positive");
    std::vector<PartialBijection> gens;
    for (const auto& g : j.at("generators")) {
      require(g.is_array() && static_cast<int>(g.size()) == degree, "generator length differs from degree");
      std::vector<int> m;
      for (const auto& x : g) m.push_back(x.is_null() ? -1 : x.get<int>());
      gens.emplace_back(std::move(m));
    }
    return closure(gens, max_size).base();
  }
  if (kind == "table") {
    auto labels = get<std::vector<std::string>>(j, "labels");
    require(labels.size() <= max_size, "semigroup exceeds the size limit");
    auto table = get<std::vector<std::vector<Index>>>(j, "table");
    std::optional<std::vector<Index>> star;
    if (j.contains("star") && !j.at("star").is_null()) star = get<std::vector<Index>>(j, "star");
    return FiniteSemigroup::from_table(std::move(labels), table, std::move(star));
  }
  if (kind == "catalog") {
    const auto name = get<std::string>(j, "name");
    const int n = j.contains("n") ? get<int>(j, "n") : 0;
    if (name == "brandt") return catalog::brandt(n).base();
    if (name == "symmetric_inverse") return catalog::symmetric_inverse_monoid(n).base();
    if (name == "symmetric_group") return catalog::symmetric_group(n).base();
    if (name == "cyclic") return catalog::cyclic_group(n).base();
    if (name == "chain") return catalog::chain(n).base();
    if (name == "full_transformation") return catalog::full_transformation_monoid(n);
    if (name == "null") return catalog::null_semigroup();
    if (name == "left_zero") return catalog::left_zero_semigroup();
    throw precondition_error("unknown catalog semigroup '" + name + "'");
  }
  throw precondition_error("unknown semigroup kind '" + kind + "'");
}

/// Index by label, or by integer position.
inline Index element_ref(const FiniteSemigroup& s, const json& j) {
  if (j.is_number_integer()) {
    auto i = j.get<long long>();
    require(i >= 0 && static_cast<std::size_t>(i) < s.size(), "element index out of range");
    return static_cast<Index>(i);
  }
  auto label = j.get<std::string>();
  auto i = s.find(label);
  require(i.has_value(), "unknown element '" + label + "'");
  return *i;
}

// ---------------------------------------------------------------------------
// Groupoids

inline FiniteGroupoid parse_groupoid(const json& j, std::size_t max_size = kDefaultMaxSemigroupSize) {
  require(j.is_object(), "groupoid JSON must be an object");
  if (j.contains("universal_of")) {
    auto s = validate_inverse(parse_semigroup(j.at("universal_of"), max_size));
    return universal_groupoid(s);
  }
  if (j.contains("pair")) return pair_groupoid(get<std::size_t>(j, "pair"));
  RawGroupoid raw;
  raw.objects = get<std::size_t>(j, "objects");
  for (const auto& a : j.at("arrows")) raw.arrows.emplace_back(get<Index>(a, "dom"), get<Index>(a, "ran"));
  for (const auto& c : j.at("compose")) {
    require(c.is_array() && c.size() == 3, "compose entries must be [a, b, c]");
    raw.compose.emplace_back(c[0].get<Index>(), c[1].get<Index>(), c[2].get<Index>());
  }
  if (j.contains("object_labels")) raw.object_labels = get<std::vector<std::string>>(j, "object_labels");
  if (j.contains("arrow_labels")) raw.arrow_labels = get<std::vector<std::string>>(j, "arrow_labels");
  return validate_groupoid(raw);
}

inline json groupoid_json(const FiniteGroupoid& g) {
  json arrows = json::array(), compose = json::array();
  for (Index a = 0; a < g.arrow_count(); ++a) arrows.push_back({{"dom", g.dom(a)}, {"ran", g.ran(a)}});
  for (Index a = 0; a < g.arrow_count(); ++a)
    for (Index b = 0; b < g.arrow_count(); ++b)
      if (g.composable(a, b)) compose.push_back({a, b, g.compose(a, b)});
  json out;
  out["objects"] = g.object_count();
  out["arrows"] = arrows;
  out["compose"] = compose;
  json ol = json::array(), al = json::array();
  for (Index x = 0; x < g.object_count(); ++x) ol.push_back(g.object_label(x));
  for (Index a = 0; a < g.arrow_count(); ++a) al.push_back(g.arrow_label(a));
  out["object_labels"] = ol;
  out["arrow_labels"] = al;
  return out;
}

/// {"weights": [["x", num, den], ...]}; x is an object label or index.
inline InvariantMean parse_weights(const json& j, const FiniteGroupoid& g) {
  InvariantMean mu{std::vector<Rational>(g.object_count())};
  std::vector<char> seen(g.object_count(), 0);
  for (const auto& w : j.at("weights")) {
    require(w.is_array() && w.size() == 3, "weight entries must be [object, num, den]");
    Index x = kNoIndex;
    if (w[0].is_number_integer()) {
      x = w[0].get<Index>();
    } else {
      for (Index y = 0; y < g.object_count(); ++y)
        if (g.object_label(y) == w[0].get<std::string>()) x = y;
    }
    require(x < g.object_count(), "unknown object " + w[0].dump());
    require(!seen[x], "object " + w[0].dump() + " weighted twice");
    seen[x] = 1;
    mu.weight[x] = make_q(parse_integer(w[1]), parse_integer(w[2]));
    require(sgn(mu.weight[x]) >= 0, "negative weight for " + w[0].dump());
  }
  return mu;
}

inline json weights_json(const InvariantMean& mu, const FiniteGroupoid& g) {
  json out = json::array();
  for (Index x = 0; x < g.object_count(); ++x)
    out.push_back({g.object_label(x), integer(mu.weight[x].get_num()), integer(mu.weight[x].get_den())});
  return out;
}

// ---------------------------------------------------------------------------
// Algebra elements

/// [["label", scalar], ...] against the basis labels of `a`.
inline AlgebraElement parse_coeffs(const json& j, const AlgebraPtr& a) {
  AlgebraElement out(a);
  require(j.is_array(), "coefficients must be a list of [label, scalar]");
  for (const auto& t : j) {
    require(t.is_array() && t.size() == 2, "coefficient entries must be [label, scalar]");
    auto label = t[0].get<std::string>();
    auto i = a->find(label);
    require(i.has_value(), "unknown basis label '" + label + "' in " + a->name());
    out.add(*i, parse_gaussian(t[1]));
  }
  return out;
}

inline json coeffs_json(const AlgebraElement& x) {
  json out = json::array();
  for (const auto& [i, c] : x.coeffs()) out.push_back({x.algebra()->label(i), gaussian(c)});
  return out;
}

// ---------------------------------------------------------------------------
// Graphs

struct GraphInput {
  DirectedGraph graph;
  std::optional<std::vector<Index>> x;
};

inline GraphInput parse_graph(const json& j) {
  require(j.is_object(), "graph JSON must be an object");
  auto vertices = get<std::vector<std::string>>(j, "vertices");
  std::vector<Edge> edges;
  auto vertex = [&](const std::string& name) {
    for (Index v = 0; v < vertices.size(); ++v)
      if (vertices[v] == name) return v;
    throw precondition_error("unknown vertex '" + name + "'");
  };
  for (const auto& e : j.at("edges"))
    edges.push_back(Edge{get<std::string>(e, "name"), vertex(get<std::string>(e, "dom")), vertex(get<std::string>(e, "ran"))});
  GraphInput in;
  in.graph = DirectedGraph::make(vertices, std::move(edges));
  if (j.contains("X") && !j.at("X").is_null()) {
    in.x.emplace();
    for (const auto& v : j.at("X")) in.x->push_back(vertex(v.get<std::string>()));
  }
  return in;
}

inline json graph_json(const DirectedGraph& g, const std::optional<std::vector<Index>>& x = std::nullopt) {
  json out;
  out["vertices"] = g.vertices();
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"name", e.name}, {"dom", g.vertex(e.dom)}, {"ran", g.vertex(e.ran)}});
  out["edges"] = edges;
  if (x) {
    json xs = json::array();
    for (Index v : *x) xs.push_back(g.vertex(v));
    out["X"] = xs;
  }
  return out;
}

inline CohnElement parse_cohn(const json& j, const CohnContextPtr& ctx) {
  require(j.is_array(), "coefficients must be a list of [monomial, scalar]");
  std::vector<std::pair<std::optional<Monomial>, Gaussian>> expr;
  for (const auto& t : j) {
    require(t.is_array() && t.size() == 2, "coefficient entries must be [monomial, scalar]");
    expr.emplace_back(parse_monomial(ctx->graph(), t[0].get<std::string>()), parse_gaussian(t[1]));
  }
  return cohn_reduce(ctx, expr);
}

inline json cohn_json(const CohnElement& x) {
  json out = json::array();
  for (const auto& [m, c] : x.terms()) out.push_back({monomial_string(x.context()->graph(), m), gaussian(c)});
  return out;
}

}  // namespace finitude::io
