#pragma once

// Invariant means on the unit space of a finite groupoid, the traces they
// integrate to, and the inequalities relating the trace norm to the l1
// seminorm. Every norm is handled as its square so all comparisons are in Q.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finitude/algebra.hpp"
#include "finitude/detail/sampler.hpp"
#include "finitude/errors.hpp"
#include "finitude/groupoid.hpp"
#include "finitude/linalg.hpp"
#include "finitude/simplex.hpp"

namespace finitude {

inline constexpr std::size_t kDefaultMaxEll1Arrows = 16;

/// Nonnegative weight per object.
struct InvariantMean {
  std::vector<Rational> weight;

  Rational measure(const std::vector<Index>& objects) const {
    Rational s = 0;
    for (Index x : objects) s += weight[x];
    return s;
  }
  bool faithful() const {
    return std::all_of(weight.begin(), weight.end(), [](const Rational& w) { return sgn(w) > 0; });
  }
  friend bool operator==(const InvariantMean&, const InvariantMean&) = default;
};

/// Orbit i (1-based, ordered by least object) gets 1/(2^i |O_i|) per object.
inline InvariantMean canonical_mean(const FiniteGroupoid& g) {
  auto dec = orbits_and_isotropy(g);
  InvariantMean mu{std::vector<Rational>(g.object_count())};
  mpz_class pow2 = 1;
  for (const auto& o : dec.orbits) {
    pow2 *= 2;
    Rational w(mpz_class(1), pow2 * static_cast<unsigned long>(o.objects.size()));
    w.canonicalize();
    for (Index x : o.objects) mu.weight[x] = w;
  }
  return mu;
}

struct InvarianceReport {
  bool by_orbits = true;
  std::optional<bool> by_bisections;  // empty when the bisection gate was exceeded
  std::size_t bisections_checked = 0;
  /// First failing bisection (exhaustive test) and first failing arrow
  /// (orbit test: an arrow whose endpoints carry different weight).
  std::optional<Bisection> bisection_certificate;
  std::optional<Index> arrow_certificate;

  bool invariant() const { return by_orbits; }
};

/// Runs both invariance tests and requires them to agree.
inline InvarianceReport is_invariant_mean(const InvariantMean& mu, const FiniteGroupoid& g,
                                          std::size_t max_arrows = kDefaultMaxBisectionArrows) {
  require(mu.weight.size() == g.object_count(), "mean has wrong number of weights");
  for (const auto& w : mu.weight) require(sgn(w) >= 0, "mean has a negative weight");
  InvarianceReport r;
  for (Index a = 0; a < g.arrow_count() && r.by_orbits; ++a)
    if (mu.weight[g.dom(a)] != mu.weight[g.ran(a)]) {
      r.by_orbits = false;
      r.arrow_certificate = a;
    }
  if (g.arrow_count() <= max_arrows) {
    bool ok = true;
    for (const auto& u : enumerate_bisections(g, max_arrows)) {
      ++r.bisections_checked;
      std::vector<Index> d, rn;
      for (Index a : u) {
        d.push_back(g.dom(a));
        rn.push_back(g.ran(a));
      }
      if (mu.measure(d) != mu.measure(rn)) {
        ok = false;
        r.bisection_certificate = u;
        break;
      }
    }
    r.by_bisections = ok;
    ensure(ok == r.by_orbits, "bisection invariance and orbit constancy disagree");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Traces

/// Linear functional given by its values on the basis.
struct TraceFunctional {
  AlgebraPtr algebra;
  std::vector<Gaussian> value;

  Gaussian operator()(const AlgebraElement& f) const {
    require(f.algebra() == algebra, "trace applied to an element of another algebra");
    Gaussian s;
    for (const auto& [i, c] : f.coeffs()) s += c * value[i];
    return s;
  }

  TraceFunctional scaled(const Gaussian& c) const {
    TraceFunctional t{algebra, value};
    for (auto& v : t.value) v *= c;
    return t;
  }
};

/// tau(f) = sum_x f(id_x) mu(x), without checking invariance.
inline TraceFunctional functional_from_weights(const InvariantMean& mu, const FiniteGroupoid& g, const AlgebraPtr& kg) {
  require(kg->dim() == g.arrow_count(), "algebra is not the groupoid algebra");
  TraceFunctional t{kg, std::vector<Gaussian>(g.arrow_count())};
  for (Index x = 0; x < g.object_count(); ++x) t.value[g.identity(x)] = Gaussian(mu.weight[x]);
  return t;
}

inline TraceFunctional trace_from_mean(const InvariantMean& mu, const FiniteGroupoid& g, const AlgebraPtr& kg) {
  require(mu.weight.size() == g.object_count(), "mean has wrong number of weights");
  for (Index a = 0; a < g.arrow_count(); ++a)
    require(mu.weight[g.dom(a)] == mu.weight[g.ran(a)],
            "mean is not invariant across arrow " + g.arrow_label(a));
  return functional_from_weights(mu, g, kg);
}

inline InvariantMean mean_from_trace(const TraceFunctional& t, const FiniteGroupoid& g) {
  InvariantMean mu;
  for (Index x = 0; x < g.object_count(); ++x) {
    const Gaussian& v = t.value[g.identity(x)];
    require(v.is_real() && sgn(v.re()) >= 0, "trace gives object " + g.object_label(x) + " a non-positive weight");
    mu.weight.push_back(v.re());
  }
  for (Index a = 0; a < g.arrow_count(); ++a)
    ensure(mu.weight[g.dom(a)] == mu.weight[g.ran(a)], "mean recovered from a trace is not invariant");
  return mu;
}

/// tau(a b*)
inline Gaussian inner_product(const TraceFunctional& t, const AlgebraElement& a, const AlgebraElement& b) {
  return t(a * b.star());
}

/// tau(a a*), which must be a nonnegative rational for a trace.
inline Rational norm_sq(const TraceFunctional& t, const AlgebraElement& a) {
  Gaussian v = t(a * a.star());
  ensure(v.is_real(), "tau(aa*) is not real");
  return v.re();
}

struct TraceReport {
  bool t1 = true, t2 = true, t3 = true, t4 = true, formula = true, support = true;
  bool t4_by_mean = true;  // only meaningful for groupoid algebras
  std::size_t samples = 0;
  std::vector<std::string> failures;

  bool all() const { return t1 && t2 && t3 && t4 && formula && support; }
};

/// Gram matrix G_ij = tau(e_i e_j*) on the basis.
inline linalg::Matrix<Gaussian> trace_gram(const TraceFunctional& t) {
  const Index n = static_cast<Index>(t.algebra->dim());
  linalg::Matrix<Gaussian> m(n, std::vector<Gaussian>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      m[i][j] = inner_product(t, AlgebraElement::basis(t.algebra, i), AlgebraElement::basis(t.algebra, j));
  return m;
}

/// T1 on all basis pairs; T2, T3 on the basis and on `samples` random
/// elements; T4 by positive definiteness of the Gram form. With a groupoid,
/// also the pointwise identity (f f*)(id_x) = sum_{ran g = x} |f(g)|^2, the
/// support identity supp((f f*)|units) = ran(supp f), and T4 cross-checked
/// against strict positivity of the associated mean.
inline TraceReport verify_trace(const TraceFunctional& t, const FiniteGroupoid* g, std::uint64_t seed,
                                std::size_t samples = 1000) {
  TraceReport r;
  const AlgebraPtr& a = t.algebra;
  const Index n = static_cast<Index>(a->dim());
  auto note = [&](bool& flag, std::string why) {
    if (flag) r.failures.push_back(std::move(why));
    flag = false;
  };
  for (Index i = 0; i < n; ++i) {
    auto ei = AlgebraElement::basis(a, i);
    for (Index j = 0; j < n; ++j) {
      auto ej = AlgebraElement::basis(a, j);
      if (t(ei * ej) != t(ej * ei)) note(r.t1, "T1 fails at (" + a->label(i) + ", " + a->label(j) + ")");
    }
  }
  detail::Sampler rng(seed);
  std::vector<AlgebraElement> pool;
  for (Index i = 0; i < n; ++i) pool.push_back(AlgebraElement::basis(a, i));
  for (std::size_t k = 0; k < samples; ++k) pool.push_back(random_element(a, rng, 4, rng.coin(30)));
  r.samples = pool.size();
  for (const auto& f : pool) {
    if (t(f.star()) != t(f).conj()) note(r.t2, "T2 fails at " + f.to_string());
    auto ff = f * f.star();
    Gaussian v = t(ff);
    if (!v.is_real() || sgn(v.re()) < 0) note(r.t3, "T3 fails at " + f.to_string());
    if (g) {
      std::vector<Rational> expect(g->object_count());
      std::vector<char> ran_supp(g->object_count(), 0);
      for (const auto& [arrow, c] : f.coeffs()) {
        expect[g->ran(arrow)] += c.abs_squared();
        ran_supp[g->ran(arrow)] = 1;
      }
      for (Index x = 0; x < g->object_count(); ++x) {
        Gaussian got = ff.coefficient(g->identity(x));
        if (got != Gaussian(expect[x])) note(r.formula, "(f f*)(x) formula fails at " + f.to_string());
        if ((!got.is_zero()) != (ran_supp[x] != 0)) note(r.support, "support identity fails at " + f.to_string());
      }
    }
  }
  auto gram = trace_gram(t);
  r.t4 = r.t2 && r.t3 && linalg::is_hermitian(gram) && linalg::is_positive_definite(gram);
  if (!r.t4) r.failures.push_back("T4 fails: Gram form is not positive definite");
  if (g && r.t1 && r.t2 && r.t3) {
    bool positive = true;
    for (Index x = 0; x < g->object_count(); ++x) {
      const Gaussian& w = t.value[g->identity(x)];
      positive = positive && w.is_real() && sgn(w.re()) > 0;
    }
    r.t4_by_mean = positive;
    ensure(r.t4_by_mean == r.t4, "faithfulness by Gram form and by mean positivity disagree");
  }
  return r;
}

struct ContractivityReport {
  bool right = true;  // tau(as(as)*) <= tau(aa*)
  bool left = true;   // tau(sa(sa)*) <= tau(aa*)
  std::size_t spanning_elements = 0;
  std::size_t tested_elements = 0;
  std::optional<std::pair<std::string, std::string>> certificate;  // (a, s)

  bool holds() const { return right && left; }
};

/// Spanning set: arrow indicators, plus every bisection indicator when the
/// groupoid is small enough. Tested a: the basis plus `samples` random elements.
inline ContractivityReport contractivity_check(const TraceFunctional& t, const FiniteGroupoid& g, std::uint64_t seed,
                                               std::size_t samples = 50,
                                               std::size_t max_arrows = kDefaultMaxBisectionArrows) {
  const AlgebraPtr& kg = t.algebra;
  std::vector<AlgebraElement> spanning;
  for (Index a = 0; a < g.arrow_count(); ++a) spanning.push_back(AlgebraElement::basis(kg, a));
  if (g.arrow_count() <= max_arrows)
    for (const auto& u : enumerate_bisections(g, max_arrows)) {
      if (u.size() < 2) continue;  // singletons already present; the empty one is 0
      AlgebraElement ind(kg);
      for (Index a : u) ind.add(a, Gaussian(1));
      spanning.push_back(std::move(ind));
    }
  detail::Sampler rng(seed);
  std::vector<AlgebraElement> tested;
  for (Index a = 0; a < g.arrow_count(); ++a) tested.push_back(AlgebraElement::basis(kg, a));
  for (std::size_t k = 0; k < samples; ++k) tested.push_back(random_element(kg, rng, 4, rng.coin(50)));
  ContractivityReport r;
  r.spanning_elements = spanning.size();
  r.tested_elements = tested.size();
  for (const auto& a : tested) {
    Rational base = norm_sq(t, a);
    for (const auto& s : spanning) {
      bool rok = norm_sq(t, a * s) <= base;
      bool lok = norm_sq(t, s * a) <= base;
      if ((!rok || !lok) && !r.certificate) r.certificate = std::make_pair(a.to_string(), s.to_string());
      r.right = r.right && rok;
      r.left = r.left && lok;
    }
  }
  bool tracial = true;
  for (Index a = 0; a < g.arrow_count() && tracial; ++a)
    for (Index b = 0; b < g.arrow_count() && tracial; ++b) {
      auto x = AlgebraElement::basis(kg, a), y = AlgebraElement::basis(kg, b);
      tracial = t(x * y) == t(y * x);
    }
  // Both sides hold for any trace; a mismatch is only possible off traces.
  if (tracial) ensure(r.left == r.right, "left and right contractivity disagree");
  return r;
}

// ---------------------------------------------------------------------------
// The l1 seminorm

/// LP data shared by every l1 computation on one groupoid.
class Ell1Context {
 public:
  explicit Ell1Context(const FiniteGroupoid& g, std::size_t max_arrows = kDefaultMaxEll1Arrows) : g_(&g) {
    if (g.arrow_count() > max_arrows)
      throw size_error("l1 seminorm limited to " + std::to_string(max_arrows) + " arrows, groupoid has " +
                       std::to_string(g.arrow_count()));
    for (auto& u : enumerate_bisections(g, max_arrows))
      if (!u.empty()) bisections_.push_back(std::move(u));
    const std::size_t m = g.arrow_count(), k = bisections_.size();
    a_.assign(m, std::vector<Rational>(2 * k, Rational(0)));
    for (std::size_t j = 0; j < k; ++j)
      for (Index arrow : bisections_[j]) {
        a_[arrow][j] = 1;
        a_[arrow][k + j] = -1;
      }
    c_.assign(2 * k, Rational(1));
  }

  const std::vector<Bisection>& bisections() const { return bisections_; }
  const FiniteGroupoid& groupoid() const { return *g_; }

  struct Result {
    Rational value;
    /// Optimal representation: (bisection, coefficient) pairs.
    std::vector<std::pair<Bisection, Rational>> representation;
    bool certified = false;  // primal/dual optimality certificate verified
  };

  /// Exact |a| for real coefficients.
  Result seminorm(const AlgebraElement& f) const {
    require(f.algebra()->dim() == g_->arrow_count(), "l1 seminorm needs a groupoid-algebra element");
    require(f.is_real(), "l1 seminorm is computed exactly only for real coefficients; use ell1_bounds");
    std::vector<Rational> b(g_->arrow_count(), Rational(0));
    for (const auto& [arrow, c] : f.coeffs()) b[arrow] = c.re();
    LpResult lp = simplex_solve(a_, b, c_);
    ensure(lp.status == LpStatus::optimal, "l1 linear program did not reach an optimum");
    Result r;
    r.value = lp.value;
    r.certified = lp_certificate_holds(a_, b, c_, lp);
    ensure(r.certified, "l1 linear program certificate failed");
    const std::size_t k = bisections_.size();
    for (std::size_t j = 0; j < k; ++j) {
      Rational coef = lp.x[j] - lp.x[k + j];
      if (sgn(coef) != 0) r.representation.emplace_back(bisections_[j], coef);
    }
    return r;
  }

  Rational value(const AlgebraElement& f) const { return seminorm(f).value; }

  /// For Gaussian coefficients: max(|Re f|, |Im f|) <= |f| <= |Re f| + |Im f|.
  std::pair<Rational, Rational> bounds(const AlgebraElement& f) const {
    AlgebraElement re(f.algebra()), im(f.algebra());
    for (const auto& [i, c] : f.coeffs()) {
      re.add(i, Gaussian(c.re()));
      im.add(i, Gaussian(c.im()));
    }
    Rational lr = value(re), li = value(im);
    return {std::max(lr, li), lr + li};
  }

 private:
  const FiniteGroupoid* g_;
  std::vector<Bisection> bisections_;
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> c_;
};

inline Rational ell1_seminorm(const FiniteGroupoid& g, const AlgebraElement& f,
                              std::size_t max_arrows = kDefaultMaxEll1Arrows) {
  return Ell1Context(g, max_arrows).value(f);
}

// ---------------------------------------------------------------------------
// Amplification and distances

/// tau_n(E_ij (x) a) = [i = j] tau(a) on M_n(A).
inline TraceFunctional trace_amplify(const TraceFunctional& t, const AlgebraPtr& matrices, std::size_t n) {
  const std::size_t d = t.algebra->dim();
  require(matrices->dim() == n * n * d, "trace_amplify: matrix algebra has the wrong dimension");
  TraceFunctional out{matrices, std::vector<Gaussian>(matrices->dim())};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) out.value[matrix_basis_index(n, d, i, i, k)] = t.value[k];
  return out;
}

/// ||c - proj_L c||^2 via the Gram system of (.,.).
inline Rational distance_sq_to_subspace(const TraceFunctional& t, const AlgebraElement& c,
                                        const std::vector<AlgebraElement>& span) {
  if (span.empty()) return norm_sq(t, c);
  const std::size_t k = span.size();
  linalg::Matrix<Gaussian> gram(k, std::vector<Gaussian>(k));
  std::vector<Gaussian> rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    rhs[i] = inner_product(t, c, span[i]);
    for (std::size_t j = 0; j < k; ++j) gram[i][j] = inner_product(t, span[j], span[i]);
  }
  auto x = linalg::solve(gram, rhs);
  ensure(x.has_value(), "normal equations of an orthogonal projection are inconsistent");
  AlgebraElement p(c.algebra());
  for (std::size_t j = 0; j < k; ++j) p += (*x)[j] * span[j];
  Rational d = norm_sq(t, c - p);
  ensure(d == norm_sq(t, c) - norm_sq(t, p), "Pythagoras fails for the orthogonal projection");
  ensure(sgn(d) >= 0, "negative squared distance");
  return d;
}

// ---------------------------------------------------------------------------
// Inequality checks

struct InequalityCheck {
  enum class Rel { le, ge, gt };
  std::string name;
  Rational lhs, rhs;
  Rel rel = Rel::le;
  bool holds() const {
    switch (rel) {
      case Rel::le: return lhs <= rhs;
      case Rel::ge: return lhs >= rhs;
      case Rel::gt: return lhs > rhs;
    }
    return false;
  }
};

struct PassmanReport {
  std::vector<InequalityCheck> checks;
  bool all() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.holds(); });
  }
};

/// ||ab||^2 <= ||a||^2 |b|^2 and ||ab||^2 <= |a|^2 ||b||^2.
inline void passman_product(PassmanReport& rep, const TraceFunctional& t, const Ell1Context& l1, const AlgebraElement& a,
                            const AlgebraElement& b) {
  Rational ab = norm_sq(t, a * b);
  Rational la = l1.value(a), lb = l1.value(b);
  rep.checks.push_back({"||ab||^2 <= ||a||^2 |b|^2", ab, norm_sq(t, a) * lb * lb});
  rep.checks.push_back({"||ab||^2 <= |a|^2 ||b||^2", ab, la * la * norm_sq(t, b)});
}

/// With t' = t / t(1): |t'(a)|^2 <= ||a||'^2 <= |a|^2.
inline void passman_normalized(PassmanReport& rep, const TraceFunctional& t, const Ell1Context& l1,
                               const AlgebraElement& a) {
  Gaussian t1 = t(AlgebraElement::unit(t.algebra));
  require(t1.is_real() && sgn(t1.re()) > 0, "normalization needs tau(1) > 0");
  auto tn = t.scaled(Gaussian(Rational(1) / t1.re()));
  Rational n2 = norm_sq(tn, a), l = l1.value(a);
  rep.checks.push_back({"|tau(a)|^2 <= ||a||^2", tn(a).abs_squared(), n2});
  rep.checks.push_back({"||a||^2 <= |a|^2", n2, l * l});
}

/// |(b, a - c)|^2 <= ||b||^2 (||a - c||^2 - d(c, L)^2) for a, b in L = span.
inline void passman_bessel(PassmanReport& rep, const TraceFunctional& t, const std::vector<AlgebraElement>& span,
                           const AlgebraElement& a, const AlgebraElement& b, const AlgebraElement& c) {
  Rational d2 = distance_sq_to_subspace(t, c, span);
  require(distance_sq_to_subspace(t, a, span) == 0 && distance_sq_to_subspace(t, b, span) == 0,
          "Bessel check needs a and b inside the subspace");
  rep.checks.push_back({"|(b,a-c)|^2 <= ||b||^2 (||a-c||^2 - d(c,L)^2)", inner_product(t, b, a - c).abs_squared(),
                        norm_sq(t, b) * (norm_sq(t, a - c) - d2)});
}

/// For a nonzero idempotent e and t' = t / t(1): t'(e) |e|^2 >= ||e||'^2 > 0.
inline void passman_idempotent(PassmanReport& rep, const TraceFunctional& t, const Ell1Context& l1,
                               const AlgebraElement& e) {
  require(e * e == e && !e.is_zero(), "idempotent bound needs a nonzero idempotent");
  Gaussian t1 = t(AlgebraElement::unit(t.algebra));
  require(t1.is_real() && sgn(t1.re()) > 0, "normalization needs tau(1) > 0");
  auto tn = t.scaled(Gaussian(Rational(1) / t1.re()));
  Gaussian te = tn(e);
  ensure(te.is_real(), "trace of an idempotent is not real");
  Rational l = l1.value(e);
  rep.checks.push_back({"tau(e) |e|^2 >= ||e||^2", te.re() * l * l, norm_sq(tn, e), InequalityCheck::Rel::ge});
  rep.checks.push_back({"tau(e) > 0", te.re(), Rational(0), InequalityCheck::Rel::gt});
}

/// Seminorm axioms N1-N5 on one pair (real coefficients, rational scalar c).
inline void seminorm_axioms(PassmanReport& rep, const Ell1Context& l1, const AlgebraElement& a, const AlgebraElement& b,
                            const Rational& c) {
  Rational la = l1.value(a), lb = l1.value(b);
  rep.checks.push_back({"N1 |a+b| <= |a|+|b|", l1.value(a + b), la + lb});
  rep.checks.push_back({"N2 |a| >= 0", la, Rational(0), InequalityCheck::Rel::ge});
  rep.checks.push_back({"N3 |ab| <= |a||b|", l1.value(a * b), la * lb});
  Rational lca = l1.value(Gaussian(c) * a);
  Rational target = abs(c) * la;
  rep.checks.push_back({"N4 |ca| <= |c||a|", lca, target});
  rep.checks.push_back({"N4 |ca| >= |c||a|", lca, target, InequalityCheck::Rel::ge});
  Rational ls = l1.value(a.star());
  rep.checks.push_back({"N5 |a*| <= |a|", ls, la});
  rep.checks.push_back({"N5 |a*| >= |a|", ls, la, InequalityCheck::Rel::ge});
  rep.checks.push_back({"|f|inf^2 <= |f|^2", sup_norm_sq(a), la * la});
}

}  // namespace finitude
