#include <gtest/gtest.h>

#include <map>
#include <set>

#include "finitude/catalog.hpp"
#include "finitude/mean_trace.hpp"

using namespace finitude;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

std::vector<FiniteGroupoid> small_groupoids() {
  std::vector<FiniteGroupoid> out;
  for (const auto& s : {catalog::brandt(2), catalog::symmetric_inverse_monoid(2), catalog::chain(3),
                        catalog::cyclic_group(2), catalog::symmetric_group(3)})
    out.push_back(universal_groupoid(s));
  out.push_back(pair_groupoid(3));
  out.push_back(disjoint_union(pair_groupoid(2), group_groupoid(catalog::cyclic_group(3).base())));
  return out;
}

// Subsets of arrows with injective dom and ran, found by scanning masks.
std::vector<std::vector<Index>> bisections_by_scan(const FiniteGroupoid& g) {
  std::vector<std::vector<Index>> out;
  const std::size_t n = g.arrow_count();
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    std::set<Index> d, r;
    std::vector<Index> u;
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a)
      if (mask >> a & 1) {
        ok = d.insert(g.dom(a)).second && r.insert(g.ran(a)).second;
        u.push_back(a);
      }
    if (ok) out.push_back(u);
  }
  return out;
}

// Best representation cost on a grid of coefficients, keyed by arrow values.
using CostTable = std::map<std::vector<Rational>, Rational>;

CostTable representation_costs(const FiniteGroupoid& g) {
  auto bis = bisections_by_scan(g);
  const std::vector<Rational> cs{q(-2), q(-3, 2), q(-1), q(-1, 2), q(0), q(1, 2), q(1), q(3, 2), q(2)};
  const std::size_t n = g.arrow_count();
  CostTable best;
  std::vector<std::size_t> jdx(bis.size(), 0);
  for (;;) {
    std::vector<Rational> sum(n, Rational(0));
    Rational cost = 0;
    for (std::size_t j = 0; j < bis.size(); ++j) {
      cost += abs(cs[jdx[j]]);
      for (Index a : bis[j]) sum[a] += cs[jdx[j]];
    }
    auto [it, fresh] = best.emplace(sum, cost);
    if (!fresh && cost < it->second) it->second = cost;
    std::size_t k = 0;
    while (k < bis.size() && ++jdx[k] == cs.size()) jdx[k++] = 0;
    if (k == bis.size()) break;
  }
  return best;
}

// Weak duality bracket for the l1 seminorm of f (given as arrow values):
// any y with |sum_{a in U} y_a| <= 1 for all U gives sum y f <= |f|, and
// any representation gives an upper bound. Both are searched on a grid.
std::pair<Rational, Rational> ell1_bracket(const FiniteGroupoid& g, const CostTable& costs,
                                           const std::vector<Rational>& f) {
  auto bis = bisections_by_scan(g);
  const std::vector<Rational> ys{q(-1), q(-1, 2), q(0), q(1, 2), q(1)};
  const std::size_t n = g.arrow_count();
  Rational lower = 0;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    bool feasible = true;
    for (const auto& u : bis) {
      Rational s = 0;
      for (Index a : u) s += ys[idx[a]];
      if (abs(s) > 1) feasible = false;
    }
    if (feasible) {
      Rational v = 0;
      for (Index a = 0; a < n; ++a) v += ys[idx[a]] * f[a];
      lower = std::max(lower, v);
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == ys.size()) idx[k++] = 0;
    if (k == n) break;
  }
  auto it = costs.find(f);
  return {lower, it == costs.end() ? Rational(1000) : it->second};
}

AlgebraElement from_values(const AlgebraPtr& kg, const std::vector<Rational>& f) {
  AlgebraElement x(kg);
  for (Index a = 0; a < f.size(); ++a) x.add(a, Gaussian(f[a]));
  return x;
}

}  // namespace

TEST(CanonicalMean, Examples) {
  auto one = group_groupoid(catalog::cyclic_group(3).base());
  EXPECT_EQ(canonical_mean(one).weight, std::vector<Rational>{q(1, 2)});
  auto g = disjoint_union(pair_groupoid(2), group_groupoid(catalog::cyclic_group(1).base()));
  EXPECT_EQ(canonical_mean(g).weight, (std::vector<Rational>{q(1, 4), q(1, 4), q(1, 4)}));
  auto b2 = universal_groupoid(catalog::brandt(2));
  EXPECT_EQ(canonical_mean(b2).weight, (std::vector<Rational>{q(1, 2), q(1, 8), q(1, 8)}));
}

TEST(CanonicalMean, FaithfulInvariantAndBoundedMass) {
  for (const auto& g : small_groupoids()) {
    auto mu = canonical_mean(g);
    EXPECT_TRUE(mu.faithful());
    auto r = is_invariant_mean(mu, g);
    EXPECT_TRUE(r.invariant());
    ASSERT_TRUE(r.by_bisections.has_value());
    EXPECT_TRUE(*r.by_bisections);
    std::vector<Index> all(g.object_count());
    std::iota(all.begin(), all.end(), 0);
    EXPECT_LT(mu.measure(all), 1);
  }
}

TEST(Invariance, Examples) {
  auto p = pair_groupoid(2);
  auto bad = is_invariant_mean(InvariantMean{{q(1), q(2)}}, p);
  EXPECT_FALSE(bad.invariant());
  EXPECT_TRUE(bad.arrow_certificate.has_value());
  ASSERT_TRUE(bad.bisection_certificate.has_value());
  EXPECT_EQ(bad.by_bisections, std::optional<bool>(false));
  auto zero = is_invariant_mean(InvariantMean{{q(0), q(0)}}, p);
  EXPECT_TRUE(zero.invariant());
  EXPECT_FALSE((InvariantMean{{q(0), q(0)}}.faithful()));
  EXPECT_THROW(is_invariant_mean(InvariantMean{{q(-1), q(-1)}}, p), precondition_error);
  EXPECT_THROW(is_invariant_mean(InvariantMean{{q(1)}}, p), precondition_error);
}

TEST(Invariance, OrbitAndBisectionTestsAgreeOnRandomWeights) {
  detail::Sampler rng(17);
  for (const auto& g : small_groupoids()) {
    auto dec = orbits_and_isotropy(g);
    for (int t = 0; t < 20; ++t) {
      InvariantMean mu{std::vector<Rational>(g.object_count())};
      const bool constant = rng.coin();
      for (const auto& o : dec.orbits) {
        Rational w = make_rational(rng.uniform(0, 3), rng.uniform(1, 3));
        for (Index x : o.objects) mu.weight[x] = constant ? w : make_rational(rng.uniform(0, 3), rng.uniform(1, 3));
      }
      // is_invariant_mean itself raises if the two tests disagree.
      auto r = is_invariant_mean(mu, g);
      bool expect = true;
      for (const auto& o : dec.orbits)
        for (Index x : o.objects) expect = expect && mu.weight[x] == mu.weight[o.objects.front()];
      EXPECT_EQ(r.invariant(), expect);
    }
  }
}

TEST(Trace, RoundTripWithMean) {
  for (const auto& g : small_groupoids()) {
    auto kg = groupoid_algebra(g);
    auto mu = canonical_mean(g);
    auto t = trace_from_mean(mu, g, kg);
    EXPECT_EQ(mean_from_trace(t, g), mu);
  }
  auto p = pair_groupoid(2);
  EXPECT_THROW(trace_from_mean(InvariantMean{{q(1), q(2)}}, p, groupoid_algebra(p)), precondition_error);
}

TEST(Trace, AxiomsFromInvariantMeans) {
  for (const auto& g : small_groupoids()) {
    auto kg = groupoid_algebra(g);
    auto t = trace_from_mean(canonical_mean(g), g, kg);
    auto r = verify_trace(t, &g, 3, 200);
    EXPECT_TRUE(r.all()) << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_TRUE(r.t4_by_mean);
  }
}

TEST(Trace, NonFaithfulMeanFailsT4Only) {
  auto g = disjoint_union(pair_groupoid(2), group_groupoid(catalog::cyclic_group(2).base()));
  auto kg = groupoid_algebra(g);
  auto t = trace_from_mean(InvariantMean{{q(1), q(1), q(0)}}, g, kg);
  auto r = verify_trace(t, &g, 1, 100);
  EXPECT_TRUE(r.t1 && r.t2 && r.t3);
  EXPECT_FALSE(r.t4);
  EXPECT_FALSE(r.t4_by_mean);
}

TEST(Trace, ConstantOnArrowsIsNotATrace) {
  auto g = pair_groupoid(2);
  auto kg = groupoid_algebra(g);
  TraceFunctional t{kg, std::vector<Gaussian>(4, Gaussian(1))};
  auto r = verify_trace(t, &g, 1, 50);
  EXPECT_FALSE(r.t1);
  EXPECT_FALSE(r.all());
  EXPECT_FALSE(r.failures.empty());
}

TEST(Trace, CommutesAndIsHermitianOnRandomElements) {
  detail::Sampler rng(9);
  for (const auto& g : small_groupoids()) {
    auto kg = groupoid_algebra(g);
    auto t = trace_from_mean(canonical_mean(g), g, kg);
    for (int k = 0; k < 50; ++k) {
      auto a = random_element(kg, rng, 4, false), b = random_element(kg, rng, 4, false);
      EXPECT_EQ(t(a * b), t(b * a));
      EXPECT_EQ(inner_product(t, a, b), inner_product(t, b, a).conj());
      EXPECT_EQ(norm_sq(t, a.star()), norm_sq(t, a));
      EXPECT_GE(norm_sq(t, a), 0);
    }
  }
}

TEST(Trace, AdjointIdentitiesOnBasisTriples) {
  for (const auto& g : small_groupoids()) {
    auto kg = groupoid_algebra(g);
    auto t = trace_from_mean(canonical_mean(g), g, kg);
    const std::size_t n = g.arrow_count();
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
          auto a = AlgebraElement::basis(kg, i), b = AlgebraElement::basis(kg, j), c = AlgebraElement::basis(kg, k);
          ASSERT_EQ(inner_product(t, a * b, c), inner_product(t, b, a.star() * c));
          ASSERT_EQ(inner_product(t, a * b, c), inner_product(t, a, c * b.star()));
        }
  }
}

TEST(Contractivity, HoldsForTraces) {
  for (const auto& g : small_groupoids()) {
    auto kg = groupoid_algebra(g);
    auto t = trace_from_mean(canonical_mean(g), g, kg);
    auto r = contractivity_check(t, g, 4, 20);
    EXPECT_TRUE(r.holds());
    EXPECT_GE(r.spanning_elements, g.arrow_count());
  }
}

TEST(Contractivity, FailsForNonInvariantWeights) {
  auto g = pair_groupoid(2);
  auto kg = groupoid_algebra(g);
  auto t = functional_from_weights(InvariantMean{{q(1), q(2)}}, g, kg);
  auto r = contractivity_check(t, g, 4, 20);
  EXPECT_FALSE(r.holds());
  EXPECT_TRUE(r.certificate.has_value());
}

TEST(Ell1, Examples) {
  auto g = pair_groupoid(2);
  auto kg = groupoid_algebra(g);
  Ell1Context l1(g);
  EXPECT_EQ(l1.value(AlgebraElement::basis(kg, 1)), 1);
  EXPECT_EQ(l1.value(AlgebraElement::basis(kg, 0) + AlgebraElement::basis(kg, 3)), 1);
  EXPECT_EQ(l1.value(AlgebraElement(kg)), 0);
  EXPECT_EQ(l1.value(AlgebraElement::unit(kg)), 1);
  EXPECT_EQ(l1.value(AlgebraElement::basis(kg, 0) - AlgebraElement::basis(kg, 3)), 2);
  auto r = l1.seminorm(AlgebraElement::basis(kg, 1, Gaussian(3)));
  EXPECT_TRUE(r.certified);
  ASSERT_EQ(r.representation.size(), 1u);
  EXPECT_EQ(r.representation[0].second, 3);
  EXPECT_THROW(l1.value(AlgebraElement::basis(kg, 1, Gaussian(0, 1))), precondition_error);
  auto [lo, hi] = l1.bounds(AlgebraElement::basis(kg, 1, Gaussian(1, 1)));
  EXPECT_EQ(lo, 1);
  EXPECT_EQ(hi, 2);
  EXPECT_THROW(Ell1Context(universal_groupoid(catalog::symmetric_inverse_monoid(3))), size_error);
}

TEST(Ell1, MatchesDualityBracketOnPairGroupoid) {
  auto g = pair_groupoid(2);
  auto kg = groupoid_algebra(g);
  Ell1Context l1(g);
  const auto costs = representation_costs(g);
  detail::Sampler rng(23);
  std::size_t exact = 0;
  for (int t = 0; t < 40; ++t) {
    std::vector<Rational> f;
    for (int a = 0; a < 4; ++a) f.push_back(q(rng.uniform(-2, 2)));
    auto [lo, hi] = ell1_bracket(g, costs, f);
    Rational v = l1.value(from_values(kg, f));
    EXPECT_LE(lo, v);
    EXPECT_LE(v, hi);
    exact += (lo == hi);
  }
  EXPECT_GT(exact, 30u);
}

TEST(Ell1, GroupIsCoefficientSum) {
  auto g = group_groupoid(catalog::cyclic_group(3).base());
  auto kg = groupoid_algebra(g);
  detail::Sampler rng(2);
  for (int t = 0; t < 30; ++t) {
    auto f = random_element(kg, rng, 3, true);
    Rational s = 0;
    for (const auto& [i, c] : f.coeffs()) s += abs(c.re());
    EXPECT_EQ(ell1_seminorm(g, f), s);
  }
}

TEST(Amplify, TraceOnMatrices) {
  auto g = group_groupoid(catalog::cyclic_group(2).base());
  auto kg = groupoid_algebra(g);
  auto t = trace_from_mean(InvariantMean{{q(1)}}, g, kg);
  auto m = matrix_algebra(kg, 2);
  auto tn = trace_amplify(t, m, 2);
  EXPECT_EQ(tn(AlgebraElement::unit(m)), Gaussian(2));
  auto r = verify_trace(tn, nullptr, 5, 100);
  EXPECT_TRUE(r.all()) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_THROW(trace_amplify(t, m, 3), precondition_error);
}

// Every rook matrix over the arrow indicators is contractive for the
// amplified trace, checked on the full rook set for n = 2.
TEST(Amplify, RookMatricesAreContractive) {
  detail::Sampler rng(21);
  for (const auto& g : {pair_groupoid(2), universal_groupoid(catalog::brandt(2)),
                        group_groupoid(catalog::cyclic_group(2).base())}) {
    auto kg = groupoid_algebra(g);
    auto t = trace_from_mean(canonical_mean(g), g, kg);
    std::vector<Index> arrows(g.arrow_count());
    for (Index a = 0; a < g.arrow_count(); ++a) arrows[a] = a;
    auto span = SpanningSemigroup::make(kg, arrows);
    auto m = matrix_algebra(kg, 2);
    auto tn = trace_amplify(t, m, 2);
    auto rooks = enumerate_rook_matrices(span, 2);
    std::vector<AlgebraElement> tested;
    for (Index k = 0; k < m->dim(); ++k) tested.push_back(AlgebraElement::basis(m, k));
    for (int k = 0; k < 10; ++k) tested.push_back(random_element(m, rng, 4, rng.coin()));
    for (const auto& b : rooks) {
      auto s = rook_embed(m, span, b);
      for (const auto& x : tested) {
        ASSERT_LE(norm_sq(tn, x * s), norm_sq(tn, x));
        ASSERT_LE(norm_sq(tn, s * x), norm_sq(tn, x));
      }
    }
  }
}

TEST(Distance, Examples) {
  auto g = group_groupoid(catalog::cyclic_group(2).base());
  auto kg = groupoid_algebra(g);
  auto t = trace_from_mean(InvariantMean{{q(1)}}, g, kg);
  auto id = AlgebraElement::basis(kg, 0), gen = AlgebraElement::basis(kg, 1);
  EXPECT_EQ(distance_sq_to_subspace(t, id, {gen}), 1);
  EXPECT_EQ(distance_sq_to_subspace(t, id, {id}), 0);
  EXPECT_EQ(distance_sq_to_subspace(t, id + gen, {gen}), 1);
  EXPECT_EQ(distance_sq_to_subspace(t, id, {}), 1);
}

TEST(Passman, InequalitiesOnSmallGroupoids) {
  detail::Sampler rng(31);
  for (const auto& g : small_groupoids()) {
    auto kg = groupoid_algebra(g);
    auto t = trace_from_mean(canonical_mean(g), g, kg);
    Ell1Context l1(g);
    PassmanReport rep;
    for (int k = 0; k < 15; ++k) {
      auto a = random_element(kg, rng, 3, true), b = random_element(kg, rng, 3, true),
           c = random_element(kg, rng, 3, true);
      passman_product(rep, t, l1, a, b);
      passman_normalized(rep, t, l1, a);
      seminorm_axioms(rep, l1, a, b, rng.small_rational());
      std::vector<AlgebraElement> span{random_element(kg, rng, 2, true), random_element(kg, rng, 2, true)};
      passman_bessel(rep, t, span, span[0], Gaussian(2) * span[0] - span[1], c);
    }
    for (Index x = 0; x < g.object_count(); ++x) passman_idempotent(rep, t, l1, AlgebraElement::basis(kg, g.identity(x)));
    passman_idempotent(rep, t, l1, AlgebraElement::unit(kg));
    for (const auto& ch : rep.checks) EXPECT_TRUE(ch.holds()) << ch.name << ": " << ch.lhs << " vs " << ch.rhs;
  }
}

TEST(Passman, PreconditionsAreEnforced) {
  auto g = pair_groupoid(2);
  auto kg = groupoid_algebra(g);
  auto t = trace_from_mean(InvariantMean{{q(1), q(1)}}, g, kg);
  Ell1Context l1(g);
  PassmanReport rep;
  EXPECT_THROW(passman_idempotent(rep, t, l1, AlgebraElement::basis(kg, 1)), precondition_error);
  auto zero = trace_from_mean(InvariantMean{{q(0), q(0)}}, g, kg);
  EXPECT_THROW(passman_normalized(rep, zero, l1, AlgebraElement::basis(kg, 1)), precondition_error);
  EXPECT_THROW(passman_bessel(rep, t, {AlgebraElement::basis(kg, 0)}, AlgebraElement::basis(kg, 1),
                              AlgebraElement::basis(kg, 0), AlgebraElement::basis(kg, 0)),
               precondition_error);
}
