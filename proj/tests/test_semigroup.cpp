#include <gtest/gtest.h>

#include <set>

#include "finitude/catalog.hpp"
#include "finitude/semigroup.hpp"
#include "oracles.hpp"

using namespace finitude;

namespace {

std::vector<FiniteInverseSemigroup> inverse_corpus() {
  return {catalog::brandt(2),       catalog::brandt(3),         catalog::symmetric_inverse_monoid(2),
          catalog::symmetric_inverse_monoid(3), catalog::chain(2), catalog::chain(3),
          catalog::cyclic_group(2), catalog::cyclic_group(3),    catalog::symmetric_group(3),
          catalog::with_zero(catalog::cyclic_group(2))};
}

std::vector<FiniteSemigroup> general_corpus() {
  std::vector<FiniteSemigroup> out;
  for (const auto& s : inverse_corpus()) out.push_back(s.base());
  out.push_back(catalog::full_transformation_monoid(2));
  out.push_back(catalog::full_transformation_monoid(3));
  out.push_back(catalog::null_semigroup());
  out.push_back(catalog::left_zero_semigroup());
  return out;
}

std::size_t sum_binom_sq_fact(int n) {
  std::size_t total = 0;
  for (int k = 0; k <= n; ++k) {
    std::size_t c = 1, f = 1;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    for (int i = 2; i <= k; ++i) f *= i;
    total += c * c * f;
  }
  return total;
}

}  // namespace

TEST(PartialBijection, RejectsNonInjective) {
  EXPECT_THROW(PartialBijection({0, 0}), precondition_error);
  EXPECT_THROW(PartialBijection({2, 0}), precondition_error);
}

TEST(PartialBijection, InverseComposesToDomainIdentity) {
  for (const auto& m : oracle::all_partial_bijections(3)) {
    PartialBijection s(m);
    auto e = s.inverse() * s;
    for (int x = 0; x < 3; ++x) EXPECT_EQ(e.at(x).has_value(), s.at(x).has_value());
    EXPECT_TRUE(e.is_idempotent());
  }
}

TEST(Closure, IdentityIsTrivialMonoid) {
  auto s = closure({PartialBijection::identity(2)});
  EXPECT_EQ(s.size(), 1u);
}

TEST(Closure, I2FromPartialIdentitiesAndSwap) {
  auto s = closure({PartialBijection({1, 0}), PartialBijection::partial_identity(2, {0}),
                    PartialBijection::partial_identity(2, {1}), PartialBijection::partial_identity(2, {})});
  EXPECT_EQ(s.size(), 7u);
  EXPECT_EQ(oracle::all_partial_bijections(2).size(), 7u);
}

TEST(Closure, I3MatchesOracleAndCount) {
  std::vector<oracle::PMap> gens{{1, 0, 2}, {1, 2, 0}, {0, 1, -1}};
  std::vector<PartialBijection> pb;
  for (const auto& g : gens) pb.emplace_back(g);
  auto res = closure_with_elements(pb);
  auto ref = oracle::naive_closure(gens);
  EXPECT_EQ(res.semigroup.size(), 34u);
  EXPECT_EQ(ref.size(), 34u);
  EXPECT_EQ(sum_binom_sq_fact(3), 34u);
  std::set<oracle::PMap> got;
  for (const auto& e : res.elements) got.insert(e.mapping());
  EXPECT_EQ(got, ref);
}

TEST(Closure, LabelsAreReproducible) {
  std::vector<PartialBijection> pb{PartialBijection({1, 0, 2}), PartialBijection({1, 2, 0})};
  EXPECT_EQ(closure(pb).base().labels(), closure(pb).base().labels());
  EXPECT_EQ(closure(pb).base().label(0), "a");
}

TEST(Closure, SizeBound) {
  std::vector<PartialBijection> pb{PartialBijection({1, 0, 2}), PartialBijection({1, 2, 0})};
  EXPECT_THROW(closure(pb, 3), size_error);
}

TEST(ValidateInverse, Semilattice) {
  auto s = validate_inverse(FiniteSemigroup::from_table({"e", "0"}, {{0, 1}, {1, 1}}));
  EXPECT_EQ(s.star(0), 0u);
  EXPECT_EQ(s.star(1), 1u);
}

TEST(ValidateInverse, LeftZeroIsNotInverse) {
  try {
    validate_inverse(catalog::left_zero_semigroup());
    FAIL();
  } catch (const precondition_error& e) {
    EXPECT_NE(std::string(e.what()).find("not inverse"), std::string::npos);
  }
}

TEST(ValidateInverse, NotRegular) {
  try {
    validate_inverse(catalog::null_semigroup());
    FAIL();
  } catch (const precondition_error& e) {
    EXPECT_NE(std::string(e.what()).find("not regular"), std::string::npos);
  }
}

TEST(ValidateInverse, B2Star) {
  auto b2 = catalog::brandt(2);
  auto s = validate_inverse(b2.base());
  EXPECT_EQ(s.label(s.star(*b2.base().find("E12"))), "E21");
}

TEST(Table, RejectsNonAssociative) {
  // x*y depends only on x with a twist that breaks associativity.
  EXPECT_THROW(FiniteSemigroup::from_table({"a", "b"}, {{1, 0}, {0, 0}}), precondition_error);
}

TEST(Invariants, AssociativityAndStarLaws) {
  for (const auto& s : general_corpus()) {
    EXPECT_FALSE(s.associativity_failure().has_value());
    if (!s.has_star()) continue;
    for (Index a = 0; a < s.size(); ++a) {
      EXPECT_EQ(s.star(s.star(a)), a);
      for (Index b = 0; b < s.size(); ++b) EXPECT_EQ(s.star(s.mul(a, b)), s.mul(s.star(b), s.star(a)));
    }
  }
}

TEST(Invariants, InverseLawsAndCommutingIdempotents) {
  for (const auto& s : inverse_corpus()) {
    for (Index a = 0; a < s.size(); ++a) {
      EXPECT_EQ(s.mul(s.mul(a, s.star(a)), a), a);
      EXPECT_EQ(s.mul(s.mul(s.star(a), a), s.star(a)), s.star(a));
      for (Index t = 0; t < s.size(); ++t)
        if (t != s.star(a)) { EXPECT_FALSE(s.mul(s.mul(a, t), a) == a && s.mul(s.mul(t, a), t) == t); }
    }
    for (Index e : s.idempotents())
      for (Index f : s.idempotents()) EXPECT_EQ(s.mul(e, f), s.mul(f, e));
  }
}

TEST(Green, AgreesWithIdealOracle) {
  for (const auto& s : general_corpus()) {
    if (s.size() > 50) continue;
    auto g = green(s);
    auto id = oracle::principal_ideals(s.size(), [&](auto a, auto b) { return s.mul(a, b); });
    for (Index a = 0; a < s.size(); ++a)
      for (Index b = 0; b < s.size(); ++b) {
        const bool r = id.right[a] == id.right[b], l = id.left[a] == id.left[b], j = id.two_sided[a] == id.two_sided[b];
        EXPECT_EQ(g.R.same(a, b), r);
        EXPECT_EQ(g.L.same(a, b), l);
        EXPECT_EQ(g.J.same(a, b), j);
        EXPECT_EQ(g.H.same(a, b), r && l);
        EXPECT_EQ(g.D.same(a, b), j);
        const bool below = std::includes(id.two_sided[b].begin(), id.two_sided[b].end(), id.two_sided[a].begin(),
                                         id.two_sided[a].end());
        EXPECT_EQ(g.j_below(g.J.class_of[a], g.J.class_of[b]), below);
      }
  }
}

TEST(Green, ClassNumberingByLeastElement) {
  for (const auto& s : general_corpus()) {
    auto g = green(s);
    for (const Partition* p : {&g.R, &g.L, &g.J, &g.H, &g.D})
      for (std::size_t c = 1; c < p->count(); ++c) EXPECT_LT(p->classes[c - 1].front(), p->classes[c].front());
  }
}

TEST(Green, GroupHasOneClass) {
  auto g = green(catalog::symmetric_group(3).base());
  EXPECT_EQ(g.R.count(), 1u);
  EXPECT_EQ(g.L.count(), 1u);
  EXPECT_EQ(g.J.count(), 1u);
  EXPECT_EQ(g.H.count(), 1u);
}

TEST(Green, B2Shape) {
  auto s = catalog::brandt(2).base();
  auto g = green(s);
  ASSERT_EQ(g.J.count(), 2u);
  EXPECT_EQ(g.J.classes[0], std::vector<Index>{0});
  auto top = g.J.classes[1];
  EXPECT_EQ(top.size(), 4u);
  std::set<Index> rs, ls;
  for (Index a : top) {
    rs.insert(g.R.class_of[a]);
    ls.insert(g.L.class_of[a]);
  }
  EXPECT_EQ(rs.size(), 2u);
  EXPECT_EQ(ls.size(), 2u);
}

TEST(Green, I2HasThreeJClassesByRank) {
  auto s = catalog::symmetric_inverse_monoid(2);
  auto g = green(s.base());
  EXPECT_EQ(g.J.count(), 3u);
  std::vector<std::size_t> sizes;
  for (const auto& c : g.J.classes) sizes.push_back(c.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 4, 2}));
}

TEST(Green, RegularClassesHaveIdempotentsInEveryRAndL) {
  for (const auto& s : general_corpus())
    for (const auto& info : j_class_classify(s)) {
      if (!info.regular) continue;
      EXPECT_EQ(info.idempotents_by_r.size(), info.r_classes);
      EXPECT_EQ(info.idempotents_by_l.size(), info.l_classes);
    }
}

TEST(NaturalOrder, PartialOrderAxioms) {
  for (const auto& s : inverse_corpus()) {
    auto o = natural_order(s);
    for (Index a = 0; a < s.size(); ++a) {
      EXPECT_TRUE(o.leq(a, a));
      for (Index b = 0; b < s.size(); ++b) {
        if (a != b) { EXPECT_FALSE(o.leq(a, b) && o.leq(b, a)); }
        for (Index c = 0; c < s.size(); ++c)
          if (o.leq(a, b) && o.leq(b, c)) { EXPECT_TRUE(o.leq(a, c)); }
      }
    }
  }
}

TEST(NaturalOrder, GroupIsTrivial) {
  auto s = catalog::symmetric_group(3);
  auto o = natural_order(s);
  for (Index a = 0; a < s.size(); ++a)
    for (Index b = 0; b < s.size(); ++b) EXPECT_EQ(o.leq(a, b), a == b);
}

TEST(NaturalOrder, B2) {
  auto s = catalog::brandt(2);
  auto o = natural_order(s);
  for (Index a = 0; a < s.size(); ++a) EXPECT_TRUE(o.leq(0, a));
  for (Index a = 1; a < s.size(); ++a)
    for (Index b = 1; b < s.size(); ++b) EXPECT_EQ(o.leq(a, b), a == b);
}

TEST(NaturalOrder, DEquivalentIdempotentsIncomparable) {
  for (const auto& s : inverse_corpus()) {
    auto o = natural_order(s);
    auto g = green(s.base());
    for (Index e : s.idempotents())
      for (Index f : s.idempotents())
        if (e != f && g.D.same(e, f)) { EXPECT_FALSE(o.leq(e, f)); }
  }
}

TEST(MaximalSubgroup, Examples) {
  auto chain = catalog::chain(3);
  for (Index e : chain.idempotents()) EXPECT_EQ(maximal_subgroup(chain, e).elements.size(), 1u);
  auto i2 = catalog::symmetric_inverse_monoid(2);
  EXPECT_EQ(maximal_subgroup(i2, *i2.base().find("01")).elements.size(), 2u);
  auto b2 = catalog::brandt(2);
  EXPECT_EQ(maximal_subgroup(b2, *b2.base().find("E11")).elements.size(), 1u);
  EXPECT_THROW(maximal_subgroup(b2, *b2.base().find("E12")), precondition_error);
}

TEST(MaximalSubgroup, IsomorphicAcrossDClass) {
  for (const auto& s : inverse_corpus()) {
    auto g = green(s.base());
    for (Index e : s.idempotents())
      for (Index f : s.idempotents())
        if (g.D.same(e, f)) { EXPECT_EQ(subgroup_isomorphism(s, e, f).size(), maximal_subgroup(s, e).elements.size()); }
  }
}

TEST(DClassReport, B2) {
  auto r = d_class_report(catalog::brandt(2));
  ASSERT_EQ(r.classes.size(), 2u);
  EXPECT_EQ(r.classes[0].idempotents.size(), 1u);
  EXPECT_EQ(r.classes[1].idempotents.size(), 2u);
  EXPECT_EQ(r.classes[1].subgroup_order, 1u);
  EXPECT_TRUE(r.stably_finite);
}

TEST(DClassReport, I3) {
  auto r = d_class_report(catalog::symmetric_inverse_monoid(3));
  std::multiset<std::size_t> idem, orders;
  for (const auto& c : r.classes) {
    idem.insert(c.idempotents.size());
    orders.insert(c.subgroup_order);
  }
  EXPECT_EQ(idem, (std::multiset<std::size_t>{1, 3, 3, 1}));
  EXPECT_EQ(orders, (std::multiset<std::size_t>{1, 1, 2, 6}));
}

TEST(DClassReport, Group) {
  auto r = d_class_report(catalog::symmetric_group(3));
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_EQ(r.classes[0].idempotents.size(), 1u);
  EXPECT_EQ(r.classes[0].subgroup_order, 6u);
}

TEST(Stability, AllFiniteSemigroupsAreStable) {
  for (const auto& s : general_corpus()) EXPECT_TRUE(is_stable(s).stable);
  EXPECT_TRUE(is_stable(closure({PartialBijection::identity(1)}).base()).stable);
}

TEST(JClass, Classification) {
  for (const auto& info : j_class_classify(catalog::symmetric_group(3).base())) EXPECT_TRUE(info.regular);
  auto ns = catalog::null_semigroup();
  auto g = green(ns);
  for (const auto& info : j_class_classify(ns, g)) {
    bool is_x = g.J.classes[info.j_class] == std::vector<Index>{*ns.find("x")};
    EXPECT_EQ(info.regular, !is_x);
  }
  for (const auto& info : j_class_classify(catalog::brandt(2).base())) EXPECT_TRUE(info.regular);
}
