#include <gtest/gtest.h>

#include <set>

#include "finitude/catalog.hpp"
#include "finitude/groupoid.hpp"

using namespace finitude;

namespace {

std::vector<FiniteInverseSemigroup> corpus() {
  return {catalog::brandt(2),       catalog::brandt(3),       catalog::symmetric_inverse_monoid(2),
          catalog::chain(2),        catalog::chain(3),        catalog::cyclic_group(2),
          catalog::cyclic_group(3), catalog::symmetric_group(3)};
}

// Brute force over all subsets of arrows.
std::size_t count_bisections_by_subsets(const FiniteGroupoid& g) {
  const std::size_t n = g.arrow_count();
  std::size_t count = 0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::set<Index> d, r;
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a)
      if (mask >> a & 1) ok = d.insert(g.dom(a)).second && r.insert(g.ran(a)).second;
    count += ok;
  }
  return count;
}

}  // namespace

TEST(Validate, GroupAsOneObjectGroupoid) {
  auto g = group_groupoid(catalog::symmetric_group(3).base());
  EXPECT_EQ(g.object_count(), 1u);
  EXPECT_EQ(g.arrow_count(), 6u);
}

TEST(Validate, PairGroupoid) {
  auto g = pair_groupoid(2);
  EXPECT_EQ(g.arrow_count(), 4u);
  auto d = orbits_and_isotropy(g);
  ASSERT_EQ(d.orbits.size(), 1u);
  EXPECT_EQ(d.orbits[0].isotropy.size(), 1u);
}

TEST(Validate, ComposeMismatchNamesThePair) {
  auto raw = pair_groupoid(2).raw();
  // (0,0) after (1,1) is not composable; declaring it must fail.
  raw.compose.emplace_back(0, 3, 0);
  try {
    validate_groupoid(raw);
    FAIL();
  } catch (const precondition_error& e) {
    EXPECT_NE(std::string(e.what()).find("arrow"), std::string::npos);
  }
}

TEST(Validate, CategoryAxiomsOnCorpus) {
  for (const auto& s : corpus()) {
    auto g = universal_groupoid(s);
    for (Index a = 0; a < g.arrow_count(); ++a) {
      EXPECT_EQ(g.compose(g.inverse(a), a), g.identity(g.dom(a)));
      EXPECT_EQ(g.compose(a, g.inverse(a)), g.identity(g.ran(a)));
      EXPECT_EQ(g.dom(g.inverse(a)), g.ran(a));
      for (Index b = 0; b < g.arrow_count(); ++b) {
        EXPECT_EQ(g.composable(a, b), g.compose(a, b) != kNoIndex);
        if (!g.composable(a, b)) continue;
        for (Index c = 0; c < g.arrow_count(); ++c)
          if (g.composable(b, c)) { EXPECT_EQ(g.compose(g.compose(a, b), c), g.compose(a, g.compose(b, c))); }
      }
    }
  }
}

TEST(Orbits, GroupBundleHasSingletonOrbits) {
  auto g = disjoint_union(group_groupoid(catalog::cyclic_group(2).base()), group_groupoid(catalog::cyclic_group(3).base()));
  auto d = orbits_and_isotropy(g);
  ASSERT_EQ(d.orbits.size(), 2u);
  EXPECT_EQ(d.orbits[0].isotropy.size(), 2u);
  EXPECT_EQ(d.orbits[1].isotropy.size(), 3u);
}

TEST(Orbits, PairGroupoidOnN) {
  auto d = orbits_and_isotropy(pair_groupoid(4));
  ASSERT_EQ(d.orbits.size(), 1u);
  EXPECT_EQ(d.orbits[0].objects.size(), 4u);
  EXPECT_EQ(d.orbits[0].isotropy.size(), 1u);
}

TEST(Orbits, UniversalGroupoidOfB2) {
  auto s = catalog::brandt(2);
  auto g = universal_groupoid(s);
  auto d = orbits_and_isotropy(g);
  ASSERT_EQ(d.orbits.size(), 2u);
  std::vector<std::string> o0, o1;
  for (Index x : d.orbits[0].objects) o0.push_back(g.object_label(x));
  for (Index x : d.orbits[1].objects) o1.push_back(g.object_label(x));
  EXPECT_EQ(o0, std::vector<std::string>{"0"});
  EXPECT_EQ(o1, (std::vector<std::string>{"E11", "E22"}));
  for (const auto& o : d.orbits) EXPECT_EQ(o.isotropy.size(), 1u);
}

TEST(Orbits, TransversalsAndIsotropyClosed) {
  for (const auto& s : corpus()) {
    auto g = universal_groupoid(s);
    auto d = orbits_and_isotropy(g);
    for (const auto& o : d.orbits) {
      for (std::size_t k = 0; k < o.objects.size(); ++k) {
        EXPECT_EQ(g.dom(o.transversal[k]), o.basepoint);
        EXPECT_EQ(g.ran(o.transversal[k]), o.objects[k]);
      }
      std::set<Index> iso(o.isotropy_arrows.begin(), o.isotropy_arrows.end());
      for (Index a : iso) {
        EXPECT_TRUE(iso.count(g.inverse(a)));
        for (Index b : iso) EXPECT_TRUE(iso.count(g.compose(a, b)));
      }
    }
  }
}

TEST(Bisections, Examples) {
  auto one = group_groupoid(catalog::cyclic_group(1).base());
  EXPECT_EQ(enumerate_bisections(one).size(), 2u);
  auto p2 = pair_groupoid(2);
  EXPECT_EQ(enumerate_bisections(p2).size(), 7u);
  Bisection ids;
  for (Index x = 0; x < p2.object_count(); ++x) ids.push_back(p2.identity(x));
  std::sort(ids.begin(), ids.end());
  auto inv = bisection_inverse(p2, ids);
  EXPECT_EQ(bisection_product(p2, inv, ids), ids);
  EXPECT_EQ(bisection_product(p2, ids, inv), ids);
}

TEST(Bisections, CountMatchesSubsetScanAndMonoidLaws) {
  for (const auto& s : corpus()) {
    auto g = universal_groupoid(s);
    if (g.arrow_count() > 16) continue;
    auto all = enumerate_bisections(g);
    EXPECT_EQ(all.size(), count_bisections_by_subsets(g));
    auto check = verify_bisection_monoid(g, all);
    EXPECT_TRUE(check.ok) << check.failure;
  }
}

TEST(Bisections, SizeGate) {
  auto g = universal_groupoid(catalog::symmetric_inverse_monoid(3));
  EXPECT_THROW(enumerate_bisections(g), size_error);
}

TEST(Universal, ArrowAndObjectCounts) {
  for (const auto& s : corpus()) {
    auto g = universal_groupoid(s);
    EXPECT_EQ(g.arrow_count(), s.size());
    EXPECT_EQ(g.object_count(), s.idempotents().size());
  }
  auto i3 = catalog::symmetric_inverse_monoid(3);
  EXPECT_EQ(universal_groupoid(i3).arrow_count(), 34u);
}

TEST(Universal, Examples) {
  auto grp = universal_groupoid(catalog::symmetric_group(3));
  EXPECT_EQ(grp.object_count(), 1u);
  EXPECT_EQ(grp.arrow_count(), 6u);
  auto ch = universal_groupoid(catalog::chain(2));
  EXPECT_EQ(ch.object_count(), 2u);
  EXPECT_EQ(ch.arrow_count(), 2u);
  for (Index a = 0; a < 2; ++a) EXPECT_TRUE(ch.is_identity(a));
  auto b2 = universal_groupoid(catalog::brandt(2));
  EXPECT_EQ(b2.object_count(), 3u);
  EXPECT_EQ(b2.arrow_count(), 5u);
  Index e12 = *b2.find_arrow("E12");
  EXPECT_EQ(b2.object_label(b2.dom(e12)), "E22");
  EXPECT_EQ(b2.object_label(b2.ran(e12)), "E11");
}

TEST(Restrict, Examples) {
  auto b2 = universal_groupoid(catalog::brandt(2));
  auto full = restrict(b2, {0, 1, 2});
  EXPECT_EQ(full.groupoid.arrow_count(), b2.arrow_count());
  auto zero = restrict(b2, {0});
  EXPECT_EQ(zero.groupoid.arrow_count(), 1u);
  try {
    restrict(pair_groupoid(3), {0});
    FAIL();
  } catch (const precondition_error& e) {
    EXPECT_NE(std::string(e.what()).find("not invariant"), std::string::npos);
  }
}

TEST(Restrict, OrbitsAreStableUnderRestriction) {
  for (const auto& s : corpus()) {
    auto g = universal_groupoid(s);
    auto d = orbits_and_isotropy(g);
    // every union of orbits: test each single orbit and the union of the first two
    std::vector<std::vector<Index>> sets;
    for (const auto& o : d.orbits) sets.push_back(o.objects);
    if (d.orbits.size() >= 2) {
      auto u = d.orbits[0].objects;
      u.insert(u.end(), d.orbits[1].objects.begin(), d.orbits[1].objects.end());
      sets.push_back(u);
    }
    for (const auto& x : sets) {
      auto r = restrict(g, x);
      auto dr = orbits_and_isotropy(r.groupoid);
      std::set<std::vector<Index>> got, want;
      for (const auto& o : dr.orbits) {
        std::vector<Index> amb;
        for (Index y : o.objects) amb.push_back(r.objects[y]);
        got.insert(amb);
      }
      std::set<Index> in(x.begin(), x.end());
      for (const auto& o : d.orbits)
        if (in.count(o.objects.front())) want.insert(o.objects);
      EXPECT_EQ(got, want);
    }
  }
}
