#include <gtest/gtest.h>

#include "support.hpp"

using namespace ecat;
using namespace ecat::testing;

namespace {

EnrichPtr empty_enrichment() {
  return bool_poset(0, [](ObjId, ObjId) { return false; });
}

std::size_t monotone_maps(std::size_t n, std::size_t m) {
  // non-decreasing maps from an n-chain to an m-chain
  if (n == 0) return 1;
  std::size_t count = 0;
  std::vector<std::size_t> f(n, 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t lo) {
    if (i == n) {
      ++count;
      return;
    }
    for (std::size_t v = lo; v < m; ++v) go(i + 1, v);
  };
  go(0, 0);
  return count;
}

}  // namespace

TEST(SelfEnrichment, BuiltinsPassTheirChecker) {
  for (const BasePtr& b : {bool_base(), cost_base(2), finset_base(1)}) {
    EnrichPtr S = self_enrichment(b);
    auto r = check_enrichment(*S);
    EXPECT_TRUE(r.ok()) << b->name() << "\n" << r.summary();
    EXPECT_EQ(S->objects(), b->check_objects().size());
  }
  EXPECT_TRUE(check_enrichment(*self_enrichment(finset_base(3), {0, 1, 2})).ok());
}

TEST(SelfEnrichment, BoolHomIsImplication) {
  EnrichPtr S = self_enrichment(bool_base());
  for (ObjId x = 0; x < 2; ++x)
    for (ObjId y = 0; y < 2; ++y) EXPECT_EQ(S->hom(x, y), ObjId(!x || y));
}

TEST(Opposite, IsAnInvolution) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    EnrichPtr E = canonical_set_enrichment(random_category(rng));
    EnrichPtr O = opposite_enrichment(E);
    EXPECT_TRUE(check_enrichment(*O).ok());
    EXPECT_EQ(O->under, E->under.opposite());
    EnrichPtr OO = opposite_enrichment(O);
    EXPECT_EQ(OO->under, E->under);
    EXPECT_TRUE(check_functor_enrichment(identity_comparison(OO, E)).ok());
    EXPECT_TRUE(check_functor_enrichment(identity_comparison(E, OO)).ok());
  }
  EnrichPtr M = from_kelly(thin_kelly(cost_base(4), 2, [](ObjId x, ObjId y) -> ObjId { return x == y ? 0 : x < y ? 1 : 3; }));
  EnrichPtr Mo = opposite_enrichment(M);
  EXPECT_EQ(Mo->hom(0, 1), 3u);
  EXPECT_EQ(Mo->hom(1, 0), 1u);
}

TEST(FullSub, NestedRestrictionsCompose) {
  EnrichPtr Q = bool_poset(4, [](ObjId x, ObjId y) { return x <= y || (x == 1 && y == 0); });
  auto a = full_sub_enrichment(Q, std::vector<ObjId>{0, 1, 3});
  auto b = full_sub_enrichment(a.sub, std::vector<ObjId>{1, 2});
  auto c = full_sub_enrichment(Q, std::vector<ObjId>{1, 3});
  EXPECT_EQ(b.sub->under, c.sub->under);
  EXPECT_EQ(b.sub->hom_obj, c.sub->hom_obj);
  for (const auto* s : {&a, &b, &c}) {
    EXPECT_TRUE(check_enrichment(*s->sub).ok());
    EXPECT_TRUE(check_functor_enrichment(s->inclusion).ok());
  }
  EXPECT_EQ(c.inclusion.ob_map, (std::vector<ObjId>{1, 3}));
  auto even = full_sub_enrichment(Q, [](ObjId x) { return x % 2 == 0; });
  EXPECT_EQ(even.sub->objects(), 2u);
}

TEST(Enumeration, CountsMatchMonotoneMaps) {
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t m = 0; m <= 3; ++m) {
      EnrichPtr A = n ? chain(n) : empty_enrichment();
      EnrichPtr B = m ? chain(m) : empty_enrichment();
      auto fs = enumerate_enriched_functors(A, B);
      EXPECT_EQ(fs.size(), monotone_maps(n, m)) << n << " -> " << m;
      for (const auto& F : fs) EXPECT_TRUE(check_functor_enrichment(F).ok());
    }
}

TEST(Enumeration, CapIsEnforced) {
  EXPECT_THROW(enumerate_enriched_functors(chain(3), chain(3), 5), CapExceeded);
}

TEST(Enumeration, GroupEndomorphisms) {
  // Z/2 -> Z/2 as one-object categories: the trivial map and the identity.
  EnrichPtr S = canonical_set_enrichment(z2_group());
  EXPECT_EQ(enumerate_enriched_functors(S, S).size(), 2u);
}

TEST(FunctorCategory, ChainTwoIntoItself) {
  EnrichPtr A = chain(2);
  auto fc = functor_category_enrichment(A, A);
  ASSERT_EQ(fc.functors.size(), 3u);
  EXPECT_TRUE(check_enrichment(*fc.enrichment).ok());
  // the three monotone maps are themselves a 3-chain under the pointwise order
  std::size_t arrows = 0;
  for (ObjId i = 0; i < 3; ++i)
    for (ObjId j = 0; j < 3; ++j) {
      arrows += fc.enrichment->under.hom_size(i, j);
      EXPECT_EQ(fc.transformations[i * 3 + j].size(), fc.enrichment->under.hom_size(i, j));
      for (const auto& t : fc.transformations[i * 3 + j]) EXPECT_TRUE(check_nat_trans_enrichment(t).ok());
    }
  EXPECT_EQ(arrows, 6u);
}

TEST(FunctorCategory, SetValuedCountsTransformations) {
  EnrichPtr S = canonical_set_enrichment(z2_group());
  auto fc = functor_category_enrichment(S, S);
  ASSERT_EQ(fc.functors.size(), 2u);
  EXPECT_TRUE(check_enrichment(*fc.enrichment).ok());
  for (ObjId i = 0; i < 2; ++i)
    for (ObjId j = 0; j < 2; ++j)
      EXPECT_EQ(fc.transformations[i * 2 + j].size(), enumerate_transformations(fc.functors[i], fc.functors[j]).size());
}

TEST(FunctorCategory, NeedsClosedBase) {
  EnrichPtr T = from_kelly(thin_kelly(
      std::make_shared<TableBase>(TableBase::thin(
          "open", 2, [](ObjId a, ObjId b) { return a <= b; }, 1, [](ObjId a, ObjId b) { return a & b; }, nullptr,
          true)),
      1, [](ObjId, ObjId) -> ObjId { return 1; }));
  EXPECT_THROW(functor_category_enrichment(T, T), CapabilityError);
}

TEST(Dialgebra, ObjectsAreArrowsBetweenImages) {
  EnrichPtr P = chain(3);
  auto I = id_functor(P);
  auto K = thin_functor(P, P, {2, 2, 2});
  auto up = dialgebra_enrichment(I, K);
  EXPECT_EQ(up.objects.size(), 3u);
  EXPECT_TRUE(check_enrichment(*up.enrichment).ok());
  EXPECT_TRUE(check_functor_enrichment(up.projection).ok());
  auto down = dialgebra_enrichment(K, I);
  ASSERT_EQ(down.objects.size(), 1u);
  EXPECT_EQ(down.objects[0].x, 2u);
}

TEST(Dialgebra, GroupFixedPoints) {
  // dialgebras id -> id over Z/2 are the group elements; homs commute with them
  EnrichPtr S = canonical_set_enrichment(z2_group());
  auto d = dialgebra_enrichment(id_functor(S), id_functor(S));
  ASSERT_EQ(d.objects.size(), 2u);
  EXPECT_TRUE(check_enrichment(*d.enrichment).ok());
  for (ObjId i = 0; i < 2; ++i)
    for (ObjId j = 0; j < 2; ++j) EXPECT_EQ(d.enrichment->under.hom_size(i, j), i == j ? 2u : 0u);
}

TEST(ChangeOfBase, BoolToCostIsAccepted) {
  auto F = bool_to_cost(bool_base(), cost_base(3));
  EXPECT_TRUE(check_lax(F).ok());
  EnrichPtr P = vee();
  EnrichPtr C = change_of_base(F, P);
  EXPECT_TRUE(check_enrichment(*C).ok());
  EXPECT_EQ(C->under, P->under);
  for (ObjId x = 0; x < 3; ++x)
    for (ObjId y = 0; y < 3; ++y) EXPECT_EQ(C->hom(x, y), P->hom(x, y) ? 0u : 4u);
}

TEST(ChangeOfBase, RefusesExactlyWhenPreservationFails) {
  auto term = terminal_base();
  std::vector<std::pair<LaxMonoidalFunctor, EnrichPtr>> cases;
  cases.push_back({bool_to_cost(bool_base(), cost_base(2)), chain(3)});
  cases.push_back({collapse_to_terminal(bool_base(), term), chain(2)});
  cases.push_back({collapse_to_terminal(cost_base(3), term),
                   from_kelly(thin_kelly(cost_base(3), 2, [](ObjId x, ObjId y) -> ObjId { return x == y ? 0 : 2; }))});
  cases.push_back({collapse_to_terminal(term, term), from_kelly(thin_kelly(term, 2, [](ObjId, ObjId) -> ObjId { return 0; }))});
  cases.push_back({identity_lax(cost_base(2)),
                   from_kelly(thin_kelly(cost_base(2), 2, [](ObjId x, ObjId y) -> ObjId { return x == y ? 0 : 1; }))});
  int refused = 0;
  for (const auto& [F, E] : cases) {
    EXPECT_TRUE(check_lax(F).ok()) << F.name;
    const bool preserves = check_preserves_underlying(F, E->hom_obj).report.ok();
    bool accepted = true;
    try {
      EXPECT_TRUE(check_enrichment(*change_of_base(F, E)).ok());
    } catch (const Refusal&) {
      accepted = false;
      ++refused;
    }
    EXPECT_EQ(accepted, preserves) << F.name;
  }
  EXPECT_EQ(refused, 2);
}

TEST(ChangeOfBase, LaxCompositesStayLax) {
  auto F = compose_lax(bool_to_cost(bool_base(), cost_base(2)), identity_lax(cost_base(2)));
  EXPECT_TRUE(check_lax(F).ok());
}

TEST(SetEnrichment, AnyTwoAreIsomorphic) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 15; ++i) {
    FinCat C = random_category(rng);
    EnrichPtr A = canonical_set_enrichment(C);
    EnrichPtr B = shuffled_set_enrichment(C, rng);
    ASSERT_TRUE(check_enrichment(*B).ok());
    auto iso = set_enrichment_unique(A, B);
    EXPECT_TRUE(check_functor_enrichment(iso.forward).ok());
    EXPECT_TRUE(check_functor_enrichment(iso.backward).ok());
    EXPECT_TRUE(same_functor(compose_functors(iso.forward, iso.backward), id_functor(A)));
    EXPECT_TRUE(same_functor(compose_functors(iso.backward, iso.forward), id_functor(B)));
  }
  EXPECT_THROW(set_enrichment_unique(canonical_set_enrichment(z2_group()), chain(1)), CapabilityError);
}

TEST(StructEnrichment, RoundTripThroughData) {
  std::mt19937_64 rng(41);
  BasePtr base = builtin_base("finposet_struct", {3});
  const auto& S = as_struct_base(base).structure();
  int built = 0, refused = 0;
  for (int i = 0; i < 60; ++i) {
    FinCat C = random_category(rng, 3, 3);
    StructuredHoms d{C, {}};
    for (ObjId x = 0; x < C.objects(); ++x)
      for (ObjId y = 0; y < C.objects(); ++y) {
        auto all = S.structures(C.hom_size(x, y));
        d.hom_struct.push_back(all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)]);
      }
    try {
      EnrichPtr E = struct_data_to_enrichment(base, d);
      ++built;
      EXPECT_TRUE(check_enrichment(*E).ok());
      EXPECT_EQ(struct_enrichment_to_data(*E), d);
    } catch (const Refusal&) {
      ++refused;
    }
  }
  EXPECT_GT(built, 10);
  EXPECT_GT(refused, 0);
}

TEST(StructEnrichment, DiscreteStructuresAlwaysBuild) {
  std::mt19937_64 rng(42);
  BasePtr base = builtin_base("trivial_struct", {3});
  const auto& S = as_struct_base(base).structure();
  for (int i = 0; i < 20; ++i) {
    FinCat C = random_category(rng, 3, 3);
    StructuredHoms d{C, {}};
    for (ObjId x = 0; x < C.objects(); ++x)
      for (ObjId y = 0; y < C.objects(); ++y) d.hom_struct.push_back(S.structures(C.hom_size(x, y)).front());
    EXPECT_EQ(struct_enrichment_to_data(*struct_data_to_enrichment(base, d)), d);
  }
}
