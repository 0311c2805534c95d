#include <gtest/gtest.h>

#include "support.hpp"

using namespace ecat;
using namespace ecat::testing;

TEST(FinCat, RandomConcreteCategoriesAreCategories) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    FinCat C = random_category(rng);
    EXPECT_LE(C.objects(), 4u);
    for (ObjId x = 0; x < C.objects(); ++x)
      for (ObjId y = 0; y < C.objects(); ++y) EXPECT_LE(C.hom_size(x, y), 3u);
    EXPECT_TRUE(check_category(C).ok());
  }
}

TEST(FinCat, BrokenCompositeIsReported) {
  FinCat C = z2_group();
  C.set_then(Arrow{0, 0, 1}, Arrow{0, 0, 0}, 0);
  auto r = check_category(C);
  EXPECT_FALSE(r.ok());
}

TEST(FinCat, OppositeIsInvolutive) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    FinCat C = random_category(rng);
    EXPECT_EQ(C.opposite().opposite(), C);
  }
}

TEST(Enrichment, CanonicalSetEnrichmentOfRandomCategories) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 15; ++i) {
    FinCat C = random_category(rng);
    EnrichPtr E = canonical_set_enrichment(C);
    EXPECT_TRUE(check_enrichment(*E).ok()) << check_enrichment(*E).summary();
    EXPECT_TRUE(check_underlying_iso(*E).ok());
    EXPECT_EQ(underlying_category(*E), C);
  }
}

TEST(Enrichment, BoolVerdictMatchesPreorderOracle) {
  auto b = bool_base();
  for (unsigned bits = 0; bits < 16; ++bits) {
    auto le = [&](ObjId x, ObjId y) { return (bits >> (x * 2 + y)) & 1; };
    auto K = thin_kelly(b, 2, [&](ObjId x, ObjId y) -> ObjId { return le(x, y); });
    EXPECT_EQ(check_kelly(K).ok(), preorder_oracle(2, le)) << bits;
  }
}

TEST(Enrichment, CostVerdictMatchesTriangleOracle) {
  auto c = cost_base(2);
  const std::uint32_t inf = 3;
  for (unsigned code = 0; code < 256; ++code) {
    auto d = [&](ObjId x, ObjId y) -> std::uint32_t { return (code >> (2 * (x * 2 + y))) & 3; };
    auto K = thin_kelly(c, 2, d);
    EXPECT_EQ(check_kelly(K).ok(), metric_oracle(2, inf, d)) << code;
  }
}

TEST(Enrichment, BrokenTriangleNamesTheComposite) {
  auto c = cost_base(5);
  const std::uint32_t d[3][3] = {{0, 1, 5}, {6, 0, 1}, {6, 6, 0}};
  auto K = thin_kelly(c, 3, [&](ObjId x, ObjId y) { return d[x][y]; });
  auto r = check_kelly(K);
  ASSERT_EQ(r.failures.size(), 1u) << r.summary();
  EXPECT_EQ(r.failures[0].law, "kelly.ecomp_typing");
  EXPECT_EQ(to_string(r.failures[0].instance), "(0, 1, 2)");
  EXPECT_THROW(from_kelly(K), Error);
}

TEST(Enrichment, KellyRoundTripIsAnIsomorphism) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    EnrichPtr E = canonical_set_enrichment(random_category(rng));
    auto k = kelly_round_trip(E);
    EXPECT_TRUE(check_enrichment(*k.rebuilt).ok());
    EXPECT_TRUE(check_functor_enrichment(k.to_original).ok());
    EXPECT_TRUE(check_functor_enrichment(k.from_original).ok());
    EXPECT_TRUE(same_functor(compose_functors(k.from_original, k.to_original), id_functor(E)));
  }
}

TEST(Enrichment, PrecomposeIsComposition) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    FinCat C = random_category(rng);
    EnrichPtr E = canonical_set_enrichment(C);
    for (const Arrow& f : C.all_arrows())
      for (ObjId w = 0; w < C.objects(); ++w) {
        Mor pre = precompose_mor(*E, w, f);
        Mor post = postcompose_mor(*E, w, f);
        for (const Arrow& h : C.arrows(w, f.src)) EXPECT_EQ(pre.code[h.k], C.then(h, f).k);
        for (const Arrow& h : C.arrows(f.dst, w)) EXPECT_EQ(post.code[h.k], C.then(f, h).k);
      }
  }
}

TEST(Enrichment, CorruptedCompositionFails) {
  EnrichPtr E = canonical_set_enrichment(z2_group());
  auto bad = std::make_shared<Enrichment>(*E);
  bad->e_comp[0].code[3] = 1;
  auto r = check_enrichment(*bad);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.has_law("enrichment."));
}

TEST(Functor, IdentityAndCompositesPass) {
  EnrichPtr P = chain(3);
  auto K = thin_functor(P, P, {2, 2, 2});
  EXPECT_TRUE(check_functor_enrichment(id_functor(P)).ok());
  EXPECT_TRUE(check_functor_enrichment(K).ok());
  EXPECT_TRUE(check_functor_enrichment(compose_functors(K, id_functor(P))).ok());
  EXPECT_TRUE(same_functor(compose_functors(K, K), K));
}

TEST(Functor, NonMonotoneMapIsRejected) {
  EnrichPtr P = chain(2);
  EXPECT_THROW(thin_functor(P, P, {1, 0}), Error);
}

TEST(Functor, CollapsingComponentFails) {
  EnrichPtr S = canonical_set_enrichment(z2_group());
  // Z/2 has no automorphism besides the identity; sending both elements to
  // the generator breaks the unit law.
  auto same = make_functor(S, S, {0}, {Mor{2, 2, Code{0, 1}}});
  EXPECT_TRUE(check_functor_enrichment(same).ok());
  EXPECT_FALSE(check_functor_enrichment(make_functor(S, S, {0}, {Mor{2, 2, Code{1, 1}}})).ok());
}

TEST(Transformation, HexagonAndSquareAgree) {
  std::mt19937_64 rng(12);
  auto sets = finset_base(3);
  int seen = 0;
  for (int i = 0; i < 12; ++i) {
    EnrichPtr A = canonical_set_enrichment(random_category(rng, 2, 2), sets);
    EnrichPtr B = canonical_set_enrichment(random_category(rng, 3, 3), sets);
    std::vector<EnrichedFunctor> fs;
    try {
      fs = enumerate_enriched_functors(A, B, 50);
    } catch (const CapExceeded&) {
      continue;
    }
    for (const auto& F : fs)
      for (const auto& G : fs) {
        // every component table, natural or not
        std::vector<Arrow> comp(A->objects());
        std::function<void(ObjId)> go = [&](ObjId x) {
          if (x == A->objects()) {
            auto r = check_nat_trans_enrichment(EnrichedTransformation{F, G, comp});
            EXPECT_EQ(r.verdict("hexagon"), r.verdict("square"));
            ++seen;
            return;
          }
          for (const Arrow& a : B->under.arrows(F(x), G(x))) {
            comp[x] = a;
            go(x + 1);
          }
        };
        go(0);
      }
  }
  EXPECT_GT(seen, 20);
}

TEST(Transformation, UnnaturalComponentFails) {
  EnrichPtr P = chain(3);
  auto I = id_functor(P);
  auto K = thin_functor(P, P, {2, 2, 2});
  EnrichedTransformation t{I, K, {Arrow{0, 2, 0}, Arrow{1, 2, 0}, Arrow{2, 2, 0}}};
  EXPECT_TRUE(check_nat_trans_enrichment(t).ok());

  // Walking arrow into two parallel arrows a, b; identity components from
  // "pick a" to "pick b" are not natural.
  auto sets = finset_base(2);
  FinCat W = FinCat::build(
      2, [](ObjId x, ObjId y) { return x <= y ? 1u : 0u; }, [](ObjId) { return 0u; },
      [](const Arrow&, const Arrow&) { return 0u; });
  FinCat K2 = FinCat::build(
      2, [](ObjId x, ObjId y) { return x == y ? 1u : x < y ? 2u : 0u; }, [](ObjId) { return 0u; },
      [](const Arrow& f, const Arrow& g) { return f.src == f.dst ? g.k : f.k; });
  EnrichPtr A = canonical_set_enrichment(W, sets), B = canonical_set_enrichment(K2, sets);
  auto pick = [&](std::uint32_t k) {
    return make_functor(A, B, {0, 1}, {Mor{1, 1, Code{0}}, Mor{1, 2, Code{k}}, Mor{0, 0, {}}, Mor{1, 1, Code{0}}});
  };
  auto r = check_nat_trans_enrichment(EnrichedTransformation{pick(0), pick(1), {Arrow{0, 0, 0}, Arrow{1, 1, 0}}});
  EXPECT_TRUE(r.has_law("transformation.naturality"));
  EXPECT_EQ(r.verdict("hexagon"), std::optional<bool>(false));
  EXPECT_EQ(r.verdict("square"), std::optional<bool>(false));
}

TEST(Transformation, WhiskersAndVerticalComposites) {
  EnrichPtr P = chain(3);
  auto I = id_functor(P);
  auto K = thin_functor(P, P, {2, 2, 2});
  EnrichedTransformation t{I, K, {Arrow{0, 2, 0}, Arrow{1, 2, 0}, Arrow{2, 2, 0}}};
  EXPECT_TRUE(check_nat_trans_enrichment(whisker_left(K, t)).ok());
  EXPECT_TRUE(check_nat_trans_enrichment(whisker_right(t, K)).ok());
  EXPECT_TRUE(check_nat_trans_enrichment(vcompose(id_transformation(I), t)).ok());
  EXPECT_FALSE(invertible_2cell(t).has_value());
  EXPECT_TRUE(invertible_2cell(id_transformation(K)).has_value());
}
