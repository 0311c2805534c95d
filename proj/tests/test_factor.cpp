#include <gtest/gtest.h>

#include "support.hpp"

using namespace ecat;
using namespace ecat::testing;

TEST(Predicates, AgreeWithOracles) {
  std::mt19937_64 rng(51);
  int ff = 0, eso = 0;
  for (const auto& F : random_functors(rng, 40)) {
    EXPECT_EQ(is_fully_faithful(F).ok, ff_oracle(F));
    EXPECT_EQ(is_essentially_surjective(F).ok, eso_oracle(F));
    ff += ff_oracle(F);
    eso += eso_oracle(F);
  }
  EXPECT_GT(ff, 0);
  EXPECT_LT(ff, 40);
  EXPECT_GT(eso, 0);
  EXPECT_LT(eso, 40);
}

TEST(Predicates, FailuresAreNamed) {
  auto J = thin_functor(chain(2), chain(3), {0, 2});
  EXPECT_TRUE(is_fully_faithful(J).ok);
  auto e = is_essentially_surjective(J);
  EXPECT_FALSE(e.ok);
  EXPECT_EQ(e.missed, (std::vector<ObjId>{1}));
  auto K = thin_functor(chain(2), chain(2), {1, 1});
  auto f = is_fully_faithful(K);
  EXPECT_FALSE(f.ok);
  ASSERT_EQ(f.failing.size(), 1u);
  EXPECT_EQ(f.failing[0], (std::pair<ObjId, ObjId>{1, 0}));
}

TEST(ImageFactorization, SplitsRandomFunctors) {
  std::mt19937_64 rng(52);
  for (const auto& F : random_functors(rng, 30)) {
    auto fr = image_factorization(F);
    EXPECT_TRUE(check_enrichment(*fr.image).ok());
    EXPECT_TRUE(eso_oracle(fr.eso_part));
    EXPECT_TRUE(ff_oracle(fr.ff_part));
    EXPECT_TRUE(check_nat_trans_enrichment(fr.comparison).ok());
    EXPECT_TRUE(invertible_2cell(fr.comparison).has_value());
    EXPECT_TRUE(same_functor(compose_functors(fr.eso_part, fr.ff_part), F));
    for (ObjId y = 0; y < F.cod->objects(); ++y) {
      bool in_image = std::find(fr.image_objects.begin(), fr.image_objects.end(), y) != fr.image_objects.end();
      bool oracle = false;
      for (ObjId x = 0; x < F.dom->objects(); ++x) oracle = oracle || iso_oracle(F.cod->under, F(x), y);
      EXPECT_EQ(in_image, oracle);
    }
  }
}

TEST(AdjointEquivalence, FromSkeletonInclusions) {
  std::mt19937_64 rng(53);
  int built = 0;
  for (int i = 0; i < 25; ++i) {
    EnrichPtr E = canonical_set_enrichment(random_category(rng));
    for (const auto& F : {skeleton_inclusion(E), id_functor(E)}) {
      auto a = weak_equivalence_to_adjoint_equivalence(F);
      EXPECT_TRUE(a.triangles.ok()) << a.triangles.summary();
      EXPECT_TRUE(invertible_2cell(a.unit).has_value());
      EXPECT_TRUE(invertible_2cell(a.counit).has_value());
      EXPECT_TRUE(check_functor_enrichment(a.bwd).ok());
      ++built;
    }
  }
  EXPECT_GE(built, 20);
}

TEST(AdjointEquivalence, CollapseOfIsomorphicPoints) {
  auto F = thin_functor(codiscrete(3), codiscrete(1), {0, 0, 0});
  auto a = weak_equivalence_to_adjoint_equivalence(F);
  EXPECT_TRUE(a.triangles.ok());
  EXPECT_EQ(a.bwd.ob_map.size(), 1u);
}

TEST(AdjointEquivalence, RefusesNonEquivalences) {
  EXPECT_THROW(weak_equivalence_to_adjoint_equivalence(thin_functor(chain(2), chain(3), {0, 2})), Refusal);
  EXPECT_THROW(weak_equivalence_to_adjoint_equivalence(thin_functor(chain(2), chain(1), {0, 0})), Refusal);
}

TEST(Lift, ThinSquaresHaveUniqueFillers) {
  // F collapses two isomorphic points; G includes a full subposet.
  auto A = codiscrete(2), B = codiscrete(1);
  auto F = thin_functor(A, B, {0, 0});
  int squares = 0;
  for (EnrichPtr D : {chain(3), vee()})
    for (std::vector<ObjId> keep : {std::vector<ObjId>{0, 2}, std::vector<ObjId>{1, 2}, std::vector<ObjId>{2}}) {
      auto sub = full_sub_enrichment(D, keep);
      const auto& G = sub.inclusion;
      for (ObjId c = 0; c < keep.size(); ++c) {
        auto H1 = thin_functor(A, sub.sub, {c, c});
        auto H2 = thin_functor(B, D, {keep[c]});
        LiftSquare sq{F, G, H1, H2, id_transformation(compose_functors(F, H2))};
        sq.glue.dst = compose_functors(H1, G);
        Lift l = orthogonal_lift(sq);
        EXPECT_TRUE(check_functor_enrichment(l.L).ok());
        EXPECT_TRUE(invertible_2cell(l.upper).has_value());
        EXPECT_TRUE(invertible_2cell(l.lower).has_value());
        auto t = lift_2cell(sq, l.L, l.L, id_transformation(compose_functors(l.L, G)),
                            id_transformation(compose_functors(F, l.L)));
        EXPECT_EQ(t.solutions, 1u);
        ++squares;
      }
    }
  EXPECT_EQ(squares, 10);
}

TEST(Lift, GroupTwoCellIsUnique) {
  EnrichPtr S = canonical_set_enrichment(z2_group());
  auto I = id_functor(S);
  LiftSquare sq{I, I, I, I, id_transformation(I)};
  for (std::uint32_t g = 0; g < 2; ++g) {
    EnrichedTransformation tau{I, I, {Arrow{0, 0, g}}};
    auto t = lift_2cell(sq, I, I, tau, tau);
    EXPECT_EQ(t.candidates, 2u);
    EXPECT_EQ(t.solutions, 1u);
    EXPECT_EQ(t.zeta.component[0].k, g);
  }
  EnrichedTransformation a{I, I, {Arrow{0, 0, 0}}}, b{I, I, {Arrow{0, 0, 1}}};
  EXPECT_THROW(lift_2cell(sq, I, I, a, b), Refusal);
}

TEST(Lift, RefusesWrongSides) {
  EnrichPtr P2 = chain(2), P3 = chain(3);
  auto J = thin_functor(P2, P3, {0, 2});
  auto I2 = id_functor(P2), I3 = id_functor(P3);
  LiftSquare sq{J, J, I2, I3, id_transformation(J)};
  EXPECT_THROW(orthogonal_lift(sq), Refusal);
}

TEST(Closure, InvertibleTwoCellsPreserveBothClasses) {
  std::mt19937_64 rng(54);
  auto sets = finset_base(3);
  int pairs = 0;
  for (int i = 0; i < 30 && pairs < 40; ++i) {
    EnrichPtr A = canonical_set_enrichment(random_category(rng, 3, 2), sets);
    EnrichPtr B = canonical_set_enrichment(random_category(rng, 3, 3), sets);
    std::vector<EnrichedFunctor> fs;
    try {
      fs = enumerate_enriched_functors(A, B, 60);
    } catch (const CapExceeded&) {
      continue;
    }
    for (const auto& F : fs)
      for (const auto& G : fs) {
        if (&F == &G) continue;
        for (const auto& t : enumerate_transformations(F, G))
          if (invertible_2cell(t)) {
            EXPECT_EQ(is_fully_faithful(F).ok, is_fully_faithful(G).ok);
            EXPECT_EQ(is_essentially_surjective(F).ok, is_essentially_surjective(G).ok);
            ++pairs;
            break;
          }
      }
  }
  EXPECT_GT(pairs, 5);
}
