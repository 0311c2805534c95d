#include <gtest/gtest.h>

#include "support.hpp"

using namespace ecat;
using namespace ecat::testing;

TEST(Monad, FixturesAreMonads) {
  for (const auto& T : monad_fixtures()) {
    auto r = check_enriched_monad(T);
    EXPECT_TRUE(r.ok()) << r.summary();
  }
}

TEST(Monad, BrokenMultiplicationFailsTheUnitLaws) {
  // Z/2 with unit the generator forces mu to be the generator as well.
  EnrichedMonad T = z2_monad();
  T.mult.component[0] = Arrow{0, 0, 0};
  auto r = check_enriched_monad(T);
  EXPECT_TRUE(r.has_law("monad.left_unit"));
  EXPECT_TRUE(r.has_law("monad.right_unit"));
  EXPECT_FALSE(r.has_law("monad.associativity"));
}

TEST(Monad, IllTypedUnitIsRejected) {
  EnrichedMonad T = top_point_monad();
  T.unit.component[0] = Arrow{0, 0, 0};
  bool rejected = false;
  try {
    rejected = !check_enriched_monad(T).ok();
  } catch (const Error&) {
    rejected = true;
  }
  EXPECT_TRUE(rejected);
}

TEST(Kleisli, UnderlyingCategoryMatchesOracle) {
  for (const auto& T : monad_fixtures()) {
    EnrichPtr K = fkleisli(T);
    EXPECT_TRUE(check_enrichment(*K).ok());
    EXPECT_EQ(underlying_category(*K), oracle_kleisli(T));
    EXPECT_EQ(K->under, oracle_kleisli(T));
  }
}

TEST(Kleisli, TopPointHasOneObjectUpToIso) {
  EnrichPtr K = fkleisli(top_point_monad());
  ASSERT_EQ(K->objects(), 3u);
  for (ObjId x = 0; x < 3; ++x)
    for (ObjId y = 0; y < 3; ++y) EXPECT_EQ(K->under.hom_size(x, y), 1u);
  EXPECT_FALSE(univalence_report(*K).skeletal);
}

TEST(EilenbergMoore, AlgebrasMatchOracle) {
  for (const auto& T : monad_fixtures()) {
    auto em = eilenberg_moore(T);
    auto o = oracle_algebras(T);
    ASSERT_EQ(em.algebras.size(), o.algebras.size());
    for (std::size_t i = 0; i < o.algebras.size(); ++i) {
      EXPECT_EQ(em.algebras[i].x, o.algebras[i].first);
      EXPECT_EQ(em.algebras[i].f, o.algebras[i].second);
    }
    const std::size_t N = o.algebras.size();
    for (ObjId i = 0; i < N; ++i)
      for (ObjId j = 0; j < N; ++j) {
        ASSERT_EQ(em.enrichment->under.hom_size(i, j), o.hom[i * N + j].size());
        std::set<Arrow> got, want(o.hom[i * N + j].begin(), o.hom[i * N + j].end());
        for (const Arrow& h : em.enrichment->under.arrows(i, j)) got.insert(em.forgetful(h));
        EXPECT_EQ(got, want);
      }
    EXPECT_TRUE(check_enrichment(*em.enrichment).ok());
    EXPECT_TRUE(check_functor_enrichment(em.forgetful).ok());
  }
}

TEST(EilenbergMoore, TopPointHasOneAlgebra) {
  auto em = eilenberg_moore(top_point_monad());
  ASSERT_EQ(em.algebras.size(), 1u);
  EXPECT_EQ(em.algebras[0].x, 2u);
}

TEST(UnivalentKleisli, ComparisonIsAWeakEquivalence) {
  for (const auto& T : monad_fixtures()) {
    auto s = kleisli_setting(T);
    EXPECT_TRUE(check_functor_enrichment(s.kappa).ok());
    EXPECT_TRUE(is_fully_faithful(s.kappa).ok);
    EXPECT_TRUE(is_essentially_surjective(s.kappa).ok);
    EXPECT_TRUE(s.univalent.report.skeletal);
    EXPECT_TRUE(check_enrichment(*s.univalent.enrichment()).ok());
  }
}

TEST(UnivalentKleisli, ObjectCounts) {
  EXPECT_EQ(kleisli_setting(identity_chain_monad()).univalent.enrichment()->objects(), 3u);
  EXPECT_EQ(kleisli_setting(top_point_monad()).univalent.enrichment()->objects(), 1u);
  EXPECT_EQ(kleisli_setting(z2_monad()).univalent.enrichment()->objects(), 1u);
}

TEST(Cocone, CanonicalFreeAndAlgebraCoconesHoldTheirLaws) {
  for (const auto& T : monad_fixtures()) {
    auto s = kleisli_setting(T);
    EXPECT_TRUE(check_kleisli_cocone(T, s.raw_cocone).ok());
    EXPECT_TRUE(check_kleisli_cocone(T, s.cocone).ok());
    auto em = eilenberg_moore(T);
    auto q = eilenberg_moore_cocone(T, em, free_algebra_functor(T, em));
    EXPECT_TRUE(check_kleisli_cocone(T, q).ok());
    EXPECT_TRUE(check_kleisli_cocone(T, point_cocone(T)).ok());
  }
}

TEST(Cocone, BrokenCellFails) {
  EnrichedMonad T = z2_monad();
  auto s = kleisli_setting(T);
  KleisliCocone q = s.raw_cocone;
  auto& c = q.cell.component[0];
  c.k = 1 - c.k;
  auto r = check_kleisli_cocone(T, q);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.has_law("cocone.unit"));
}

TEST(UniversalProperty, EveryNontrivialCoconeHasAMediator) {
  for (const auto& T : monad_fixtures()) {
    auto s = kleisli_setting(T);
    auto em = eilenberg_moore(T);
    for (const KleisliCocone& q :
         {s.cocone, eilenberg_moore_cocone(T, em, free_algebra_functor(T, em)), point_cocone(T)}) {
      auto x = kleisli_universal_extend(T, s, q);
      EXPECT_TRUE(x.report.ok()) << x.report.summary();
      EXPECT_GE(x.mediators, 1u);
      EXPECT_GT(x.scanned, 0u);
    }
  }
}

TEST(UniversalProperty, GroupMediatorsDifferByAnAutomorphism) {
  EnrichedMonad T = z2_monad();
  auto s = kleisli_setting(T);
  auto x = kleisli_universal_extend(T, s, s.cocone);
  EXPECT_TRUE(x.report.ok());
  EXPECT_EQ(x.mediators, 2u);
}

TEST(UniversalProperty, NonUnivalentApexLeavesObjectsOpen) {
  EnrichedMonad T = top_point_monad();
  auto s = kleisli_setting(T);
  auto x = kleisli_universal_extend(T, s, s.raw_cocone);
  EXPECT_TRUE(x.report.has_law("extend.object_unique")) << x.report.summary();
}

TEST(UniversalProperty, RefusesBrokenCocones) {
  EnrichedMonad T = z2_monad();
  auto s = kleisli_setting(T);
  KleisliCocone q = s.cocone;
  q.cell.component[0].k ^= 1;
  EXPECT_THROW(kleisli_universal_extend(T, s, q), Refusal);
}
