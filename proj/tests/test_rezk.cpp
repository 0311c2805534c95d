#include <gtest/gtest.h>

#include "support.hpp"

using namespace ecat;
using namespace ecat::testing;

namespace {

EnrichPtr cost_space(std::uint32_t d01, std::uint32_t d10) {
  return from_kelly(thin_kelly(cost_base(3), 2, [=](ObjId x, ObjId y) -> ObjId { return x == y ? 0 : x < y ? d01 : d10; }));
}

}  // namespace

TEST(Rezk, PreorderCompletionsAreSkeletal) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& le : preorders(n)) {
      EnrichPtr P = bool_poset(n, le);
      auto rz = rezk_completion(P);
      EXPECT_EQ(rz.completion->objects(), iso_classes(n, le));
      auto u = univalence_report(*rz.completion);
      EXPECT_TRUE(u.skeletal);
      EXPECT_TRUE(u.gaunt);
      EXPECT_TRUE(rz.ff.ok);
      EXPECT_TRUE(rz.eso.ok);
      EXPECT_TRUE(check_functor_enrichment(rz.unit_functor).ok());
      for (ObjId x = 0; x < n; ++x) EXPECT_TRUE(is_iso(P->under, rz.chosen_iso[x]));
    }
}

TEST(Rezk, SetEnrichmentsKeepAutomorphisms) {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 20; ++i) {
    EnrichPtr E = canonical_set_enrichment(random_category(rng));
    auto rz = rezk_completion(E);
    auto u = univalence_report(*rz.completion);
    EXPECT_TRUE(u.skeletal);
    EXPECT_TRUE(is_fully_faithful(rz.unit_functor).ok);
    EXPECT_TRUE(is_essentially_surjective(rz.unit_functor).ok);
    // automorphism groups are invariant under the completion
    auto before = univalence_report(*E);
    for (ObjId x = 0; x < E->objects(); ++x)
      EXPECT_EQ(before.automorphism_counts[x], u.automorphism_counts[rz.unit_functor(x)]);
  }
  auto z = univalence_report(*canonical_set_enrichment(z2_group()));
  EXPECT_TRUE(z.skeletal);
  EXPECT_FALSE(z.gaunt);
  EXPECT_EQ(z.automorphism_counts, (std::vector<std::size_t>{2}));
}

TEST(Rezk, IsIdempotent) {
  std::mt19937_64 rng(62);
  for (int i = 0; i < 15; ++i) {
    EnrichPtr E = canonical_set_enrichment(random_category(rng));
    EnrichPtr R = rezk_completion(E).completion;
    auto again = rezk_completion(R);
    EXPECT_EQ(again.completion->objects(), R->objects());
    EXPECT_EQ(again.completion->under, R->under);
  }
}

TEST(Rezk, IsomorphicPointsCollapse) {
  auto rz = rezk_completion(codiscrete(3));
  EXPECT_EQ(rz.completion->objects(), 1u);
  EXPECT_EQ(rz.unit_functor.ob_map, (std::vector<ObjId>{0, 0, 0}));
}

TEST(Yoneda, BoolPosetsUpToThreePoints) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& le : preorders(n)) {
      EnrichPtr P = bool_poset(n, le);
      auto r = check_yoneda_ff(P);
      EXPECT_TRUE(r.ok()) << r.summary();
      EXPECT_EQ(yoneda(P).presheaves.functors.size(), antitone_maps(n, le));
    }
}

TEST(Yoneda, CostTwoPointSpaces) {
  for (std::uint32_t a = 0; a <= 4; ++a)
    for (std::uint32_t b = 0; b <= 4; ++b) {
      auto r = check_yoneda_ff(cost_space(a, b));
      EXPECT_TRUE(r.ok()) << a << " " << b << "\n" << r.summary();
    }
}

TEST(Yoneda, ImageMatchesSkeleton) {
  // Representables of isomorphic objects coincide, so the image of the
  // embedding has one object per isomorphism class.
  for (const auto& le : preorders(3)) {
    EnrichPtr P = bool_poset(3, le);
    auto y = yoneda(P);
    std::set<ObjId> image(y.embedding.ob_map.begin(), y.embedding.ob_map.end());
    EXPECT_EQ(image.size(), rezk_completion(P).completion->objects());
  }
}

TEST(Transport, AlongACollapse) {
  EnrichPtr A = codiscrete(2), B = codiscrete(1), C = chain(2);
  auto F = thin_functor(A, B, {0, 0});
  auto G1 = thin_functor(B, C, {0}), G2 = thin_functor(B, C, {1});
  EnrichedTransformation tau{compose_functors(F, G1), compose_functors(F, G2), {Arrow{0, 1, 0}, Arrow{0, 1, 0}}};
  auto t = transport_transformation(F, G1, G2, tau);
  EXPECT_TRUE(t.report.ok()) << t.report.summary();
  EXPECT_EQ(t.theta.component, (std::vector<Arrow>{Arrow{0, 1, 0}}));
  EXPECT_THROW(transport_transformation(thin_functor(chain(1), chain(2), {0}), thin_functor(chain(2), C, {0, 1}),
                                        thin_functor(chain(2), C, {0, 1}), EnrichedTransformation{}),
               Refusal);
}

TEST(Extend, AlongAWeakEquivalence) {
  EnrichPtr A = codiscrete(2), B = codiscrete(1);
  auto F = thin_functor(A, B, {0, 0});
  for (EnrichPtr C : {chain(2), chain(3), vee()})
    for (const auto& G : enumerate_enriched_functors(A, C)) {
      auto e = extend_functor(F, G);
      EXPECT_TRUE(e.report.ok()) << e.report.summary();
      EXPECT_TRUE(check_functor_enrichment(e.H).ok());
      EXPECT_TRUE(invertible_2cell(e.comparison).has_value());
    }
  // A target with distinct isomorphic objects leaves the object choice open.
  auto ext = extend_functor(F, thin_functor(A, codiscrete(2), {0, 0}));
  EXPECT_TRUE(ext.report.has_law("extend.object_unique"));
  EXPECT_THROW(extend_functor(thin_functor(chain(1), chain(2), {0}), id_functor(chain(1))), Error);
}

TEST(Precomposition, WeakEquivalencesInduceEquivalences) {
  std::vector<std::pair<EnrichedFunctor, EnrichPtr>> triples;
  auto F = thin_functor(codiscrete(2), codiscrete(1), {0, 0});
  for (EnrichPtr C : {chain(1), chain(2), chain(3), vee()}) triples.push_back({F, C});
  for (const auto& le : preorders(3)) {
    auto rz = rezk_completion(bool_poset(3, le));
    triples.push_back({rz.unit_functor, chain(2)});
    if (triples.size() >= 12) break;
  }
  for (const auto& [G, E3] : triples) {
    auto p = check_precomp_equivalence(G, E3);
    EXPECT_TRUE(p.report.ok()) << p.report.summary();
    EXPECT_EQ(p.classes_from_cod, p.classes_from_dom);
  }
}

TEST(Precomposition, NonEquivalenceIsDetected) {
  auto J = thin_functor(chain(2), chain(3), {0, 2});
  bool caught = false;
  try {
    caught = !check_precomp_equivalence(J, chain(2)).report.ok();
  } catch (const Refusal&) {
    caught = true;
  }
  EXPECT_TRUE(caught);
}
