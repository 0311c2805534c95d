#pragma once

#include <set>

#include "factor.hpp"

namespace ecat {

// ---------------------------------------------------------------------------
// univalence and skeletons

struct UnivalenceReport {
  bool skeletal = true;
  bool gaunt = true;
  std::vector<std::size_t> automorphism_counts;
  std::vector<ObjId> representative;  // least object of each iso class
};

inline UnivalenceReport univalence_report(const Enrichment& E) {
  const FinCat& C = E.under;
  UnivalenceReport r;
  for (ObjId x = 0; x < C.objects(); ++x) {
    r.automorphism_counts.push_back(isos(C, x, x).size());
    ObjId rep = x;
    for (ObjId y = 0; y < x; ++y)
      if (!isos(C, y, x).empty()) {
        rep = y;
        break;
      }
    r.representative.push_back(rep);
    if (rep != x) r.skeletal = false;
  }
  r.gaunt = r.skeletal && std::all_of(r.automorphism_counts.begin(), r.automorphism_counts.end(),
                                      [](std::size_t c) { return c == 1; });
  return r;
}

struct RezkResult {
  EnrichPtr completion;
  EnrichedFunctor unit_functor;
  FullyFaithfulResult ff;
  EssentiallySurjectiveResult eso;
  std::vector<Arrow> chosen_iso;  // x -> its representative
};

/// Full subcategory on the least object of each iso class. The unit sends
/// x to its representative and conjugates homs by the first iso x -> rep x.
inline RezkResult rezk_completion(const EnrichPtr& E) {
  const FinCat& C = E->under;
  const MonoidalBase& v = E->V();
  auto u = univalence_report(*E);
  std::vector<ObjId> reps;
  for (ObjId x = 0; x < C.objects(); ++x)
    if (u.representative[x] == x) reps.push_back(x);
  auto sub = full_sub_enrichment(E, reps);
  const std::size_t n = C.objects();
  std::vector<ObjId> ob;
  std::vector<Arrow> j;
  for (ObjId x = 0; x < n; ++x) {
    ObjId r = u.representative[x];
    ob.push_back(static_cast<ObjId>(std::lower_bound(reps.begin(), reps.end(), r) - reps.begin()));
    j.push_back(isos(C, x, r).front());
  }
  std::vector<Mor> efun;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      efun.push_back(v.then(postcompose_mor(*E, y, inverse_arrow(C, j[x])),
                            precompose_mor(*E, u.representative[x], j[y])));
  RezkResult out{sub.sub, make_functor(E, sub.sub, ob, std::move(efun)), {}, {}, j};
  out.ff = is_fully_faithful(out.unit_functor);
  out.eso = is_essentially_surjective(out.unit_functor);
  return out;
}

// ---------------------------------------------------------------------------
// representables and Yoneda

/// The opposite of E and the self-enrichment on the base's check window plus
/// every hom-object of E: the domain and codomain of representables.
struct YonedaSetting {
  EnrichPtr E, op, self;
  std::vector<ObjId> self_objects;  // base object of each self-enrichment object

  ObjId self_index(ObjId base_object) const {
    auto it = std::lower_bound(self_objects.begin(), self_objects.end(), base_object);
    if (it == self_objects.end() || *it != base_object) throw StructuralError("object not in the self-enrichment");
    return static_cast<ObjId>(it - self_objects.begin());
  }
  /// The arrow of the self-enrichment named by a base morphism.
  Arrow self_arrow(const Mor& m) const {
    const MonoidalBase& v = E->V();
    Mor p = v.lam(v.unit(), m.src, v.then(v.lunitor(m.src), m));
    auto a = self->to_arr(self_index(m.src), self_index(m.dst), p);
    if (!a) throw StructuralError("base morphism missing from the self-enrichment");
    return *a;
  }
};

inline YonedaSetting yoneda_setting(const EnrichPtr& E) {
  const MonoidalBase& v = E->V();
  if (!v.has_closed() || !v.has_symmetry()) throw CapabilityError(v.name() + ": representables need a symmetric closed base");
  std::vector<ObjId> objs = v.check_objects();
  objs.insert(objs.end(), E->hom_obj.begin(), E->hom_obj.end());
  std::sort(objs.begin(), objs.end());
  objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
  return YonedaSetting{E, opposite_enrichment(E), self_enrichment(E->base, objs), objs};
}

/// x |-> E(x, y). An arrow x1 -> x2 of the opposite, i.e. f : x2 -> x1,
/// acts as h |-> f . h, with hom component the transpose of sym ; comp.
inline EnrichedFunctor representable(const YonedaSetting& s, ObjId y) {
  const Enrichment& E = *s.E;
  const MonoidalBase& v = E.V();
  const std::size_t n = E.objects();
  std::vector<ObjId> ob;
  for (ObjId x = 0; x < n; ++x) ob.push_back(s.self_index(E.hom(x, y)));
  std::vector<Mor> efun;
  for (ObjId x1 = 0; x1 < n; ++x1)
    for (ObjId x2 = 0; x2 < n; ++x2) {
      ObjId a = E.hom(x2, x1), b = E.hom(x1, y);
      efun.push_back(v.lam(a, b, v.then(v.symmetry(a, b), E.ecomp(x2, x1, y))));
    }
  return make_functor(s.op, s.self, ob, std::move(efun));
}

/// Components h |-> h . f : E(x, y1) -> E(x, y2).
inline EnrichedTransformation representable_transformation(const YonedaSetting& s, const Arrow& f) {
  EnrichedTransformation t{representable(s, f.src), representable(s, f.dst), {}};
  for (ObjId x = 0; x < s.E->objects(); ++x) t.component.push_back(s.self_arrow(precompose_mor(*s.E, x, f)));
  return t;
}

struct Yoneda {
  YonedaSetting setting;
  FunctorCategory presheaves;
  EnrichedFunctor embedding;
};

/// y |-> representable(y); the hom component E(y1,y2) -> [op E, self](y1, y2)
/// pairs the transposes of composition and factors through the equalizer.
inline Yoneda yoneda(const EnrichPtr& E, std::size_t cap = 10000) {
  YonedaSetting s = yoneda_setting(E);
  FunctorCategory pre = functor_category_enrichment(s.op, s.self, cap);
  const MonoidalBase& v = E->V();
  const std::size_t n = E->objects(), N = pre.functors.size();
  std::vector<ObjId> ob;
  for (ObjId y = 0; y < n; ++y) {
    EnrichedFunctor R = representable(s, y);
    auto it = std::find_if(pre.functors.begin(), pre.functors.end(),
                           [&](const EnrichedFunctor& G) { return same_functor(G, R); });
    if (it == pre.functors.end()) throw StructuralError("representable missing from the functor enumeration");
    ob.push_back(static_cast<ObjId>(it - pre.functors.begin()));
  }
  std::vector<Mor> efun;
  for (ObjId y1 = 0; y1 < n; ++y1)
    for (ObjId y2 = 0; y2 < n; ++y2) {
      std::vector<Mor> legs;
      for (ObjId x = 0; x < n; ++x) legs.push_back(v.lam(E->hom(y1, y2), E->hom(x, y1), E->ecomp(x, y1, y2)));
      const FunctorHom& h = pre.homs[ob[y1] * N + ob[y2]];
      efun.push_back(factor_through(h.eq, h.product.pair(E->hom(y1, y2), legs), "yoneda component"));
    }
  EnrichPtr target = pre.enrichment;
  Yoneda out{s, std::move(pre), make_functor(E, target, ob, std::move(efun))};
  return out;
}

inline CheckReport check_yoneda_ff(const EnrichPtr& E, std::size_t cap = 10000) {
  Yoneda y = yoneda(E, cap);
  CheckReport r = check_functor_enrichment(y.embedding);
  auto ff = is_fully_faithful(y.embedding);
  r.instances += ff.inverses.size();
  for (auto [a, b] : ff.failing) r.fail("yoneda.fully_faithful", {a, b}, y.embedding.efun(a, b));
  r.normalize();
  return r;
}

// ---------------------------------------------------------------------------
// precomposition with a weak equivalence

struct TransportResult {
  EnrichedTransformation theta;
  CheckReport report;
};

/// theta_x is the unique f : G1 x -> G2 x with tau_w . G2(i) = G1(i) . f for
/// every w and iso i : F w -> x, found by scanning all candidates.
inline TransportResult transport_transformation(const EnrichedFunctor& F, const EnrichedFunctor& G1,
                                                const EnrichedFunctor& G2, const EnrichedTransformation& tau) {
  if (!is_essentially_surjective(F).ok) throw Refusal("transport_transformation: functor is not essentially surjective");
  const FinCat& C2 = F.cod->under;
  const FinCat& C3 = G1.cod->under;
  TransportResult out{EnrichedTransformation{G1, G2, {}}, {}};
  CheckReport& r = out.report;
  for (ObjId x = 0; x < F.cod->objects(); ++x) {
    std::vector<Arrow> found;
    for (const Arrow& f : C3.arrows(G1(x), G2(x))) {
      bool ok = true;
      for (ObjId w = 0; ok && w < F.dom->objects(); ++w)
        for (const Arrow& i : isos(C2, F(w), x))
          if (C3.then(tau.component.at(w), G2(i)) != C3.then(G1(i), f)) {
            ok = false;
            break;
          }
      if (ok) found.push_back(f);
    }
    ++r.instances;
    if (found.size() != 1) {
      r.fail("transport.unique_component", {x}, {}, {}, std::to_string(found.size()) + " candidates");
      if (found.empty()) throw Refusal("transport_transformation: no component at " + std::to_string(x));
    }
    out.theta.component.push_back(found.front());
  }
  r.merge(check_nat_trans_enrichment(out.theta));
  ++r.instances;
  if (!same_components(whisker_left(F, out.theta), tau)) r.fail("transport.whiskers_back", {});
  r.normalize();
  return out;
}

struct Extension {
  EnrichedFunctor H;                  // E2 -> E3
  EnrichedTransformation comparison;  // F.H => G
  std::vector<Preimage> choice;
  CheckReport report;
};

/// H(x) = G(w) for the first preimage (w, i0 : F w ~ x). phi(w', i) is
/// G(k) for the k : w' -> w with F k = i . i0^-1, and the hom component is
/// the composite E2(x,y) -> E2(Fw1, y) -> E2(Fw1, Fw2) -> E1(w1, w2) ->
/// E3(Gw1, Gw2) -> E3(Hx, Gw2) -> E3(Hx, Hy), checked to agree for every
/// choice of preimages.
inline Extension extend_functor(const EnrichedFunctor& F, const EnrichedFunctor& G) {
  if (F.dom != G.dom) throw StructuralError("extend_functor: functors have different domains");
  auto ff = is_fully_faithful(F);
  auto eso = is_essentially_surjective(F);
  if (!ff.ok || !eso.ok) throw Refusal("extend_functor: the functor is not a weak equivalence");
  const Enrichment& E1 = *F.dom;
  const Enrichment& E2 = *F.cod;
  const Enrichment& E3 = *G.cod;
  const FinCat &C1 = E1.under, &C2 = E2.under, &C3 = E3.under;
  const MonoidalBase& v = E1.V();
  const std::size_t n1 = E1.objects(), n2 = E2.objects();
  Extension out;
  CheckReport& r = out.report;
  for (const auto& w : eso.witness) out.choice.push_back(*w);

  auto phi = [&](ObjId x, ObjId w, const Arrow& i) {
    const Preimage& p = out.choice[x];
    Arrow k = ff_preimage(F, w, p.x, C2.then(i, inverse_arrow(C2, p.iso)));
    return G(k);  // G w -> H x
  };
  std::vector<ObjId> ob;
  for (ObjId x = 0; x < n2; ++x) ob.push_back(G(out.choice[x].x));

  // coherence of phi and uniqueness of the object up to the phi-isos
  for (ObjId x = 0; x < n2; ++x)
    for (ObjId w1 = 0; w1 < n1; ++w1)
      for (const Arrow& i1 : isos(C2, F(w1), x))
        for (ObjId w2 = 0; w2 < n1; ++w2)
          for (const Arrow& i2 : isos(C2, F(w2), x))
            for (const Arrow& k : C1.arrows(w1, w2)) {
              if (C2.then(F(k), i2) != i1) continue;
              ++r.instances;
              if (C3.then(G(k), phi(x, w2, i2)) != phi(x, w1, i1)) r.fail("extend.phi_coherent", {x, k});
            }
  for (ObjId x = 0; x < n2; ++x) {
    std::size_t hits = 0;
    for (ObjId y = 0; y < E3.objects(); ++y)
      if (!isos(C3, ob[x], y).empty()) ++hits;
    ++r.instances;
    if (hits != 1) r.fail("extend.object_unique", {x}, {}, {}, std::to_string(hits) + " isomorphic candidates");
  }

  auto composite = [&](ObjId x, ObjId y, ObjId w1, const Arrow& i1, ObjId w2, const Arrow& i2) {
    Arrow p1 = phi(x, w1, i1), p2 = phi(y, w2, i2);
    return seq(v, {postcompose_mor(E2, y, i1), precompose_mor(E2, F(w1), inverse_arrow(C2, i2)),
                   *ff.inverses.at(w1 * n1 + w2), G.efun(w1, w2),
                   postcompose_mor(E3, G(w2), inverse_arrow(C3, p1)), precompose_mor(E3, ob[x], p2)});
  };
  std::vector<Mor> efun;
  for (ObjId x = 0; x < n2; ++x)
    for (ObjId y = 0; y < n2; ++y) {
      const Preimage &px = out.choice[x], &py = out.choice[y];
      Mor f = composite(x, y, px.x, px.iso, py.x, py.iso);
      for (ObjId w1 = 0; w1 < n1; ++w1)
        for (const Arrow& i1 : isos(C2, F(w1), x))
          for (ObjId w2 = 0; w2 < n1; ++w2)
            for (const Arrow& i2 : isos(C2, F(w2), y)) {
              ++r.instances;
              Mor g = composite(x, y, w1, i1, w2, i2);
              if (!(g == f)) r.fail("extend.efun_independent", {x, y, w1, i1, w2, i2}, f, g);
            }
      efun.push_back(std::move(f));
    }
  out.H = make_functor(F.cod, G.cod, ob, std::move(efun));
  r.merge(check_functor_enrichment(out.H));
  out.comparison = EnrichedTransformation{compose_functors(F, out.H), G, {}};
  for (ObjId w = 0; w < n1; ++w)
    out.comparison.component.push_back(inverse_arrow(C3, phi(F(w), w, C2.identity(F(w)))));
  r.merge(check_nat_trans_enrichment(out.comparison));
  ++r.instances;
  if (!invertible_2cell(out.comparison)) r.fail("extend.comparison_invertible", {});
  r.normalize();
  return out;
}

/// Underlying category of enriched functors and transformations.
struct FunctorList {
  std::vector<EnrichedFunctor> functors;
  std::vector<std::vector<EnrichedTransformation>> trans;  // row-major

  std::optional<std::size_t> find(const EnrichedFunctor& F) const {
    for (std::size_t i = 0; i < functors.size(); ++i)
      if (same_functor(functors[i], F)) return i;
    return std::nullopt;
  }
  bool isomorphic(std::size_t i, std::size_t j) const {
    for (const auto& t : trans[i * functors.size() + j])
      if (invertible_2cell(t)) return true;
    return false;
  }
  std::size_t iso_classes() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < functors.size(); ++i) {
      bool fresh = true;
      for (std::size_t j = 0; fresh && j < i; ++j) fresh = !isomorphic(j, i);
      c += fresh;
    }
    return c;
  }
};

inline FunctorList functor_list(const EnrichPtr& A, const EnrichPtr& B, std::size_t cap) {
  FunctorList L{enumerate_enriched_functors(A, B, cap), {}};
  for (const auto& F : L.functors)
    for (const auto& G : L.functors) L.trans.push_back(enumerate_transformations(F, G, cap));
  return L;
}

struct PrecompReport {
  CheckReport report;
  std::size_t functors_from_cod = 0, functors_from_dom = 0;
  std::size_t classes_from_cod = 0, classes_from_dom = 0;
};

/// Precomposition with F, from functors E2 -> E3 to functors E1 -> E3, is
/// full, faithful and essentially surjective; transport and extension agree
/// with the direct search.
inline PrecompReport check_precomp_equivalence(const EnrichedFunctor& F, const EnrichPtr& E3, std::size_t cap = 10000) {
  PrecompReport out;
  CheckReport& r = out.report;
  FunctorList cod = functor_list(F.cod, E3, cap);
  FunctorList dom = functor_list(F.dom, E3, cap);
  out.functors_from_cod = cod.functors.size();
  out.functors_from_dom = dom.functors.size();
  out.classes_from_cod = cod.iso_classes();
  out.classes_from_dom = dom.iso_classes();
  const std::size_t N = cod.functors.size(), M = dom.functors.size();
  std::vector<std::size_t> image;
  for (const auto& G : cod.functors) {
    auto j = dom.find(compose_functors(F, G));
    ++r.instances;
    if (!j) throw StructuralError("precomposite missing from the functor enumeration");
    image.push_back(*j);
  }
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      const auto& src = cod.trans[a * N + b];
      const auto& dst = dom.trans[image[a] * M + image[b]];
      std::set<std::vector<Arrow>> seen;
      for (const auto& t : src) seen.insert(whisker_left(F, t).component);
      ++r.instances;
      if (seen.size() != src.size()) r.fail("precomp.faithful", {static_cast<ObjId>(a), static_cast<ObjId>(b)});
      ++r.instances;
      if (seen.size() != dst.size()) r.fail("precomp.full", {static_cast<ObjId>(a), static_cast<ObjId>(b)});
      for (const auto& tau : dst) {
        ++r.instances;
        auto tr = transport_transformation(F, cod.functors[a], cod.functors[b], tau);
        if (!tr.report.ok()) r.fail("precomp.transport_agrees", {static_cast<ObjId>(a), static_cast<ObjId>(b)});
      }
    }
  for (std::size_t k = 0; k < M; ++k) {
    bool hit = false;
    for (std::size_t a = 0; !hit && a < N; ++a) hit = dom.isomorphic(image[a], k);
    ++r.instances;
    if (!hit) r.fail("precomp.essentially_surjective", {static_cast<ObjId>(k)});
    auto ext = extend_functor(F, dom.functors[k]);
    ++r.instances;
    auto h = cod.find(ext.H);
    if (!ext.report.ok() || !h || !dom.isomorphic(image[*h], k))
      r.fail("precomp.extend_agrees", {static_cast<ObjId>(k)});
  }
  r.normalize();
  return out;
}

}  // namespace ecat
