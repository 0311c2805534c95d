#pragma once

#include "rezk.hpp"

namespace ecat {

struct EnrichedMonad {
  EnrichPtr carrier;
  EnrichedFunctor endo;          // T
  EnrichedTransformation unit;   // id => T
  EnrichedTransformation mult;   // T.T => T
};

inline EnrichedMonad make_monad(const EnrichedFunctor& T, std::vector<Arrow> eta, std::vector<Arrow> mu) {
  if (T.dom != T.cod) throw StructuralError("a monad needs an endofunctor");
  return EnrichedMonad{T.dom, T, {id_functor(T.dom), T, std::move(eta)}, {compose_functors(T, T), T, std::move(mu)}};
}

inline EnrichedMonad identity_monad(const EnrichPtr& E) {
  EnrichedFunctor I = id_functor(E);
  return make_monad(I, id_transformation(I).component, id_transformation(I).component);
}

inline void require_monad_shape(const EnrichedMonad& T) {
  const EnrichedFunctor& t = T.endo;
  if (t.dom != T.carrier || t.cod != T.carrier) throw StructuralError("monad endofunctor is not on the carrier");
  if (!same_functor(T.unit.src, id_functor(T.carrier)) || !same_functor(T.unit.dst, t))
    throw StructuralError("monad unit is not a transformation id => T");
  if (!same_functor(T.mult.src, compose_functors(t, t)) || !same_functor(T.mult.dst, t))
    throw StructuralError("monad multiplication is not a transformation T.T => T");
}

/// Unit and associativity laws componentwise, together with the enrichment
/// conditions on T, eta and mu.
inline CheckReport check_enriched_monad(const EnrichedMonad& T, const CheckOptions& opts = {}) {
  require_monad_shape(T);
  const FinCat& C = T.carrier->under;
  const auto& t = T.endo;
  const auto& eta = T.unit.component;
  const auto& mu = T.mult.component;
  CheckReport r = check_functor_enrichment(t, opts);
  r.merge(check_nat_trans_enrichment(T.unit, opts));
  r.merge(check_nat_trans_enrichment(T.mult, opts));
  for (ObjId x = 0; x < T.carrier->objects(); ++x) {
    const Arrow id = C.identity(t(x));
    r.instances += 3;
    Arrow l = C.then(eta[t(x)], mu[x]);
    if (l != id) r.fail("monad.left_unit", {x}, {}, {}, to_string(l));
    Arrow rt = C.then(t(eta[x]), mu[x]);
    if (rt != id) r.fail("monad.right_unit", {x}, {}, {}, to_string(rt));
    Arrow a = C.then(mu[t(x)], mu[x]), b = C.then(t(mu[x]), mu[x]);
    if (a != b) r.fail("monad.associativity", {x}, {}, {}, to_string(a) + " vs " + to_string(b));
  }
  r.normalize();
  return r;
}

// ---------------------------------------------------------------------------
// free Kleisli

/// hom(x, y) = E(x, Ty); composition is T on the second factor, composition
/// in E, then postcomposition with mu. Needs no equalizers.
inline EnrichPtr fkleisli(const EnrichedMonad& T) {
  require_monad_shape(T);
  const Enrichment& E = *T.carrier;
  const FinCat& C = E.under;
  const MonoidalBase& v = E.V();
  const auto& t = T.endo;
  const auto& eta = T.unit.component;
  const auto& mu = T.mult.component;
  const std::size_t n = E.objects();

  FinCat cat = FinCat::build(
      n, [&](ObjId x, ObjId y) { return C.hom_size(x, t(y)); }, [&](ObjId x) { return eta[x].k; },
      [&](const Arrow& f, const Arrow& g) {
        return seq_arrows(C, {Arrow{f.src, t(f.dst), f.k}, t(Arrow{g.src, t(g.dst), g.k}), mu[g.dst]}).k;
      });
  std::vector<ObjId> hom;
  std::vector<Mor> eid, ecomp;
  std::vector<std::vector<Mor>> fa(n * n);
  for (ObjId x = 0; x < n; ++x) eid.push_back(E.from_arr(eta[x]));
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      hom.push_back(E.hom(x, t(y)));
      for (const Arrow& f : C.arrows(x, t(y))) fa[x * n + y].push_back(E.from_arr(f));
      for (ObjId z = 0; z < n; ++z)
        ecomp.push_back(seq(v, {v.tensor(t.efun(y, t(z)), v.identity(E.hom(x, t(y)))), E.ecomp(x, t(y), t(t(z))),
                                precompose_mor(E, x, mu[z])}));
    }
  return make_enrichment(E.base, std::move(cat), std::move(hom), std::move(eid), std::move(ecomp), std::move(fa));
}

/// The arrow x -> Ty of the carrier behind a Kleisli arrow x -> y.
inline Arrow kleisli_arrow_in_carrier(const EnrichedMonad& T, const Arrow& f) {
  return Arrow{f.src, T.endo(f.dst), f.k};
}

// ---------------------------------------------------------------------------
// Eilenberg-Moore

struct EilenbergMoore {
  DialgebraEnrichment dialgebras;  // over (T, id)
  std::vector<ObjId> keep;         // dialgebra index of each algebra
  EnrichPtr enrichment;
  EnrichedFunctor forgetful;
  std::vector<DialgebraObject> algebras;

  std::optional<ObjId> find(const DialgebraObject& a) const {
    for (ObjId i = 0; i < algebras.size(); ++i)
      if (algebras[i].x == a.x && algebras[i].f == a.f) return i;
    return std::nullopt;
  }
};

inline bool is_algebra(const EnrichedMonad& T, const DialgebraObject& a) {
  const FinCat& C = T.carrier->under;
  return C.then(T.unit.component[a.x], a.f) == C.identity(a.x) &&
         C.then(T.endo(a.f), a.f) == C.then(T.mult.component[a.x], a.f);
}

inline EilenbergMoore eilenberg_moore(const EnrichedMonad& T) {
  require_monad_shape(T);
  EilenbergMoore em{dialgebra_enrichment(T.endo, id_functor(T.carrier)), {}, {}, {}, {}};
  const auto& obs = em.dialgebras.objects;
  for (ObjId i = 0; i < obs.size(); ++i)
    if (is_algebra(T, obs[i])) {
      em.keep.push_back(i);
      em.algebras.push_back(obs[i]);
    }
  SubEnrichment sub = full_sub_enrichment(em.dialgebras.enrichment, em.keep);
  em.enrichment = sub.sub;
  em.forgetful = compose_functors(sub.inclusion, em.dialgebras.projection);
  return em;
}

/// x |-> (Tx, mu_x), with T's hom components factored through the
/// algebra-morphism equalizers.
inline EnrichedFunctor free_algebra_functor(const EnrichedMonad& T, const EilenbergMoore& em) {
  const std::size_t n = T.carrier->objects();
  const std::size_t nd = em.dialgebras.objects.size();
  std::vector<ObjId> ob;
  for (ObjId x = 0; x < n; ++x) {
    auto i = em.find({T.endo(x), T.mult.component[x]});
    if (!i) throw StructuralError("free algebra on " + std::to_string(x) + " fails the algebra laws");
    ob.push_back(*i);
  }
  std::vector<Mor> efun;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      efun.push_back(factor_through(em.dialgebras.homs[em.keep[ob[x]] * nd + em.keep[ob[y]]], T.endo.efun(x, y),
                                    "free algebra functor"));
  return make_functor(T.carrier, em.enrichment, std::move(ob), std::move(efun));
}

struct UnivalentKleisli {
  EilenbergMoore em;
  EnrichedFunctor free;
  FactorizationResult image;
  UnivalenceReport report;

  const EnrichPtr& enrichment() const { return image.image; }
};

/// Full image of the free algebra functor in the Eilenberg-Moore category.
inline UnivalentKleisli univalent_kleisli(const EnrichedMonad& T) {
  UnivalentKleisli out{eilenberg_moore(T), {}, {}, {}};
  out.free = free_algebra_functor(T, out.em);
  out.image = image_factorization(out.free);
  out.report = univalence_report(*out.image.image);
  return out;
}

/// E(x,Ty) -> E(Tx,TTy) -> E(Tx,Ty) on homs, landing in the equalizer of
/// the free algebras.
inline EnrichedFunctor kleisli_comparison(const EnrichedMonad& T, const EnrichPtr& raw, const UnivalentKleisli& K) {
  const Enrichment& E = *T.carrier;
  const MonoidalBase& v = E.V();
  const auto& t = T.endo;
  const std::size_t n = E.objects();
  const std::size_t nd = K.em.dialgebras.objects.size();
  const auto& img = K.image.image_objects;
  std::vector<ObjId> ob;
  for (ObjId x = 0; x < n; ++x) {
    ObjId a = K.free(x);
    ob.push_back(static_cast<ObjId>(std::lower_bound(img.begin(), img.end(), a) - img.begin()));
  }
  std::vector<Mor> efun;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      Mor m = v.then(t.efun(x, t(y)), precompose_mor(E, t(x), T.mult.component[y]));
      const Equalizer& eq = K.em.dialgebras.homs[K.em.keep[K.free(x)] * nd + K.em.keep[K.free(y)]];
      efun.push_back(factor_through(eq, m, "Kleisli comparison"));
    }
  return make_functor(raw, K.image.image, std::move(ob), std::move(efun));
}

// ---------------------------------------------------------------------------
// cocones

struct KleisliCocone {
  EnrichPtr apex;
  EnrichedFunctor leg;         // carrier -> apex
  EnrichedTransformation cell;  // T.leg => leg
};

/// Unit triangle leg(eta_x) . cell_x = id and multiplication square
/// leg(mu_x) . cell_x = cell_Tx . cell_x, plus enrichment of the cell.
inline CheckReport check_kleisli_cocone(const EnrichedMonad& T, const KleisliCocone& q,
                                        const CheckOptions& opts = {}) {
  if (q.leg.dom != T.carrier || q.leg.cod != q.apex) throw StructuralError("cocone leg has the wrong shape");
  if (!same_functor(q.cell.src, compose_functors(T.endo, q.leg)) || !same_functor(q.cell.dst, q.leg))
    throw StructuralError("cocone cell is not a transformation T.leg => leg");
  const FinCat& A = q.apex->under;
  const auto& c = q.cell.component;
  CheckReport r = check_nat_trans_enrichment(q.cell, opts);
  for (ObjId x = 0; x < T.carrier->objects(); ++x) {
    r.instances += 2;
    if (A.then(q.leg(T.unit.component[x]), c[x]) != A.identity(q.leg(x))) r.fail("cocone.unit", {x});
    if (A.then(q.leg(T.mult.component[x]), c[x]) != A.then(c[T.endo(x)], c[x])) r.fail("cocone.multiplication", {x});
  }
  r.normalize();
  return r;
}

/// Leg x |-> x, f |-> f . eta_y into the free Kleisli category; the cell at
/// x is the identity of Tx read as a Kleisli arrow Tx -> x.
inline KleisliCocone free_kleisli_cocone(const EnrichedMonad& T, const EnrichPtr& raw) {
  const Enrichment& E = *T.carrier;
  const std::size_t n = E.objects();
  std::vector<ObjId> ob;
  std::vector<Mor> efun;
  for (ObjId x = 0; x < n; ++x) ob.push_back(x);
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) efun.push_back(precompose_mor(E, x, T.unit.component[y]));
  KleisliCocone q{raw, make_functor(T.carrier, raw, ob, std::move(efun)), {}};
  q.cell = EnrichedTransformation{compose_functors(T.endo, q.leg), q.leg, {}};
  for (ObjId x = 0; x < n; ++x) {
    Arrow id = E.under.identity(T.endo(x));
    q.cell.component.push_back(Arrow{T.endo(x), x, id.k});
  }
  return q;
}

/// The free algebra functor with cell mu, viewed as an algebra morphism.
inline KleisliCocone eilenberg_moore_cocone(const EnrichedMonad& T, const EilenbergMoore& em,
                                            const EnrichedFunctor& free) {
  KleisliCocone q{em.enrichment, free, {}};
  q.cell = EnrichedTransformation{compose_functors(T.endo, free), free, {}};
  const FinCat& D = em.enrichment->under;
  for (ObjId x = 0; x < T.carrier->objects(); ++x) {
    ObjId a = free(T.endo(x)), b = free(x);
    std::optional<Arrow> hit;
    for (const Arrow& h : D.arrows(a, b))
      if (em.forgetful(h) == T.mult.component[x]) hit = h;
    if (!hit) throw StructuralError("mu is not an algebra morphism at " + std::to_string(x));
    q.cell.component.push_back(*hit);
  }
  return q;
}

/// Precomposition of a cocone with F : apex -> B.
inline KleisliCocone cocone_along(const KleisliCocone& q, const EnrichedFunctor& F) {
  return KleisliCocone{F.cod, compose_functors(q.leg, F), whisker_right(q.cell, F)};
}

// ---------------------------------------------------------------------------
// universal property

/// theta : leg_k.H => leg_q compatible with the cells:
/// theta_Tx . cellq_x = H(cellk_x) . theta_x.
inline CheckReport check_cocone_morphism(const EnrichedMonad& T, const KleisliCocone& k, const KleisliCocone& q,
                                         const EnrichedFunctor& H, const EnrichedTransformation& theta) {
  if (H.dom != k.apex || H.cod != q.apex) throw StructuralError("mediator has the wrong shape");
  if (!same_functor(theta.src, compose_functors(k.leg, H)) || !same_functor(theta.dst, q.leg))
    throw StructuralError("mediating 2-cell has the wrong shape");
  const FinCat& A = q.apex->under;
  CheckReport r = check_functor_enrichment(H);
  r.merge(check_nat_trans_enrichment(theta));
  ++r.instances;
  if (!invertible_2cell(theta)) r.fail("cocone.comparison_invertible", {});
  for (ObjId x = 0; x < T.carrier->objects(); ++x) {
    ++r.instances;
    Arrow l = A.then(theta.component[T.endo(x)], q.cell.component[x]);
    Arrow rt = A.then(H(k.cell.component[x]), theta.component[x]);
    if (l != rt) r.fail("cocone.compatibility", {x}, {}, {}, to_string(l) + " vs " + to_string(rt));
  }
  r.normalize();
  return r;
}

/// Every zeta : g1 => g2 with (leg ◁ zeta) = tau, by exhaustive scan.
inline TwoCellLift two_cells_over_leg(const EnrichedFunctor& leg, const EnrichedFunctor& g1,
                                      const EnrichedFunctor& g2, const EnrichedTransformation& tau,
                                      std::size_t cap = 1u << 16) {
  const std::size_t n = g1.dom->objects();
  const FinCat& A = g1.cod->under;
  TwoCellLift out{EnrichedTransformation{g1, g2, {}}};
  std::vector<std::uint32_t> sizes(n), k(n, 0);
  for (ObjId y = 0; y < n; ++y) {
    sizes[y] = A.hom_size(g1(y), g2(y));
    if (sizes[y] == 0) return out;
  }
  while (true) {
    if (++out.candidates > cap) throw CapExceeded("2-cell scan", cap);
    EnrichedTransformation z{g1, g2, {}};
    for (ObjId y = 0; y < n; ++y) z.component.push_back(Arrow{g1(y), g2(y), k[y]});
    if (same_components(whisker_left(leg, z), tau) && check_nat_trans_enrichment(z).ok()) {
      if (++out.solutions == 1) out.zeta = z;
    }
    std::size_t i = n;
    while (i > 0 && ++k[i - 1] == sizes[i - 1]) k[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

struct KleisliExtension {
  KleisliCocone source;           // the univalent Kleisli cocone
  EnrichedFunctor street;         // free Kleisli -> apex
  Extension extension;            // along the comparison
  EnrichedFunctor H;              // univalent Kleisli -> apex
  EnrichedTransformation theta;   // source.leg.H => q.leg
  std::size_t mediators = 0;      // functors admitting a compatible invertible 2-cell
  std::size_t scanned = 0;        // 2-cell tables scanned
  CheckReport report;
};

struct KleisliSetting {
  EnrichPtr raw;
  UnivalentKleisli univalent;
  EnrichedFunctor kappa;
  KleisliCocone raw_cocone, cocone;  // the latter on the univalent Kleisli category
};

inline KleisliSetting kleisli_setting(const EnrichedMonad& T) {
  KleisliSetting s{fkleisli(T), univalent_kleisli(T), {}, {}, {}};
  s.kappa = kleisli_comparison(T, s.raw, s.univalent);
  s.raw_cocone = free_kleisli_cocone(T, s.raw);
  s.cocone = cocone_along(s.raw_cocone, s.kappa);
  return s;
}

/// The mediator from the univalent Kleisli category. First the functor out
/// of the free Kleisli category (x |-> leg x, f |-> leg f . cell), then its
/// extension along the comparison. When `scan` is set, every enriched
/// functor with a compatible invertible 2-cell is shown to be related to H
/// by exactly one 2-cell over the leg.
inline KleisliExtension kleisli_universal_extend(const EnrichedMonad& T, const KleisliSetting& s,
                                                 const KleisliCocone& q, bool scan = true,
                                                 std::size_t cap = 10000) {
  if (!check_kleisli_cocone(T, q).ok()) throw Refusal("kleisli_universal_extend: the cocone fails its laws");
  const Enrichment& E = *T.carrier;
  const Enrichment& A = *q.apex;
  const MonoidalBase& v = E.V();
  require_same_base(E, A);
  const std::size_t n = E.objects();
  KleisliExtension out;
  out.source = s.cocone;
  std::vector<Mor> efun;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      efun.push_back(v.then(q.leg.efun(x, T.endo(y)), precompose_mor(A, q.leg(x), q.cell.component[y])));
  out.street = make_functor(s.raw, q.apex, q.leg.ob_map, std::move(efun));
  CheckReport& r = out.report;
  r.merge(check_functor_enrichment(out.street));
  ++r.instances;
  if (!same_functor(compose_functors(s.raw_cocone.leg, out.street), q.leg)) r.fail("kleisli.street_restricts", {});

  out.extension = extend_functor(s.kappa, out.street);
  r.merge(out.extension.report);
  out.H = out.extension.H;
  out.theta = EnrichedTransformation{compose_functors(s.cocone.leg, out.H), q.leg,
                                     out.extension.comparison.component};
  r.merge(check_cocone_morphism(T, s.cocone, q, out.H, out.theta));

  if (scan) {
    for (const EnrichedFunctor& g : enumerate_enriched_functors(s.cocone.apex, q.apex, cap)) {
      EnrichedFunctor lg = compose_functors(s.cocone.leg, g);
      for (const auto& th : enumerate_transformations(lg, q.leg, cap)) {
        if (!invertible_2cell(th) || !check_cocone_morphism(T, s.cocone, q, g, th).ok()) continue;
        ++out.mediators;
        EnrichedTransformation tau = vcompose(out.theta, *invertible_2cell(th));
        TwoCellLift z = two_cells_over_leg(s.cocone.leg, out.H, g, tau);
        out.scanned += z.candidates;
        ++r.instances;
        if (z.solutions != 1 || !invertible_2cell(z.zeta))
          r.fail("kleisli.mediator_unique", {}, {}, {}, std::to_string(z.solutions) + " 2-cells");
      }
    }
    ++r.instances;
    if (out.mediators == 0) r.fail("kleisli.mediator_found", {});
  }
  r.normalize();
  return out;
}

}  // namespace ecat
