#pragma once

#include "enrichment.hpp"
#include "structure.hpp"

namespace ecat {

// ---------------------------------------------------------------------------
// self-enrichment, full subcategories, opposites

/// The closed base enriched over itself, on the given objects (the base's
/// check window by default). Arrows x -> y are the base morphisms.
inline EnrichPtr self_enrichment(const BasePtr& base, std::vector<ObjId> objects = {}) {
  const MonoidalBase& v = *base;
  if (!v.has_closed()) throw CapabilityError(v.name() + ": self-enrichment needs internal homs");
  if (!v.has_symmetry()) throw CapabilityError(v.name() + ": self-enrichment needs a symmetry");
  if (objects.empty()) objects = v.check_objects();
  const std::size_t n = objects.size();
  const ObjId I = v.unit();
  MaterializedCat m = materialize(v, objects);
  std::vector<ObjId> hom(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) hom[x * n + y] = v.internal_hom(objects[x], objects[y]);
  auto from = [&](const Mor& f) { return v.lam(I, f.src, v.then(v.lunitor(f.src), f)); };
  std::vector<Mor> eid, ecomp;
  for (std::size_t x = 0; x < n; ++x) eid.push_back(from(v.identity(objects[x])));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        ObjId a = objects[x], b = objects[y], c = objects[z];
        ObjId yz = hom[y * n + z], xy = hom[x * n + y];
        Mor chain = seq(v, {v.associator(yz, xy, a), v.tensor(v.identity(yz), v.eval(a, b)), v.eval(b, c)});
        ecomp.push_back(v.lam(v.tensor(yz, xy), a, chain));
      }
  std::vector<std::vector<Mor>> fa(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    for (const Mor& f : m.homs[i]) fa[i].push_back(from(f));
  return make_enrichment(base, std::move(m.cat), std::move(hom), std::move(eid), std::move(ecomp), std::move(fa));
}

/// The morphism x -> y named by a point p : I -> [x,y], as I(x)x -> [x,y](x)x -> y.
inline Mor self_to_arr(const MonoidalBase& v, ObjId x, ObjId y, const Mor& p) {
  return seq(v, {v.lunitor_inv(x), v.tensor(p, v.identity(x)), v.eval(x, y)});
}

struct SubEnrichment {
  EnrichPtr sub;
  EnrichedFunctor inclusion;
};

/// Full subcategory on `keep`, in the given order; hom-objects are copied.
inline SubEnrichment full_sub_enrichment(const EnrichPtr& E, const std::vector<ObjId>& keep) {
  const std::size_t n = E->objects(), k = keep.size();
  for (ObjId x : keep)
    if (x >= n) throw StructuralError("full_sub: object " + std::to_string(x) + " out of range");
  std::vector<ObjId> hom;
  std::vector<Mor> eid, ecomp, efun;
  std::vector<std::vector<Mor>> fa;
  for (std::size_t x = 0; x < k; ++x) eid.push_back(E->eid(keep[x]));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y) {
      hom.push_back(E->hom(keep[x], keep[y]));
      efun.push_back(E->V().identity(hom.back()));
      fa.push_back(E->from_arr_table[keep[x] * n + keep[y]]);
      for (std::size_t z = 0; z < k; ++z) ecomp.push_back(E->ecomp(keep[x], keep[y], keep[z]));
    }
  EnrichPtr S = make_enrichment(E->base, E->under.full_sub(keep), std::move(hom), std::move(eid), std::move(ecomp),
                                std::move(fa));
  return SubEnrichment{S, make_functor(S, E, keep, std::move(efun))};
}

inline SubEnrichment full_sub_enrichment(const EnrichPtr& E, const std::function<bool(ObjId)>& pred) {
  std::vector<ObjId> keep;
  for (ObjId x = 0; x < E->objects(); ++x)
    if (pred(x)) keep.push_back(x);
  return full_sub_enrichment(E, keep);
}

/// Arrow k : x -> y of the opposite is arrow k : y -> x of E.
inline EnrichPtr opposite_enrichment(const EnrichPtr& E) {
  const MonoidalBase& v = E->V();
  if (!v.has_symmetry()) throw CapabilityError(v.name() + ": opposite enrichment needs a symmetry");
  const std::size_t n = E->objects();
  std::vector<ObjId> hom;
  std::vector<Mor> ecomp;
  std::vector<std::vector<Mor>> fa;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      hom.push_back(E->hom(y, x));
      fa.push_back(E->from_arr_table[y * n + x]);
      for (ObjId z = 0; z < n; ++z)
        ecomp.push_back(v.then(v.symmetry(E->hom(z, y), E->hom(y, x)), E->ecomp(z, y, x)));
    }
  return make_enrichment(E->base, E->under.opposite(), std::move(hom), E->e_id, std::move(ecomp), std::move(fa));
}

/// Identity-on-objects functor between enrichments of the same category
/// whose hom-objects agree, with identity components.
inline EnrichedFunctor identity_comparison(const EnrichPtr& from, const EnrichPtr& to) {
  const std::size_t n = from->objects();
  if (to->objects() != n) throw StructuralError("comparison between enrichments of different size");
  std::vector<ObjId> ob(n);
  std::iota(ob.begin(), ob.end(), 0);
  std::vector<Mor> ids;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      if (from->hom(x, y) != to->hom(x, y)) throw StructuralError("hom-objects differ at " + std::to_string(x) + "," + std::to_string(y));
      ids.push_back(from->V().identity(from->hom(x, y)));
    }
  return make_functor(from, to, ob, ids);
}

// ---------------------------------------------------------------------------
// enumeration of enriched functors and transformations

/// Every enriched functor E1 -> E2, by backtracking over object maps and
/// then over candidate hom components in row-major pair order. Throws
/// CapExceeded once more than `cap` functors are found.
inline std::vector<EnrichedFunctor> enumerate_enriched_functors(const EnrichPtr& E1, const EnrichPtr& E2,
                                                                std::size_t cap = 10000,
                                                                std::uint64_t hom_budget = 1u << 16) {
  require_same_base(*E1, *E2);
  const MonoidalBase& v = E1->V();
  const std::size_t n = E1->objects(), m = E2->objects();
  std::vector<EnrichedFunctor> out;
  if (n > 0 && m == 0) return out;
  // triples whose last-assigned pair is p
  const std::size_t P = n * n;
  std::vector<std::vector<std::array<ObjId, 3>>> due(P);
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (ObjId z = 0; z < n; ++z) {
        std::size_t last = std::max({y * n + z, x * n + y, x * n + z});
        due[last].push_back({x, y, z});
      }
  std::vector<ObjId> ob(n, 0);
  std::vector<Mor> ef(P);
  std::vector<std::vector<Mor>> cands(P);

  std::function<void(std::size_t)> assign = [&](std::size_t p) {
    if (p == P) {
      EnrichedFunctor F{E1, E2, ob, derive_mor_map(*E1, *E2, ob, ef), ef};
      if (out.size() >= cap) throw CapExceeded("enumerate_enriched_functors", out.size() + 1);
      out.push_back(std::move(F));
      return;
    }
    const ObjId x = static_cast<ObjId>(p / n), y = static_cast<ObjId>(p % n);
    for (const Mor& e : cands[p]) {
      ef[p] = e;
      bool ok = true;
      if (x == y) ok = v.then(E1->eid(x), e) == E2->eid(ob[x]);
      for (std::size_t i = 0; ok && i < due[p].size(); ++i) {
        auto [a, b, c] = due[p][i];
        ok = v.then(E1->ecomp(a, b, c), ef[a * n + c]) ==
             v.then(v.tensor(ef[b * n + c], ef[a * n + b]), E2->ecomp(ob[a], ob[b], ob[c]));
      }
      if (ok) assign(p + 1);
    }
  };

  std::function<void(std::size_t)> objects = [&](std::size_t i) {
    if (i == n) {
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y) {
          ObjId a = E1->hom(x, y), b = E2->hom(ob[x], ob[y]);
          std::uint64_t size = v.hom_size(a, b);
          if (size > hom_budget) throw CapExceeded("functor component candidates", size);
          auto& c = cands[x * n + y];
          c.clear();
          for (const Mor& e : v.hom(a, b)) {
            bool ok = true;
            for (const Arrow& f : E1->under.arrows(x, y))
              if (!E2->to_arr(ob[x], ob[y], v.then(E1->from_arr(f), e))) {
                ok = false;
                break;
              }
            if (ok) c.push_back(e);
          }
          if (c.empty()) return;
        }
      assign(0);
      return;
    }
    for (ObjId t = 0; t < m; ++t) {
      ob[i] = t;
      objects(i + 1);
    }
  };
  objects(0);
  return out;
}

/// Every enriched transformation F1 => F2, components in odometer order
/// with the last object's component varying fastest.
inline std::vector<EnrichedTransformation> enumerate_transformations(const EnrichedFunctor& F1,
                                                                     const EnrichedFunctor& F2,
                                                                     std::size_t cap = 10000) {
  const Enrichment& E2 = *F1.cod;
  const std::size_t n = F1.dom->objects();
  std::vector<EnrichedTransformation> out;
  std::vector<std::uint32_t> sizes(n);
  for (ObjId x = 0; x < n; ++x) {
    sizes[x] = E2.under.hom_size(F1(x), F2(x));
    if (sizes[x] == 0) return out;
  }
  std::vector<std::uint32_t> k(n, 0);
  while (true) {
    EnrichedTransformation t{F1, F2, {}};
    for (ObjId x = 0; x < n; ++x) t.component.push_back(Arrow{F1(x), F2(x), k[x]});
    if (check_nat_trans_enrichment(t).ok()) {
      if (out.size() >= cap) throw CapExceeded("enumerate_transformations", out.size() + 1);
      out.push_back(std::move(t));
    }
    std::size_t i = n;
    while (i > 0 && ++k[i - 1] == sizes[i - 1]) k[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// dialgebras and functor categories

struct DialgebraObject {
  ObjId x;
  Arrow f;  // F1 x -> F2 x
};

struct DialgebraEnrichment {
  EnrichPtr enrichment;
  EnrichedFunctor projection;
  std::vector<DialgebraObject> objects;
  std::vector<Equalizer> homs;  // row-major over object pairs
};

inline Mor factor_through(const Equalizer& eq, const Mor& m, const char* what) {
  auto u = eq.factorize(m);
  if (!u) throw StructuralError(std::string(what) + " does not factor through the equalizer");
  return *u;
}

/// Objects are pairs (x, f : F1 x -> F2 x), listed by x and then f. The
/// hom-object is the equalizer of h |-> F1 h . g and h |-> f . F2 h.
inline DialgebraEnrichment dialgebra_enrichment(const EnrichedFunctor& F1, const EnrichedFunctor& F2) {
  if (F1.dom != F2.dom || F1.cod != F2.cod) throw StructuralError("dialgebras need parallel functors");
  const Enrichment& E1 = *F1.dom;
  const Enrichment& E2 = *F1.cod;
  const MonoidalBase& v = E1.V();
  if (!v.has_equalizers()) throw CapabilityError(v.name() + ": dialgebras need equalizers");
  const std::size_t n1 = E1.objects();
  DialgebraEnrichment out;
  for (ObjId x = 0; x < n1; ++x)
    for (const Arrow& f : E2.under.arrows(F1(x), F2(x))) out.objects.push_back({x, f});
  const auto& obs = out.objects;
  const std::size_t n = obs.size();

  std::vector<Equalizer> eqs;
  eqs.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      ObjId x = obs[a].x, y = obs[b].x;
      Mor top = v.then(F1.efun(x, y), precompose_mor(E2, F1(x), obs[b].f));
      Mor bottom = v.then(F2.efun(x, y), postcompose_mor(E2, F2(y), obs[a].f));
      eqs.push_back(v.equalizer(top, bottom));
    }
  // commuting squares, in E1 arrow order
  std::vector<std::vector<std::uint32_t>> arrows(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (const Arrow& h : E1.under.arrows(obs[a].x, obs[b].x))
        if (E2.under.then(F1(h), obs[b].f) == E2.under.then(obs[a].f, F2(h))) arrows[a * n + b].push_back(h.k);
  auto local = [&](std::size_t a, std::size_t b, std::uint32_t k) {
    const auto& row = arrows[a * n + b];
    auto it = std::lower_bound(row.begin(), row.end(), k);
    if (it == row.end() || *it != k) throw StructuralError("dialgebra morphisms are not closed under composition");
    return static_cast<std::uint32_t>(it - row.begin());
  };
  FinCat cat = FinCat::build(
      n, [&](ObjId a, ObjId b) { return static_cast<std::uint32_t>(arrows[a * n + b].size()); },
      [&](ObjId a) { return local(a, a, E1.under.identity(obs[a].x).k); },
      [&](const Arrow& f, const Arrow& g) {
        Arrow h = E1.under.then(Arrow{obs[f.src].x, obs[f.dst].x, arrows[f.src * n + f.dst][f.k]},
                                Arrow{obs[g.src].x, obs[g.dst].x, arrows[g.src * n + g.dst][g.k]});
        return local(f.src, g.dst, h.k);
      });

  std::vector<ObjId> hom, ob;
  std::vector<Mor> eid, ecomp, efun;
  std::vector<std::vector<Mor>> fa(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    ob.push_back(obs[a].x);
    eid.push_back(factor_through(eqs[a * n + a], E1.eid(obs[a].x), "enriched identity"));
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Equalizer& e = eqs[a * n + b];
      hom.push_back(e.obj);
      efun.push_back(e.incl);
      for (std::uint32_t k : arrows[a * n + b])
        fa[a * n + b].push_back(factor_through(e, E1.from_arr(Arrow{obs[a].x, obs[b].x, k}), "from_arr"));
      for (std::size_t c = 0; c < n; ++c) {
        const Equalizer& bc = eqs[b * n + c];
        Mor m = v.then(v.tensor(bc.incl, e.incl), E1.ecomp(obs[a].x, obs[b].x, obs[c].x));
        ecomp.push_back(factor_through(eqs[a * n + c], m, "enriched composition"));
      }
    }
  out.enrichment = make_enrichment(E1.base, std::move(cat), std::move(hom), std::move(eid), std::move(ecomp),
                                   std::move(fa));
  out.projection = make_functor(out.enrichment, F1.dom, ob, efun);
  out.homs = std::move(eqs);
  return out;
}

struct FunctorHom {
  Product product;  // prod_x E2(F x, G x)
  Equalizer eq;
};

struct FunctorCategory {
  EnrichPtr enrichment;
  std::vector<EnrichedFunctor> functors;
  /// transformations[i*N + j] lists the arrows i -> j of the underlying category.
  std::vector<std::vector<EnrichedTransformation>> transformations;
  std::vector<FunctorHom> homs;  // row-major over functor pairs
};

/// Enriched functors E1 -> E2 with hom-objects the equalizer of the pair
/// prod_x E2(F1x,F2x) => prod_{x,y} [E1(x,y), E2(F1x,F2y)].
inline FunctorCategory functor_category_enrichment(const EnrichPtr& E1, const EnrichPtr& E2,
                                                   std::size_t cap = 10000) {
  require_same_base(*E1, *E2);
  const MonoidalBase& v = E1->V();
  if (!v.has_closed() || !v.has_symmetry() || !v.has_products() || !v.has_equalizers())
    throw CapabilityError(v.name() + ": functor categories need a symmetric closed base with products and equalizers");
  const ObjId I = v.unit();
  FunctorCategory out;
  out.functors = enumerate_enriched_functors(E1, E2, cap);
  const auto& Fs = out.functors;
  const std::size_t N = Fs.size(), n = E1->objects();

  using Hom = FunctorHom;
  auto& homs = out.homs;
  homs.reserve(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const EnrichedFunctor& F = Fs[i];
      const EnrichedFunctor& G = Fs[j];
      std::vector<ObjId> factors, targets;
      for (ObjId x = 0; x < n; ++x) factors.push_back(E2->hom(F(x), G(x)));
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y) targets.push_back(v.internal_hom(E1->hom(x, y), E2->hom(F(x), G(y))));
      Product P = v.product(factors);
      Product Q = v.product(targets);
      std::vector<Mor> fl, gl;
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y) {
          ObjId h = E1->hom(x, y);
          ObjId at_y = factors[y], at_x = factors[x];
          Mor phi = v.lam(at_y, h,
                          v.then(v.tensor(v.identity(at_y), F.efun(x, y)), E2->ecomp(F(x), F(y), G(y))));
          Mor psi = v.lam(at_x, h,
                          seq(v, {v.symmetry(at_x, h), v.tensor(G.efun(x, y), v.identity(at_x)),
                                  E2->ecomp(F(x), G(x), G(y))}));
          fl.push_back(v.then(P.proj[y], phi));
          gl.push_back(v.then(P.proj[x], psi));
        }
      Mor f = Q.pair(P.obj, fl), g = Q.pair(P.obj, gl);
      homs.push_back(Hom{P, v.equalizer(f, g)});
    }

  out.transformations.resize(N * N);
  std::vector<std::map<std::vector<std::uint32_t>, std::uint32_t>> index(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      out.transformations[i * N + j] = enumerate_transformations(Fs[i], Fs[j], cap);
      for (std::uint32_t k = 0; k < out.transformations[i * N + j].size(); ++k) {
        std::vector<std::uint32_t> key;
        for (const Arrow& c : out.transformations[i * N + j][k].component) key.push_back(c.k);
        index[i * N + j].emplace(std::move(key), k);
      }
    }
  auto lookup = [&](std::size_t i, std::size_t j, const EnrichedTransformation& t) {
    std::vector<std::uint32_t> key;
    for (const Arrow& c : t.component) key.push_back(c.k);
    auto it = index[i * N + j].find(key);
    if (it == index[i * N + j].end()) throw StructuralError("transformations are not closed under composition");
    return it->second;
  };
  FinCat cat = FinCat::build(
      N, [&](ObjId i, ObjId j) { return static_cast<std::uint32_t>(out.transformations[i * N + j].size()); },
      [&](ObjId i) { return lookup(i, i, id_transformation(Fs[i])); },
      [&](const Arrow& a, const Arrow& b) {
        return lookup(a.src, b.dst,
                      vcompose(out.transformations[a.src * N + a.dst][a.k], out.transformations[b.src * N + b.dst][b.k]));
      });

  auto point = [&](const Hom& h, const EnrichedTransformation& t) {
    std::vector<Mor> legs;
    for (ObjId x = 0; x < n; ++x) legs.push_back(E2->from_arr(t.component[x]));
    return factor_through(h.eq, h.product.pair(I, legs), "transformation");
  };
  std::vector<ObjId> hom;
  std::vector<Mor> eid, ecomp;
  std::vector<std::vector<Mor>> fa(N * N);
  for (std::size_t i = 0; i < N; ++i) eid.push_back(point(homs[i * N + i], id_transformation(Fs[i])));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const Hom& ij = homs[i * N + j];
      hom.push_back(ij.eq.obj);
      for (const auto& t : out.transformations[i * N + j]) fa[i * N + j].push_back(point(ij, t));
      for (std::size_t k = 0; k < N; ++k) {
        const Hom& jk = homs[j * N + k];
        const Hom& ik = homs[i * N + k];
        ObjId apex = v.tensor(jk.eq.obj, ij.eq.obj);
        Mor both = v.tensor(jk.eq.incl, ij.eq.incl);
        std::vector<Mor> legs;
        for (ObjId x = 0; x < n; ++x)
          legs.push_back(seq(v, {both, v.tensor(jk.product.proj[x], ij.product.proj[x]),
                                 E2->ecomp(Fs[i](x), Fs[j](x), Fs[k](x))}));
        ecomp.push_back(factor_through(ik.eq, ik.product.pair(apex, legs), "enriched composition"));
      }
    }
  out.enrichment =
      make_enrichment(E1->base, std::move(cat), std::move(hom), std::move(eid), std::move(ecomp), std::move(fa));
  return out;
}

// ---------------------------------------------------------------------------
// lax monoidal functors and change of base

struct LaxMonoidalFunctor {
  std::string name;
  BasePtr dom, cod;
  std::function<ObjId(ObjId)> ob;
  std::function<Mor(const Mor&)> mor;
  Mor unit_cell;                                // I2 -> F(I1)
  std::function<Mor(ObjId, ObjId)> mult_cell;  // F x (x) F y -> F(x (x) y)
};

/// Functor laws, naturality of the multiplication and the unit and
/// associativity coherence squares, over the domain's check window.
inline CheckReport check_lax(const LaxMonoidalFunctor& F, const CheckOptions& opts = {}) {
  using detail::expect_eq;
  const MonoidalBase& a = *F.dom;
  const MonoidalBase& b = *F.cod;
  CheckReport r;
  const auto objs = a.check_objects();
  detail::HomCache homs(a, objs);
  const std::vector<Mor> all = homs.all();
  const ObjId I1 = a.unit(), I2 = b.unit();
  bool typing_ok = detail::expect_typed(r, b, "lax.unit_typing", {}, [&] { return F.unit_cell; }, I2, F.ob(I1));
  for (ObjId x : objs)
    for (ObjId y : objs)
      typing_ok &= detail::expect_typed(r, b, "lax.mult_typing", {x, y}, [&] { return F.mult_cell(x, y); },
                                        b.tensor(F.ob(x), F.ob(y)), F.ob(a.tensor(x, y)));
  for (const Mor& f : all)
    typing_ok &= detail::expect_typed(r, b, "lax.functor_typing", {f}, [&] { return F.mor(f); }, F.ob(f.src),
                                      F.ob(f.dst));
  if (!typing_ok) {
    r.normalize();
    return r;
  }
  for (ObjId x : objs)
    expect_eq(r, "lax.identity", {x}, [&] { return F.mor(a.identity(x)); }, [&] { return b.identity(F.ob(x)); });
  const bool pairs = std::uint64_t{all.size()} * all.size() <= opts.hom_budget;
  if (!pairs) r.skipped += 2;
  for (const Mor& f : pairs ? all : std::vector<Mor>{})
    for (const Mor& g : all) {
      if (f.dst != g.src) continue;
      expect_eq(r, "lax.composition", {f, g}, [&] { return F.mor(a.then(f, g)); },
                [&] { return b.then(F.mor(f), F.mor(g)); });
    }
  for (const Mor& f : pairs ? all : std::vector<Mor>{})
    for (const Mor& g : all)
      expect_eq(
          r, "lax.mult_natural", {f, g}, [&] { return b.then(b.tensor(F.mor(f), F.mor(g)), F.mult_cell(f.dst, g.dst)); },
          [&] { return b.then(F.mult_cell(f.src, g.src), F.mor(a.tensor(f, g))); });
  for (ObjId x : objs) {
    expect_eq(
        r, "lax.left_unit", {x},
        [&] { return seq(b, {b.tensor(F.unit_cell, b.identity(F.ob(x))), F.mult_cell(I1, x), F.mor(a.lunitor(x))}); },
        [&] { return b.lunitor(F.ob(x)); });
    expect_eq(
        r, "lax.right_unit", {x},
        [&] { return seq(b, {b.tensor(b.identity(F.ob(x)), F.unit_cell), F.mult_cell(x, I1), F.mor(a.runitor(x))}); },
        [&] { return b.runitor(F.ob(x)); });
  }
  for (ObjId x : objs)
    for (ObjId y : objs)
      for (ObjId z : objs)
        expect_eq(
            r, "lax.associativity", {x, y, z},
            [&] {
              return seq(b, {b.tensor(F.mult_cell(x, y), b.identity(F.ob(z))), F.mult_cell(a.tensor(x, y), z),
                             F.mor(a.associator(x, y, z))});
            },
            [&] {
              return seq(b, {b.associator(F.ob(x), F.ob(y), F.ob(z)), b.tensor(b.identity(F.ob(x)), F.mult_cell(y, z)),
                             F.mult_cell(x, a.tensor(y, z))});
            });
  r.normalize();
  return r;
}

struct PreservationReport {
  CheckReport report;
  /// change[x] sends a point I2 -> F x back to its point I1 -> x.
  std::map<ObjId, std::map<Mor, Mor>> change;

  std::optional<Mor> change_of(ObjId x, const Mor& p) const {
    auto it = change.find(x);
    if (it == change.end()) return std::nullopt;
    auto jt = it->second.find(p);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
  }
};

/// For each object x (the domain's check window plus `extra`), p |-> unit;F(p)
/// is a bijection dom(I1, x) -> cod(I2, F x).
inline PreservationReport check_preserves_underlying(const LaxMonoidalFunctor& F,
                                                     const std::vector<ObjId>& extra = {}) {
  const MonoidalBase& a = *F.dom;
  const MonoidalBase& b = *F.cod;
  PreservationReport out;
  CheckReport& r = out.report;
  std::vector<ObjId> objs = a.check_objects();
  objs.insert(objs.end(), extra.begin(), extra.end());
  std::sort(objs.begin(), objs.end());
  objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
  for (ObjId x : objs) {
    ++r.instances;
    auto& inv = out.change[x];
    bool ok = true;
    for (const Mor& p : a.hom(a.unit(), x)) {
      Mor q = b.then(F.unit_cell, F.mor(p));
      if (!inv.emplace(q, p).second) {
        r.fail("preserves_underlying.injective", {x, p}, q);
        ok = false;
      }
    }
    if (ok && inv.size() != b.hom_size(b.unit(), F.ob(x))) {
      r.fail("preserves_underlying.surjective", {x}, {}, {},
             std::to_string(inv.size()) + " of " + std::to_string(b.hom_size(b.unit(), F.ob(x))) + " points hit");
      ok = false;
    }
    if (!ok) out.change.erase(x);
  }
  r.normalize();
  return out;
}

/// Hom-objects F(E(x,y)), same underlying category. Refuses when F does not
/// preserve underlying categories at the check window or at a hom-object.
inline EnrichPtr change_of_base(const LaxMonoidalFunctor& F, const EnrichPtr& E) {
  if (E->base != F.dom && E->V().name() != F.dom->name())
    throw StructuralError("change_of_base: enrichment is over " + E->V().name() + ", functor starts at " +
                          F.dom->name());
  auto pres = check_preserves_underlying(F, E->hom_obj);
  if (!pres.report.ok())
    throw Refusal("change_of_base along " + F.name + ": underlying categories are not preserved (" +
                  pres.report.failures.front().law + " at " + to_string(pres.report.failures.front().instance) + ")");
  const MonoidalBase& b = *F.cod;
  const std::size_t n = E->objects();
  std::vector<ObjId> hom;
  std::vector<Mor> eid, ecomp;
  std::vector<std::vector<Mor>> fa(n * n);
  for (ObjId x = 0; x < n; ++x) eid.push_back(b.then(F.unit_cell, F.mor(E->eid(x))));
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      hom.push_back(F.ob(E->hom(x, y)));
      for (const Arrow& f : E->under.arrows(x, y)) fa[x * n + y].push_back(b.then(F.unit_cell, F.mor(E->from_arr(f))));
      for (ObjId z = 0; z < n; ++z)
        ecomp.push_back(b.then(F.mult_cell(E->hom(y, z), E->hom(x, y)), F.mor(E->ecomp(x, y, z))));
    }
  return make_enrichment(F.cod, E->under, std::move(hom), std::move(eid), std::move(ecomp), std::move(fa));
}

inline LaxMonoidalFunctor identity_lax(const BasePtr& v) {
  return LaxMonoidalFunctor{
      "id", v, v, [](ObjId x) { return x; }, [](const Mor& f) { return f; }, v->identity(v->unit()),
      [v](ObjId x, ObjId y) { return v->identity(v->tensor(x, y)); }};
}

/// G after F: unit I3 -> G I2 -> G F I1, multiplication through G's then F's.
inline LaxMonoidalFunctor compose_lax(const LaxMonoidalFunctor& F, const LaxMonoidalFunctor& G) {
  if (F.cod != G.dom && F.cod->name() != G.dom->name()) throw StructuralError("lax functors are not composable");
  BasePtr c = G.cod;
  return LaxMonoidalFunctor{
      F.name + ";" + G.name,
      F.dom,
      G.cod,
      [F, G](ObjId x) { return G.ob(F.ob(x)); },
      [F, G](const Mor& f) { return G.mor(F.mor(f)); },
      c->then(G.unit_cell, G.mor(F.unit_cell)),
      [F, G, c](ObjId x, ObjId y) { return c->then(G.mult_cell(F.ob(x), F.ob(y)), G.mor(F.mult_cell(x, y))); }};
}

/// Truth values into distances: true |-> 0, false |-> inf.
inline LaxMonoidalFunctor bool_to_cost(const BasePtr& boolean, const BasePtr& cost) {
  const ObjId inf = static_cast<ObjId>(cost->check_objects().size() - 1);
  auto ob = [inf](ObjId x) { return x ? ObjId{0} : inf; };
  return LaxMonoidalFunctor{"bool_to_cost", boolean, cost, ob,
                            [ob](const Mor& f) { return table_mor(ob(f.src), ob(f.dst), 0); },
                            table_mor(cost->unit(), ob(boolean->unit()), 0),
                            [ob, boolean, cost](ObjId x, ObjId y) {
                              return table_mor(cost->tensor(ob(x), ob(y)), ob(boolean->tensor(x, y)), 0);
                            }};
}

/// The unique monoidal functor to the terminal base.
inline LaxMonoidalFunctor collapse_to_terminal(const BasePtr& v, const BasePtr& terminal) {
  Mor one = terminal->identity(0);
  return LaxMonoidalFunctor{"collapse", v, terminal, [](ObjId) { return ObjId{0}; }, [one](const Mor&) { return one; },
                            one, [one](ObjId, ObjId) { return one; }};
}

// ---------------------------------------------------------------------------
// Set-enrichments

/// hom(x,y) is the set of arrows, with arrow k as element k. Pairs (g, f)
/// in E(y,z) x E(x,y) are numbered g*|C(x,y)| + f.
inline EnrichPtr canonical_set_enrichment(const FinCat& C, BasePtr base = {}) {
  const std::size_t n = C.objects();
  std::uint32_t widest = 0;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) widest = std::max(widest, C.hom_size(x, y));
  if (!base) base = finset_base(std::max<std::uint32_t>(widest, 1));
  auto* sets = dynamic_cast<const FinSetBase*>(base.get());
  if (!sets) throw CapabilityError(base->name() + ": canonical Set-enrichment needs a finite set base");
  if (widest > sets->window()) throw CapExceeded("canonical Set-enrichment: hom cardinality", widest);
  std::vector<ObjId> hom;
  std::vector<Mor> eid, ecomp;
  std::vector<std::vector<Mor>> fa(n * n);
  for (ObjId x = 0; x < n; ++x) eid.push_back(Mor{1, C.hom_size(x, x), Code{C.identity(x).k}});
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      hom.push_back(C.hom_size(x, y));
      for (const Arrow& f : C.arrows(x, y)) fa[x * n + y].push_back(Mor{1, C.hom_size(x, y), Code{f.k}});
      for (ObjId z = 0; z < n; ++z) {
        const std::uint32_t a = C.hom_size(x, y), b = C.hom_size(y, z);
        Mor m{a * b, C.hom_size(x, z), Code(std::size_t{a} * b)};
        for (std::uint32_t g = 0; g < b; ++g)
          for (std::uint32_t f = 0; f < a; ++f) m.code[g * a + f] = C.then(Arrow{x, y, f}, Arrow{y, z, g}).k;
        ecomp.push_back(std::move(m));
      }
    }
  return make_enrichment(base, C, std::move(hom), std::move(eid), std::move(ecomp), std::move(fa));
}

struct EnrichedIso {
  EnrichedFunctor forward, backward;
};

/// Between two Set-enrichments of the same category: element i of E1(x,y)
/// goes to the element of E2(x,y) naming the same arrow.
inline EnrichedIso set_enrichment_unique(const EnrichPtr& E1, const EnrichPtr& E2) {
  if (!dynamic_cast<const FinSetBase*>(E1->base.get()) || !dynamic_cast<const FinSetBase*>(E2->base.get()))
    throw CapabilityError("set_enrichment_unique needs enrichments over finite sets");
  if (!(E1->under == E2->under)) throw StructuralError("set_enrichment_unique: underlying categories differ");
  const std::size_t n = E1->objects();
  std::vector<ObjId> ob(n);
  std::iota(ob.begin(), ob.end(), 0);
  auto transfer = [&](const Enrichment& A, const Enrichment& B) {
    std::vector<Mor> out;
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y) {
        Mor m{A.hom(x, y), B.hom(x, y), Code(A.hom(x, y))};
        for (std::uint32_t i = 0; i < A.hom(x, y); ++i) {
          auto f = A.to_arr(x, y, Mor{1, A.hom(x, y), Code{i}});
          if (!f) throw StructuralError("Set-enrichment with an element that names no arrow");
          m.code[i] = B.from_arr(*f).code[0];
        }
        out.push_back(std::move(m));
      }
    return out;
  };
  return EnrichedIso{make_functor(E1, E2, ob, transfer(*E1, *E2)), make_functor(E2, E1, ob, transfer(*E2, *E1))};
}

// ---------------------------------------------------------------------------
// enrichments over a structure category

/// A category with a structure on each hom-set, arrow k being element k.
struct StructuredHoms {
  FinCat cat;
  std::vector<StructCode> hom_struct;  // row-major over (x, y)
  bool operator==(const StructuredHoms&) const = default;
};

inline const StructBase& as_struct_base(const BasePtr& b) {
  auto* s = dynamic_cast<const StructBase*>(b.get());
  if (!s) throw CapabilityError(b->name() + " is not a structure category");
  return *s;
}

inline StructuredHoms struct_enrichment_to_data(const Enrichment& E) {
  const StructBase& S = as_struct_base(E.base);
  const std::size_t n = E.objects();
  StructuredHoms d{E.under, {}};
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      ObjId h = E.hom(x, y);
      const std::uint32_t m = E.under.hom_size(x, y);
      if (S.carrier(h) != m)
        throw StructuralError("hom-object (" + std::to_string(x) + "," + std::to_string(y) + ") has " +
                              std::to_string(S.carrier(h)) + " elements for " + std::to_string(m) + " arrows");
      Code p(m);
      for (const Arrow& f : E.under.arrows(x, y)) p[E.from_arr(f).code.at(0)] = f.k;
      d.hom_struct.push_back(S.structure().transport(m, S.structure_of(h), p));
    }
  return d;
}

/// Refuses, naming (x, y, z), when composition is not a structure map from
/// the product structure.
inline EnrichPtr struct_data_to_enrichment(const BasePtr& base, const StructuredHoms& d) {
  const StructBase& S = as_struct_base(base);
  const CartesianStructure& cs = S.structure();
  const FinCat& C = d.cat;
  const std::size_t n = C.objects();
  if (d.hom_struct.size() != n * n) throw StructuralError("one structure per hom-set expected");
  std::vector<ObjId> hom;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) hom.push_back(S.intern(C.hom_size(x, y), d.hom_struct[x * n + y]));
  const ObjId I = S.unit();
  std::vector<Mor> eid, ecomp;
  std::vector<std::vector<Mor>> fa(n * n);
  for (ObjId x = 0; x < n; ++x) {
    Mor m{I, hom[x * n + x], Code{C.identity(x).k}};
    if (!S.valid(m)) throw Refusal("identity of " + std::to_string(x) + " is not a structure map from the unit");
    eid.push_back(std::move(m));
  }
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      for (const Arrow& f : C.arrows(x, y)) {
        Mor p{I, hom[x * n + y], Code{f.k}};
        if (!S.valid(p)) throw Refusal("arrow " + to_string(f) + " is not a structure map from the unit");
        fa[x * n + y].push_back(std::move(p));
      }
      for (ObjId z = 0; z < n; ++z) {
        const std::uint32_t a = C.hom_size(x, y), b = C.hom_size(y, z);
        Mor m{S.tensor(hom[y * n + z], hom[x * n + y]), hom[x * n + z], Code(std::size_t{a} * b)};
        for (std::uint32_t g = 0; g < b; ++g)
          for (std::uint32_t f = 0; f < a; ++f) m.code[g * a + f] = C.then(Arrow{x, y, f}, Arrow{y, z, g}).k;
        if (!S.valid(m))
          throw Refusal("composition at (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) +
                        ") does not preserve " + cs.name() + " structure");
        ecomp.push_back(std::move(m));
      }
    }
  return make_enrichment(base, C, std::move(hom), std::move(eid), std::move(ecomp), std::move(fa));
}

}  // namespace ecat
