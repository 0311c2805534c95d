#pragma once

#include <map>

#include "monoidal.hpp"

namespace ecat {

/// Composite of base morphisms in diagrammatic order.
inline Mor seq(const MonoidalBase& v, std::initializer_list<Mor> ms) {
  auto it = ms.begin();
  Mor acc = *it++;
  for (; it != ms.end(); ++it) acc = v.then(acc, *it);
  return acc;
}

/// A V-enrichment of an explicit finite category `under`.
///
/// Tables are indexed row-major: hom_obj and from_arr by (x, y), e_comp by
/// (x, y, z) and is a morphism E(y,z) (x) E(x,y) -> E(x,z). to_arr is the
/// inverse of from_arr, stored per hom pair.
struct Enrichment {
  BasePtr base;
  FinCat under;
  std::vector<ObjId> hom_obj;
  std::vector<Mor> e_id;
  std::vector<Mor> e_comp;
  std::vector<std::vector<Mor>> from_arr_table;
  std::vector<std::map<Mor, std::uint32_t>> to_arr_table;

  const MonoidalBase& V() const { return *base; }
  std::size_t objects() const { return under.objects(); }
  ObjId hom(ObjId x, ObjId y) const { return hom_obj.at(x * objects() + y); }
  const Mor& eid(ObjId x) const { return e_id.at(x); }
  const Mor& ecomp(ObjId x, ObjId y, ObjId z) const { return e_comp.at((x * objects() + y) * objects() + z); }
  const Mor& from_arr(const Arrow& f) const { return from_arr_table.at(f.src * objects() + f.dst).at(f.k); }
  std::optional<Arrow> to_arr(ObjId x, ObjId y, const Mor& p) const {
    const auto& t = to_arr_table.at(x * objects() + y);
    auto it = t.find(p);
    if (it == t.end()) return std::nullopt;
    return Arrow{x, y, it->second};
  }
};

using EnrichPtr = std::shared_ptr<const Enrichment>;

/// Assembles an enrichment, deriving to_arr by inverting from_arr. Throws
/// StructuralError on shape mismatch or when from_arr is not injective.
inline EnrichPtr make_enrichment(BasePtr base, FinCat under, std::vector<ObjId> hom_obj, std::vector<Mor> e_id,
                                 std::vector<Mor> e_comp, std::vector<std::vector<Mor>> from_arr) {
  const std::size_t n = under.objects();
  under.validate();
  if (hom_obj.size() != n * n || e_id.size() != n || e_comp.size() != n * n * n || from_arr.size() != n * n)
    throw StructuralError("enrichment tables do not match " + std::to_string(n) + " objects");
  auto e = std::make_shared<Enrichment>();
  e->base = std::move(base);
  e->to_arr_table.resize(n * n);
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      const auto& row = from_arr[x * n + y];
      if (row.size() != under.hom_size(x, y))
        throw StructuralError("from_arr(" + std::to_string(x) + "," + std::to_string(y) + ") has " +
                              std::to_string(row.size()) + " entries, expected " +
                              std::to_string(under.hom_size(x, y)));
      for (std::uint32_t k = 0; k < row.size(); ++k)
        if (!e->to_arr_table[x * n + y].emplace(row[k], k).second)
          throw StructuralError("from_arr is not injective on hom(" + std::to_string(x) + "," + std::to_string(y) +
                                ")");
    }
  e->under = std::move(under);
  e->hom_obj = std::move(hom_obj);
  e->e_id = std::move(e_id);
  e->e_comp = std::move(e_comp);
  e->from_arr_table = std::move(from_arr);
  return e;
}

namespace detail {

template <class M>
bool typed(CheckReport& r, const MonoidalBase& v, const char* law, const Instance& inst, M&& make, ObjId src,
           ObjId dst) {
  return expect_typed(r, v, law, inst, std::forward<M>(make), src, dst);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// enrichment laws

/// Unit and associativity diagrams, the from_arr/to_arr bijection, the
/// identity redundancy e_id = from_arr(id) and compatibility of from_arr with
/// composition, at every instance.
inline CheckReport check_enrichment(const Enrichment& E, const CheckOptions& opts = {}) {
  using detail::expect_eq;
  const MonoidalBase& v = E.V();
  const std::size_t n = E.objects();
  const ObjId I = v.unit();
  CheckReport r;
  auto full = [&] { return r.failures.size() >= opts.max_failures; };
  auto id = [&](ObjId o) { return v.identity(o); };

  bool typing_ok = true;
  for (ObjId x = 0; x < n; ++x) {
    if (!v.valid_object(E.hom(x, x))) throw StructuralError("hom object out of range");
    typing_ok &= detail::typed(r, v, "enrichment.eid_typing", {x}, [&] { return E.eid(x); }, I, E.hom(x, x));
  }
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (ObjId z = 0; z < n; ++z)
        typing_ok &= detail::typed(r, v, "enrichment.ecomp_typing", {x, y, z}, [&] { return E.ecomp(x, y, z); },
                                   v.tensor(E.hom(y, z), E.hom(x, y)), E.hom(x, z));
  for (const Arrow& f : E.under.all_arrows())
    typing_ok &= detail::typed(r, v, "enrichment.from_arr_typing", {f}, [&] { return E.from_arr(f); }, I,
                               E.hom(f.src, f.dst));
  if (!typing_ok || full()) {
    r.normalize();
    return r;
  }

  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      ObjId h = E.hom(x, y);
      expect_eq(
          r, "enrichment.left_unit", {x, y},
          [&] { return v.then(v.tensor(E.eid(y), id(h)), E.ecomp(x, y, y)); }, [&] { return v.lunitor(h); });
      expect_eq(
          r, "enrichment.right_unit", {x, y},
          [&] { return v.then(v.tensor(id(h), E.eid(x)), E.ecomp(x, x, y)); }, [&] { return v.runitor(h); });
      if (full()) return r;
    }
  for (ObjId w = 0; w < n; ++w)
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z) {
          expect_eq(
              r, "enrichment.associativity", {w, x, y, z},
              [&] {
                return seq(v, {v.associator(E.hom(y, z), E.hom(x, y), E.hom(w, x)),
                               v.tensor(id(E.hom(y, z)), E.ecomp(w, x, y)), E.ecomp(w, y, z)});
              },
              [&] { return v.then(v.tensor(E.ecomp(x, y, z), id(E.hom(w, x))), E.ecomp(w, x, z)); });
          if (full()) return r;
        }

  // from_arr / to_arr bijection
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      for (const Arrow& f : E.under.arrows(x, y)) {
        ++r.instances;
        auto back = E.to_arr(x, y, E.from_arr(f));
        if (!back || *back != f) r.fail("enrichment.to_arr_from_arr", {f}, E.from_arr(f));
      }
      ObjId h = E.hom(x, y);
      if (v.hom_size(I, h) > opts.hom_budget) {
        ++r.skipped;
        continue;
      }
      for (const Mor& p : v.hom(I, h)) {
        ++r.instances;
        auto f = E.to_arr(x, y, p);
        if (!f) r.fail("enrichment.from_arr_to_arr", {x, y, p}, {}, {}, "point has no arrow");
      }
      if (full()) return r;
    }

  for (ObjId x = 0; x < n; ++x)
    expect_eq(r, "enrichment.eid_from_arr", {x}, [&] { return E.eid(x); },
              [&] { return E.from_arr(E.under.identity(x)); });
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (ObjId z = 0; z < n; ++z)
        for (const Arrow& f : E.under.arrows(x, y))
          for (const Arrow& g : E.under.arrows(y, z)) {
            expect_eq(
                r, "enrichment.from_arr_comp", {f, g}, [&] { return E.from_arr(E.under.then(f, g)); },
                [&] {
                  return seq(v, {v.lunitor_inv(I), v.tensor(E.from_arr(g), E.from_arr(f)), E.ecomp(x, y, z)});
                });
            if (full()) return r;
          }
  r.normalize();
  return r;
}

/// h |-> h . f : E(w,x) -> E(w,y), for f : x -> y.
inline Mor precompose_mor(const Enrichment& E, ObjId w, const Arrow& f) {
  const MonoidalBase& v = E.V();
  return seq(v, {v.lunitor_inv(E.hom(w, f.src)), v.tensor(E.from_arr(f), v.identity(E.hom(w, f.src))),
                 E.ecomp(w, f.src, f.dst)});
}

/// h |-> f . h : E(y,z) -> E(x,z), for f : x -> y.
inline Mor postcompose_mor(const Enrichment& E, ObjId z, const Arrow& f) {
  const MonoidalBase& v = E.V();
  return seq(v, {v.runitor_inv(E.hom(f.dst, z)), v.tensor(v.identity(E.hom(f.dst, z)), E.from_arr(f)),
                 E.ecomp(f.src, f.dst, z)});
}

// ---------------------------------------------------------------------------
// underlying category and Kelly presentation

/// Enriched category in the classical presentation: hom-objects, identities
/// and composition, with no separate category of arrows.
struct KellyEnrichedCat {
  BasePtr base;
  std::size_t n = 0;
  std::vector<ObjId> hom_obj;
  std::vector<Mor> e_id;
  std::vector<Mor> e_comp;

  ObjId hom(ObjId x, ObjId y) const { return hom_obj.at(x * n + y); }
  const Mor& eid(ObjId x) const { return e_id.at(x); }
  const Mor& ecomp(ObjId x, ObjId y, ObjId z) const { return e_comp.at((x * n + y) * n + z); }
};

inline CheckReport check_kelly(const KellyEnrichedCat& K, const CheckOptions& opts = {}) {
  using detail::expect_eq;
  const MonoidalBase& v = *K.base;
  const std::size_t n = K.n;
  const ObjId I = v.unit();
  CheckReport r;
  auto full = [&] { return r.failures.size() >= opts.max_failures; };
  auto id = [&](ObjId o) { return v.identity(o); };
  if (K.hom_obj.size() != n * n || K.e_id.size() != n || K.e_comp.size() != n * n * n)
    throw StructuralError("kelly tables do not match " + std::to_string(n) + " objects");
  for (ObjId o : K.hom_obj)
    if (!v.valid_object(o)) throw StructuralError("hom object out of range");
  bool typing_ok = true;
  for (ObjId x = 0; x < n; ++x)
    typing_ok &= detail::typed(r, v, "kelly.eid_typing", {x}, [&] { return K.eid(x); }, I, K.hom(x, x));
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (ObjId z = 0; z < n; ++z)
        typing_ok &= detail::typed(r, v, "kelly.ecomp_typing", {x, y, z}, [&] { return K.ecomp(x, y, z); },
                                   v.tensor(K.hom(y, z), K.hom(x, y)), K.hom(x, z));
  if (!typing_ok || full()) {
    r.normalize();
    return r;
  }
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      ObjId h = K.hom(x, y);
      expect_eq(
          r, "kelly.left_unit", {x, y}, [&] { return v.then(v.tensor(K.eid(y), id(h)), K.ecomp(x, y, y)); },
          [&] { return v.lunitor(h); });
      expect_eq(
          r, "kelly.right_unit", {x, y}, [&] { return v.then(v.tensor(id(h), K.eid(x)), K.ecomp(x, x, y)); },
          [&] { return v.runitor(h); });
    }
  for (ObjId w = 0; w < n; ++w)
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z) {
          expect_eq(
              r, "kelly.associativity", {w, x, y, z},
              [&] {
                return seq(v, {v.associator(K.hom(y, z), K.hom(x, y), K.hom(w, x)),
                               v.tensor(id(K.hom(y, z)), K.ecomp(w, x, y)), K.ecomp(w, y, z)});
              },
              [&] { return v.then(v.tensor(K.ecomp(x, y, z), id(K.hom(w, x))), K.ecomp(w, x, z)); });
          if (full()) return r;
        }
  r.normalize();
  return r;
}

inline KellyEnrichedCat to_kelly(const Enrichment& E) {
  return KellyEnrichedCat{E.base, E.objects(), E.hom_obj, E.e_id, E.e_comp};
}

/// The category with hom(x,y) = base(I, K(x,y)), identities e_id and
/// composite of points p, q given by I -> I(x)I -> K(y,z)(x)K(x,y) -> K(x,z).
/// Points are numbered in base hom order.
inline FinCat underlying_of(const MonoidalBase& v, std::size_t n, const std::function<ObjId(ObjId, ObjId)>& hom,
                            const std::function<Mor(ObjId)>& eid,
                            const std::function<Mor(ObjId, ObjId, ObjId)>& ecomp,
                            std::vector<std::vector<Mor>>* points_out = nullptr) {
  const ObjId I = v.unit();
  std::vector<std::vector<Mor>> points(n * n);
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) points[x * n + y] = v.hom(I, hom(x, y));
  auto index = [&](ObjId x, ObjId y, const Mor& p) -> std::uint32_t {
    const auto& h = points[x * n + y];
    auto it = std::lower_bound(h.begin(), h.end(), p);
    if (it == h.end() || !(*it == p)) throw StructuralError("composite is not a point of the hom object");
    return static_cast<std::uint32_t>(it - h.begin());
  };
  const Mor lI = v.lunitor_inv(I);
  FinCat c = FinCat::build(
      n, [&](ObjId x, ObjId y) { return static_cast<std::uint32_t>(points[x * n + y].size()); },
      [&](ObjId x) { return index(x, x, eid(x)); },
      [&](const Arrow& f, const Arrow& g) {
        const Mor& p = points[f.src * n + f.dst][f.k];
        const Mor& q = points[g.src * n + g.dst][g.k];
        return index(f.src, g.dst, seq(v, {lI, v.tensor(q, p), ecomp(f.src, f.dst, g.dst)}));
      });
  if (points_out) *points_out = std::move(points);
  return c;
}

inline EnrichPtr from_kelly(const KellyEnrichedCat& K) {
  const MonoidalBase& v = *K.base;
  const std::size_t n = K.n;
  if (K.hom_obj.size() != n * n || K.e_id.size() != n || K.e_comp.size() != n * n * n)
    throw StructuralError("kelly tables do not match " + std::to_string(n) + " objects");
  auto typed = [&](const Mor& m, ObjId s, ObjId d) { return m.src == s && m.dst == d && v.valid(m); };
  for (ObjId x = 0; x < n; ++x)
    if (!typed(K.eid(x), v.unit(), K.hom(x, x)))
      throw StructuralError("identity at " + std::to_string(x) + " is ill-typed");
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (ObjId z = 0; z < n; ++z)
        if (!typed(K.ecomp(x, y, z), v.tensor(K.hom(y, z), K.hom(x, y)), K.hom(x, z)))
          throw StructuralError("composition at (" + std::to_string(x) + ", " + std::to_string(y) + ", " +
                                std::to_string(z) + ") is ill-typed");
  std::vector<std::vector<Mor>> points;
  FinCat c = underlying_of(
      *K.base, K.n, [&](ObjId x, ObjId y) { return K.hom(x, y); }, [&](ObjId x) { return K.eid(x); },
      [&](ObjId x, ObjId y, ObjId z) { return K.ecomp(x, y, z); }, &points);
  return make_enrichment(K.base, std::move(c), K.hom_obj, K.e_id, K.e_comp, std::move(points));
}

inline FinCat underlying_category(const Enrichment& E) {
  return underlying_of(
      E.V(), E.objects(), [&](ObjId x, ObjId y) { return E.hom(x, y); }, [&](ObjId x) { return E.eid(x); },
      [&](ObjId x, ObjId y, ObjId z) { return E.ecomp(x, y, z); });
}

/// from_arr, read as an identity-on-objects functor from E.under to the
/// underlying category, is bijective on homs and preserves identities and
/// composition.
inline CheckReport check_underlying_iso(const Enrichment& E) {
  CheckReport r;
  const MonoidalBase& v = E.V();
  const std::size_t n = E.objects();
  std::vector<std::vector<Mor>> points;
  FinCat U = underlying_of(
      v, n, [&](ObjId x, ObjId y) { return E.hom(x, y); }, [&](ObjId x) { return E.eid(x); },
      [&](ObjId x, ObjId y, ObjId z) { return E.ecomp(x, y, z); }, &points);
  auto image = [&](const Arrow& f) {
    const auto& h = points[f.src * n + f.dst];
    auto it = std::lower_bound(h.begin(), h.end(), E.from_arr(f));
    return Arrow{f.src, f.dst, static_cast<std::uint32_t>(it - h.begin())};
  };
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      ++r.instances;
      if (U.hom_size(x, y) != E.under.hom_size(x, y)) r.fail("underlying.bijective", {x, y});
    }
  for (ObjId x = 0; x < n; ++x) {
    ++r.instances;
    if (image(E.under.identity(x)) != U.identity(x)) r.fail("underlying.identity", {x});
  }
  for (const Arrow& f : E.under.all_arrows())
    for (ObjId z = 0; z < n; ++z)
      for (const Arrow& g : E.under.arrows(f.dst, z)) {
        ++r.instances;
        if (image(E.under.then(f, g)) != U.then(image(f), image(g))) r.fail("underlying.composition", {f, g});
      }
  r.normalize();
  return r;
}

// ---------------------------------------------------------------------------
// enriched functors and transformations

struct EnrichedFunctor {
  EnrichPtr dom, cod;
  std::vector<ObjId> ob_map;
  /// mor_map[x*n + y][k] is the local index of F(x,y,k) in cod hom(Fx, Fy).
  std::vector<std::vector<std::uint32_t>> mor_map;
  /// e_fun[x*n + y] : E1(x,y) -> E2(Fx,Fy).
  std::vector<Mor> e_fun;

  ObjId operator()(ObjId x) const { return ob_map.at(x); }
  Arrow operator()(const Arrow& f) const {
    return Arrow{ob_map.at(f.src), ob_map.at(f.dst), mor_map.at(f.src * dom->objects() + f.dst).at(f.k)};
  }
  const Mor& efun(ObjId x, ObjId y) const { return e_fun.at(x * dom->objects() + y); }
};

/// Underlying functor determined from e_fun via
/// from_arr(F f) = from_arr(f) ; e_fun. Throws Refusal when some composite is
/// not a point with a preimage.
inline std::vector<std::vector<std::uint32_t>> derive_mor_map(const Enrichment& E1, const Enrichment& E2,
                                                               const std::vector<ObjId>& ob,
                                                               const std::vector<Mor>& e_fun) {
  const std::size_t n = E1.objects();
  std::vector<std::vector<std::uint32_t>> mm(n * n);
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (const Arrow& f : E1.under.arrows(x, y)) {
        Mor p = E1.V().then(E1.from_arr(f), e_fun[x * n + y]);
        auto g = E2.to_arr(ob[x], ob[y], p);
        if (!g) throw Refusal("e_fun sends " + to_string(f) + " to a point with no arrow");
        mm[x * n + y].push_back(g->k);
      }
  return mm;
}

inline EnrichedFunctor make_functor(EnrichPtr dom, EnrichPtr cod, std::vector<ObjId> ob, std::vector<Mor> e_fun) {
  auto mm = derive_mor_map(*dom, *cod, ob, e_fun);
  return EnrichedFunctor{std::move(dom), std::move(cod), std::move(ob), std::move(mm), std::move(e_fun)};
}

inline void require_same_base(const Enrichment& a, const Enrichment& b) {
  if (a.base != b.base && a.V().name() != b.V().name())
    throw StructuralError("enrichments over different bases: " + a.V().name() + " and " + b.V().name());
}

/// Underlying functor laws, the unit triangle, the composition square and
/// from_arr(F f) = from_arr(f) ; e_fun.
inline CheckReport check_functor_enrichment(const EnrichedFunctor& F, const CheckOptions& opts = {}) {
  using detail::expect_eq;
  const Enrichment& E1 = *F.dom;
  const Enrichment& E2 = *F.cod;
  require_same_base(E1, E2);
  const MonoidalBase& v = E1.V();
  const std::size_t n = E1.objects();
  CheckReport r;
  auto full = [&] { return r.failures.size() >= opts.max_failures; };
  if (F.ob_map.size() != n || F.e_fun.size() != n * n || F.mor_map.size() != n * n)
    throw StructuralError("functor tables do not match the domain");
  for (ObjId x = 0; x < n; ++x)
    if (F.ob_map[x] >= E2.objects()) throw StructuralError("object map out of range");
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      if (F.mor_map[x * n + y].size() != E1.under.hom_size(x, y))
        throw StructuralError("morphism map has the wrong number of entries");
      for (std::uint32_t k : F.mor_map[x * n + y])
        if (k >= E2.under.hom_size(F(x), F(y))) throw StructuralError("morphism map out of range");
    }

  bool typing_ok = true;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      typing_ok &= detail::typed(r, v, "functor.efun_typing", {x, y}, [&] { return F.efun(x, y); }, E1.hom(x, y),
                                 E2.hom(F(x), F(y)));
  if (!typing_ok) {
    r.normalize();
    return r;
  }

  for (ObjId x = 0; x < n; ++x) {
    ++r.instances;
    if (F(E1.under.identity(x)) != E2.under.identity(F(x))) r.fail("functor.identity", {x});
  }
  for (const Arrow& f : E1.under.all_arrows())
    for (ObjId z = 0; z < n; ++z)
      for (const Arrow& g : E1.under.arrows(f.dst, z)) {
        ++r.instances;
        if (F(E1.under.then(f, g)) != E2.under.then(F(f), F(g))) r.fail("functor.composition", {f, g});
      }
  if (full()) return r;

  for (ObjId x = 0; x < n; ++x)
    expect_eq(r, "functor.unit", {x}, [&] { return v.then(E1.eid(x), F.efun(x, x)); },
              [&] { return E2.eid(F(x)); });
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (ObjId z = 0; z < n; ++z) {
        expect_eq(
            r, "functor.composition_square", {x, y, z}, [&] { return v.then(E1.ecomp(x, y, z), F.efun(x, z)); },
            [&] { return v.then(v.tensor(F.efun(y, z), F.efun(x, y)), E2.ecomp(F(x), F(y), F(z))); });
        if (full()) return r;
      }
  for (const Arrow& f : E1.under.all_arrows())
    expect_eq(
        r, "functor.from_arr", {f}, [&] { return E2.from_arr(F(f)); },
        [&] { return v.then(E1.from_arr(f), F.efun(f.src, f.dst)); });
  r.normalize();
  return r;
}

struct EnrichedTransformation {
  EnrichedFunctor src, dst;
  /// component[x] : src(x) -> dst(x) in the codomain's category.
  std::vector<Arrow> component;
};

/// Underlying naturality, the hexagon form of the enrichment condition and
/// its square form. Verdicts "hexagon" and "square" are recorded separately.
inline CheckReport check_nat_trans_enrichment(const EnrichedTransformation& t, const CheckOptions& opts = {}) {
  const EnrichedFunctor& F1 = t.src;
  const EnrichedFunctor& F2 = t.dst;
  if (F1.dom != F2.dom || F1.cod != F2.cod) throw StructuralError("transformation between non-parallel functors");
  const Enrichment& E1 = *F1.dom;
  const Enrichment& E2 = *F1.cod;
  const MonoidalBase& v = E1.V();
  const std::size_t n = E1.objects();
  if (t.component.size() != n) throw StructuralError("transformation has the wrong number of components");
  for (ObjId x = 0; x < n; ++x) {
    const Arrow& c = t.component[x];
    if (c.src != F1(x) || c.dst != F2(x) || !E2.under.valid(c))
      throw StructuralError("component at " + std::to_string(x) + " has the wrong type");
  }
  CheckReport r;
  auto full = [&] { return r.failures.size() >= opts.max_failures; };
  for (const Arrow& f : E1.under.all_arrows()) {
    ++r.instances;
    if (E2.under.then(F1(f), t.component[f.dst]) != E2.under.then(t.component[f.src], F2(f)))
      r.fail("transformation.naturality", {f});
  }
  bool hex_ok = true, sq_ok = true;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      ObjId h = E1.hom(x, y);
      const Arrow& tx = t.component[x];
      const Arrow& ty = t.component[y];
      ++r.instances;
      Mor hl = seq(v, {v.runitor_inv(h), v.tensor(F2.efun(x, y), E2.from_arr(tx)), E2.ecomp(F1(x), F2(x), F2(y))});
      Mor hr = seq(v, {v.lunitor_inv(h), v.tensor(E2.from_arr(ty), F1.efun(x, y)), E2.ecomp(F1(x), F1(y), F2(y))});
      if (!(hl == hr)) {
        hex_ok = false;
        r.fail("transformation.hexagon", {x, y}, hl, hr);
      }
      ++r.instances;
      Mor sl = v.then(F1.efun(x, y), precompose_mor(E2, F1(x), ty));
      Mor sr = v.then(F2.efun(x, y), postcompose_mor(E2, F2(y), tx));
      if (!(sl == sr)) {
        sq_ok = false;
        r.fail("transformation.square", {x, y}, sl, sr);
      }
      if (full()) return r;
    }
  r.verdicts.emplace_back("hexagon", hex_ok);
  r.verdicts.emplace_back("square", sq_ok);
  r.normalize();
  return r;
}

inline EnrichedFunctor id_functor(const EnrichPtr& E) {
  const std::size_t n = E->objects();
  EnrichedFunctor F{E, E, {}, {}, {}};
  for (ObjId x = 0; x < n; ++x) F.ob_map.push_back(x);
  F.mor_map.resize(n * n);
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      for (std::uint32_t k = 0; k < E->under.hom_size(x, y); ++k) F.mor_map[x * n + y].push_back(k);
      F.e_fun.push_back(E->V().identity(E->hom(x, y)));
    }
  return F;
}

/// F then G.
inline EnrichedFunctor compose_functors(const EnrichedFunctor& F, const EnrichedFunctor& G) {
  if (F.cod != G.dom) throw StructuralError("functors are not composable");
  const std::size_t n = F.dom->objects();
  EnrichedFunctor H{F.dom, G.cod, {}, {}, {}};
  for (ObjId x = 0; x < n; ++x) H.ob_map.push_back(G(F(x)));
  H.mor_map.resize(n * n);
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      for (const Arrow& f : F.dom->under.arrows(x, y)) H.mor_map[x * n + y].push_back(G(F(f)).k);
      H.e_fun.push_back(F.dom->V().then(F.efun(x, y), G.efun(F(x), F(y))));
    }
  return H;
}

inline EnrichedTransformation id_transformation(const EnrichedFunctor& F) {
  EnrichedTransformation t{F, F, {}};
  for (ObjId x = 0; x < F.dom->objects(); ++x) t.component.push_back(F.cod->under.identity(F(x)));
  return t;
}

/// F whiskered onto t : G1 => G2, giving F.G1 => F.G2.
inline EnrichedTransformation whisker_left(const EnrichedFunctor& F, const EnrichedTransformation& t) {
  EnrichedTransformation w{compose_functors(F, t.src), compose_functors(F, t.dst), {}};
  for (ObjId x = 0; x < F.dom->objects(); ++x) w.component.push_back(t.component.at(F(x)));
  return w;
}

/// t : F1 => F2 whiskered by G, giving F1.G => F2.G.
inline EnrichedTransformation whisker_right(const EnrichedTransformation& t, const EnrichedFunctor& G) {
  EnrichedTransformation w{compose_functors(t.src, G), compose_functors(t.dst, G), {}};
  for (const Arrow& c : t.component) w.component.push_back(G(c));
  return w;
}

/// t then s, componentwise.
inline EnrichedTransformation vcompose(const EnrichedTransformation& t, const EnrichedTransformation& s) {
  EnrichedTransformation w{t.src, s.dst, {}};
  for (std::size_t x = 0; x < t.component.size(); ++x)
    w.component.push_back(t.src.cod->under.then(t.component[x], s.component.at(x)));
  return w;
}

/// Pointwise inverse, when every component is invertible.
inline std::optional<EnrichedTransformation> invertible_2cell(const EnrichedTransformation& t) {
  EnrichedTransformation inv{t.dst, t.src, {}};
  for (const Arrow& c : t.component) {
    auto i = inverse_of(t.src.cod->under, c);
    if (!i) return std::nullopt;
    inv.component.push_back(*i);
  }
  return inv;
}

inline bool same_functor(const EnrichedFunctor& a, const EnrichedFunctor& b) {
  return a.dom == b.dom && a.cod == b.cod && a.ob_map == b.ob_map && a.mor_map == b.mor_map && a.e_fun == b.e_fun;
}

/// Identity-on-objects comparison from_kelly(to_kelly(E)) -> E, together with
/// its inverse. Both directions are identity on hom-objects.
struct KellyRoundTrip {
  EnrichPtr rebuilt;
  EnrichedFunctor to_original, from_original;
};

inline KellyRoundTrip kelly_round_trip(const EnrichPtr& E) {
  EnrichPtr R = from_kelly(to_kelly(*E));
  const std::size_t n = E->objects();
  std::vector<ObjId> ob(n);
  std::iota(ob.begin(), ob.end(), 0);
  std::vector<Mor> ids;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) ids.push_back(E->V().identity(E->hom(x, y)));
  return KellyRoundTrip{R, make_functor(R, E, ob, ids), make_functor(E, R, ob, ids)};
}

}  // namespace ecat
