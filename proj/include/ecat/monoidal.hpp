#pragma once

#include <functional>
#include <map>
#include <memory>

#include "fincat.hpp"

namespace ecat {

/// Chosen equalizer of a parallel pair f, g : a -> b.
struct Equalizer {
  ObjId obj = 0;
  Mor incl;
  /// The unique u with u;incl = h, when h equalizes the pair.
  std::function<std::optional<Mor>(const Mor&)> factorize;
};

/// Chosen product of a finite list of objects.
struct Product {
  ObjId obj = 0;
  std::vector<Mor> proj;
  /// Pairing of a cone from `apex` (one leg per factor).
  std::function<Mor(ObjId apex, const std::vector<Mor>&)> pair;
};

/// A finite (or finitely checked) monoidal category. Implementations are
/// immutable once constructed; composition is diagrammatic.
///
/// `check_objects()` is the object set every law checker quantifies over.
/// For table bases it is the whole object set; symbolic bases (finite sets,
/// structured sets) have unboundedly many objects and expose a size-capped
/// window, while tensor and internal hom remain total.
class MonoidalBase {
 public:
  virtual ~MonoidalBase() = default;

  virtual std::string name() const = 0;
  virtual std::vector<ObjId> check_objects() const = 0;
  virtual bool valid_object(ObjId x) const = 0;
  /// Cardinality of hom(a, b), saturating at UINT64_MAX.
  virtual std::uint64_t hom_size(ObjId a, ObjId b) const = 0;
  /// Every morphism a -> b in canonical order.
  virtual std::vector<Mor> hom(ObjId a, ObjId b) const = 0;
  virtual bool valid(const Mor& f) const = 0;

  virtual Mor identity(ObjId x) const = 0;
  virtual Mor then(const Mor& f, const Mor& g) const = 0;

  virtual ObjId unit() const = 0;
  virtual ObjId tensor(ObjId x, ObjId y) const = 0;
  virtual Mor tensor(const Mor& f, const Mor& g) const = 0;
  virtual Mor lunitor(ObjId x) const = 0;
  virtual Mor lunitor_inv(ObjId x) const = 0;
  virtual Mor runitor(ObjId x) const = 0;
  virtual Mor runitor_inv(ObjId x) const = 0;
  virtual Mor associator(ObjId x, ObjId y, ObjId z) const = 0;
  virtual Mor associator_inv(ObjId x, ObjId y, ObjId z) const = 0;

  virtual bool has_symmetry() const { return false; }
  virtual Mor symmetry(ObjId, ObjId) const { throw CapabilityError(name() + ": no symmetry"); }

  virtual bool has_closed() const { return false; }
  /// Internal hom [y, z].
  virtual ObjId internal_hom(ObjId, ObjId) const { throw CapabilityError(name() + ": not closed"); }
  /// eval : [y, z] (x) y -> z.
  virtual Mor eval(ObjId, ObjId) const { throw CapabilityError(name() + ": not closed"); }
  /// Transpose of f : x (x) y -> z, a morphism x -> [y, z].
  virtual Mor lam(ObjId, ObjId, const Mor&) const { throw CapabilityError(name() + ": not closed"); }

  virtual bool has_equalizers() const { return false; }
  virtual Equalizer equalizer(const Mor&, const Mor&) const {
    throw CapabilityError(name() + ": no equalizer chooser");
  }
  virtual bool has_products() const { return false; }
  virtual Product product(const std::vector<ObjId>&) const {
    throw CapabilityError(name() + ": no product chooser");
  }

  virtual bool thin() const { return false; }

  /// Two-sided inverse, by search over hom(dst, src) unless overridden.
  virtual std::optional<Mor> inverse(const Mor& f) const {
    for (const Mor& g : hom(f.dst, f.src))
      if (then(f, g) == identity(f.src) && then(g, f) == identity(f.dst)) return g;
    return std::nullopt;
  }

  /// Integer index of a morphism inside hom(src, dst), when representable.
  virtual std::optional<std::uint64_t> index_of(const Mor& f) const = 0;
  virtual std::optional<Mor> mor_at(ObjId src, ObjId dst, std::uint64_t k) const = 0;

  /// "builtin(<id>, params...)" spelling for symbolic bases, empty otherwise.
  virtual std::string builtin_spec() const { return {}; }
};

using BasePtr = std::shared_ptr<const MonoidalBase>;

inline void require_parallel(const Mor& f, const Mor& g) {
  if (f.src != g.src || f.dst != g.dst)
    throw StructuralError("morphisms " + to_string(f) + " and " + to_string(g) + " are not parallel");
}

inline Equalizer equalizer(const MonoidalBase& v, const Mor& f, const Mor& g) {
  require_parallel(f, g);
  if (!v.has_equalizers()) throw CapabilityError(v.name() + ": no equalizer chooser");
  return v.equalizer(f, g);
}

inline Product finite_product(const MonoidalBase& v, const std::vector<ObjId>& objs) {
  if (!v.has_products()) throw CapabilityError(v.name() + ": no product chooser");
  return v.product(objs);
}

// ---------------------------------------------------------------------------
// law checking helpers

namespace detail {

/// Records a failure if evaluating either side throws or the sides differ.
template <class L, class R>
void expect_eq(CheckReport& r, const char* law, const Instance& inst, L&& lhs, R&& rhs) {
  ++r.instances;
  Mor a, b;
  try {
    a = lhs();
  } catch (const Error& e) {
    r.fail(law, inst, {}, {}, std::string("lhs ill-typed: ") + e.what());
    return;
  }
  try {
    b = rhs();
  } catch (const Error& e) {
    r.fail(law, inst, a, {}, std::string("rhs ill-typed: ") + e.what());
    return;
  }
  if (!(a == b)) r.fail(law, inst, a, b);
}

template <class M>
bool expect_typed(CheckReport& r, const MonoidalBase& v, const char* law, const Instance& inst, M&& make,
                  ObjId src, ObjId dst) {
  ++r.instances;
  Mor m;
  try {
    m = make();
  } catch (const Error& e) {
    r.fail(law, inst, {}, {}, e.what());
    return false;
  }
  if (m.src != src || m.dst != dst || !v.valid(m)) {
    r.fail(law, inst, m, {}, "expected a morphism " + std::to_string(src) + " -> " + std::to_string(dst));
    return false;
  }
  return true;
}

/// Morphisms between check objects, enumerated once.
class HomCache {
 public:
  HomCache(const MonoidalBase& v, std::vector<ObjId> objs) : v_(v), objs_(std::move(objs)) {}
  const std::vector<ObjId>& objects() const { return objs_; }
  const std::vector<Mor>& hom(ObjId a, ObjId b) {
    auto key = std::pair{a, b};
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, v_.hom(a, b)).first;
    return it->second;
  }
  std::vector<Mor> all() {
    std::vector<Mor> out;
    for (ObjId a : objs_)
      for (ObjId b : objs_)
        for (const Mor& f : hom(a, b)) out.push_back(f);
    return out;
  }

 private:
  const MonoidalBase& v_;
  std::vector<ObjId> objs_;
  std::map<std::pair<ObjId, ObjId>, std::vector<Mor>> cache_;
};

}  // namespace detail

/// Category laws of the base restricted to its check objects.
inline CheckReport check_base_category(const MonoidalBase& v, const CheckOptions& opts = {}) {
  // Composites are tabulated once (with typing checked), then the identity
  // and associativity laws are scanned on the resulting index table.
  CheckReport r;
  const auto objs = v.check_objects();
  const std::size_t n = objs.size();
  std::vector<std::vector<Mor>> homs(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) homs[i * n + j] = v.hom(objs[i], objs[j]);
  auto locate = [&](std::size_t i, std::size_t j, const Mor& m) -> std::optional<std::uint32_t> {
    const auto& h = homs[i * n + j];
    auto it = std::lower_bound(h.begin(), h.end(), m);
    if (it == h.end() || !(*it == m)) return std::nullopt;
    return static_cast<std::uint32_t>(it - h.begin());
  };
  std::vector<std::uint32_t> sizes(n * n);
  for (std::size_t p = 0; p < n * n; ++p) sizes[p] = static_cast<std::uint32_t>(homs[p].size());
  FinCat table(n, sizes);
  for (std::size_t i = 0; i < n; ++i) {
    ++r.instances;
    try {
      Mor e = v.identity(objs[i]);
      auto k = e.src == objs[i] && e.dst == objs[i] ? locate(i, i, e) : std::nullopt;
      if (!k) r.fail("category.identity_typing", {objs[i]}, e);
      else table.set_identity(static_cast<ObjId>(i), *k);
    } catch (const Error& ex) {
      r.fail("category.identity_typing", {objs[i]}, {}, {}, ex.what());
    }
  }
  if (r.failures.size() >= opts.max_failures) return r;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::uint32_t i = 0; i < sizes[a * n + b]; ++i)
          for (std::uint32_t j = 0; j < sizes[b * n + c]; ++j) {
            const Mor& f = homs[a * n + b][i];
            const Mor& g = homs[b * n + c][j];
            ++r.instances;
            try {
              Mor fg = v.then(f, g);
              auto k = fg.src == f.src && fg.dst == g.dst ? locate(a, c, fg) : std::nullopt;
              if (!k) r.fail("category.composite_typing", {f, g}, fg);
              else table.set_then(Arrow{ObjId(a), ObjId(b), i}, Arrow{ObjId(b), ObjId(c), j}, *k);
            } catch (const Error& ex) {
              r.fail("category.composite_typing", {f, g}, {}, {}, ex.what());
            }
            if (r.failures.size() >= opts.max_failures) return r;
          }
  if (!r.ok()) {
    r.normalize();
    return r;
  }
  CheckOptions inner = opts;
  CheckReport t = check_category(table, inner);
  r.instances += t.instances;
  auto to_mor = [&](const Arrow& x) { return homs[x.src * n + x.dst][x.k]; };
  for (const Failure& f : t.failures) {
    Instance inst;
    for (const auto& item : f.instance) inst.push_back(to_mor(std::get<Arrow>(item)));
    std::optional<Mor> lhs, rhs;
    if (f.law == "category.associativity") {
      const Mor& x = std::get<Mor>(inst[0]);
      const Mor& y = std::get<Mor>(inst[1]);
      const Mor& z = std::get<Mor>(inst[2]);
      lhs = v.then(v.then(x, y), z);
      rhs = v.then(x, v.then(y, z));
    } else {
      const Mor& x = std::get<Mor>(inst[0]);
      lhs = f.law == "category.left_identity" ? v.then(v.identity(x.src), x) : v.then(x, v.identity(x.dst));
      rhs = x;
    }
    r.fail(f.law, std::move(inst), lhs, rhs);
  }
  r.normalize();
  return r;
}

/// Bifunctoriality of the tensor, invertibility and naturality of the
/// unitors and associator, triangle and pentagon, over the check objects.
///
/// Bifunctoriality is verified as functoriality in each variable separately
/// plus interchange f(x)g = (f(x)id);(id(x)g) = (id(x)g);(f(x)id), which is
/// equivalent to the joint law. Naturality of the coherence maps is verified
/// one variable at a time, which is equivalent given bifunctoriality.
inline CheckReport check_monoidal(const MonoidalBase& v, const CheckOptions& opts = {}) {
  using detail::expect_eq;
  using detail::expect_typed;
  CheckReport r;
  detail::HomCache homs(v, v.check_objects());
  const auto& objs = homs.objects();
  const ObjId I = v.unit();
  auto full = [&] { return r.failures.size() >= opts.max_failures; };
  auto id = [&](ObjId x) { return v.identity(x); };
  const std::vector<Mor> all = homs.all();

  if (opts.sections & CheckOptions::kLight) {
  if (!v.valid_object(I)) r.fail("monoidal.unit", {I}, {}, {}, "unit is not an object");

  // component typing
  for (ObjId x : objs) {
    ObjId Ix = v.tensor(I, x), xI = v.tensor(x, I);
    expect_typed(r, v, "monoidal.lunitor_typing", {x}, [&] { return v.lunitor(x); }, Ix, x);
    expect_typed(r, v, "monoidal.lunitor_inv_typing", {x}, [&] { return v.lunitor_inv(x); }, x, Ix);
    expect_typed(r, v, "monoidal.runitor_typing", {x}, [&] { return v.runitor(x); }, xI, x);
    expect_typed(r, v, "monoidal.runitor_inv_typing", {x}, [&] { return v.runitor_inv(x); }, x, xI);
  }
  for (ObjId x : objs)
    for (ObjId y : objs)
      for (ObjId z : objs) {
        ObjId l = v.tensor(v.tensor(x, y), z), rr = v.tensor(x, v.tensor(y, z));
        expect_typed(r, v, "monoidal.associator_typing", {x, y, z}, [&] { return v.associator(x, y, z); }, l, rr);
        expect_typed(r, v, "monoidal.associator_inv_typing", {x, y, z}, [&] { return v.associator_inv(x, y, z); },
                     rr, l);
      }
  if (full()) return r;

  // invertibility of coherence maps
  for (ObjId x : objs) {
    expect_eq(r, "monoidal.lunitor_iso", {x}, [&] { return v.then(v.lunitor(x), v.lunitor_inv(x)); },
              [&] { return id(v.tensor(I, x)); });
    expect_eq(r, "monoidal.lunitor_iso", {x}, [&] { return v.then(v.lunitor_inv(x), v.lunitor(x)); },
              [&] { return id(x); });
    expect_eq(r, "monoidal.runitor_iso", {x}, [&] { return v.then(v.runitor(x), v.runitor_inv(x)); },
              [&] { return id(v.tensor(x, I)); });
    expect_eq(r, "monoidal.runitor_iso", {x}, [&] { return v.then(v.runitor_inv(x), v.runitor(x)); },
              [&] { return id(x); });
  }
  for (ObjId x : objs)
    for (ObjId y : objs)
      for (ObjId z : objs) {
        expect_eq(
            r, "monoidal.associator_iso", {x, y, z},
            [&] { return v.then(v.associator(x, y, z), v.associator_inv(x, y, z)); },
            [&] { return id(v.tensor(v.tensor(x, y), z)); });
        expect_eq(
            r, "monoidal.associator_iso", {x, y, z},
            [&] { return v.then(v.associator_inv(x, y, z), v.associator(x, y, z)); },
            [&] { return id(v.tensor(x, v.tensor(y, z))); });
      }
  if (full()) return r;

  // triangle and pentagon
  for (ObjId x : objs)
    for (ObjId y : objs)
      expect_eq(
          r, "monoidal.triangle", {x, y},
          [&] { return v.then(v.associator(x, I, y), v.tensor(id(x), v.lunitor(y))); },
          [&] { return v.tensor(v.runitor(x), id(y)); });
  for (ObjId w : objs)
    for (ObjId x : objs)
      for (ObjId y : objs)
        for (ObjId z : objs) {
          expect_eq(
              r, "monoidal.pentagon", {w, x, y, z},
              [&] { return v.then(v.associator(v.tensor(w, x), y, z), v.associator(w, x, v.tensor(y, z))); },
              [&] {
                return v.then(v.then(v.tensor(v.associator(w, x, y), id(z)), v.associator(w, v.tensor(x, y), z)),
                              v.tensor(id(w), v.associator(x, y, z)));
              });
          if (full()) return r;
        }
  if (full()) return r;

  // naturality
  for (const Mor& f : all) {
    expect_eq(
        r, "monoidal.lunitor_natural", {f}, [&] { return v.then(v.tensor(id(I), f), v.lunitor(f.dst)); },
        [&] { return v.then(v.lunitor(f.src), f); });
    expect_eq(
        r, "monoidal.runitor_natural", {f}, [&] { return v.then(v.tensor(f, id(I)), v.runitor(f.dst)); },
        [&] { return v.then(v.runitor(f.src), f); });
    for (ObjId p : objs)
      for (ObjId q : objs) {
        expect_eq(
            r, "monoidal.associator_natural", {f, p, q},
            [&] { return v.then(v.tensor(v.tensor(f, id(p)), id(q)), v.associator(f.dst, p, q)); },
            [&] { return v.then(v.associator(f.src, p, q), v.tensor(f, v.tensor(id(p), id(q)))); });
        expect_eq(
            r, "monoidal.associator_natural", {p, f, q},
            [&] { return v.then(v.tensor(v.tensor(id(p), f), id(q)), v.associator(p, f.dst, q)); },
            [&] { return v.then(v.associator(p, f.src, q), v.tensor(id(p), v.tensor(f, id(q)))); });
        expect_eq(
            r, "monoidal.associator_natural", {p, q, f},
            [&] { return v.then(v.tensor(v.tensor(id(p), id(q)), f), v.associator(p, q, f.dst)); },
            [&] { return v.then(v.associator(p, q, f.src), v.tensor(id(p), v.tensor(id(q), f))); });
      }
    if (full()) return r;
  }

  }
  if (!(opts.sections & CheckOptions::kHeavy)) {
    r.normalize();
    return r;
  }

  // tensor of morphisms: typing, identities, interchange
  for (const Mor& f : all)
    for (const Mor& g : all) {
      if (!expect_typed(r, v, "monoidal.tensor_typing", {f, g}, [&] { return v.tensor(f, g); },
                        v.tensor(f.src, g.src), v.tensor(f.dst, g.dst)))
        continue;
      expect_eq(
          r, "monoidal.interchange", {f, g}, [&] { return v.tensor(f, g); },
          [&] { return v.then(v.tensor(f, id(g.src)), v.tensor(id(f.dst), g)); });
      expect_eq(
          r, "monoidal.interchange", {f, g}, [&] { return v.tensor(f, g); },
          [&] { return v.then(v.tensor(id(f.src), g), v.tensor(f, id(g.dst))); });
      if (full()) return r;
    }
  for (ObjId x : objs)
    for (ObjId y : objs)
      expect_eq(
          r, "monoidal.tensor_identity", {x, y}, [&] { return v.tensor(id(x), id(y)); },
          [&] { return id(v.tensor(x, y)); });
  for (ObjId a : objs)
    for (ObjId b : objs)
      for (ObjId c : objs)
        for (const Mor& f : homs.hom(a, b))
          for (const Mor& g : homs.hom(b, c)) {
            for (ObjId w : objs) {
              expect_eq(
                  r, "monoidal.tensor_functorial_left", {f, g, w}, [&] { return v.tensor(v.then(f, g), id(w)); },
                  [&] { return v.then(v.tensor(f, id(w)), v.tensor(g, id(w))); });
              expect_eq(
                  r, "monoidal.tensor_functorial_right", {w, f, g}, [&] { return v.tensor(id(w), v.then(f, g)); },
                  [&] { return v.then(v.tensor(id(w), f), v.tensor(id(w), g)); });
            }
            if (full()) return r;
          }

  r.normalize();
  return r;
}

/// sigma;sigma = id, naturality of sigma, and the hexagon.
inline CheckReport check_symmetric(const MonoidalBase& v, const CheckOptions& opts = {}) {
  using detail::expect_eq;
  if (!v.has_symmetry()) throw CapabilityError(v.name() + ": no symmetry");
  CheckReport r;
  detail::HomCache homs(v, v.check_objects());
  const auto& objs = homs.objects();
  auto full = [&] { return r.failures.size() >= opts.max_failures; };
  auto id = [&](ObjId x) { return v.identity(x); };
  for (ObjId x : objs)
    for (ObjId y : objs) {
      if (!detail::expect_typed(r, v, "symmetric.typing", {x, y}, [&] { return v.symmetry(x, y); },
                                v.tensor(x, y), v.tensor(y, x)))
        continue;
      expect_eq(r, "symmetric.involution", {x, y}, [&] { return v.then(v.symmetry(x, y), v.symmetry(y, x)); },
                [&] { return id(v.tensor(x, y)); });
    }
  if (full()) return r;
  for (const Mor& f : homs.all()) {
    for (ObjId p : objs) {
      expect_eq(
          r, "symmetric.natural", {f, p}, [&] { return v.then(v.tensor(f, id(p)), v.symmetry(f.dst, p)); },
          [&] { return v.then(v.symmetry(f.src, p), v.tensor(id(p), f)); });
      expect_eq(
          r, "symmetric.natural", {p, f}, [&] { return v.then(v.tensor(id(p), f), v.symmetry(p, f.dst)); },
          [&] { return v.then(v.symmetry(p, f.src), v.tensor(f, id(p))); });
    }
    if (full()) return r;
  }
  for (ObjId x : objs)
    for (ObjId y : objs)
      for (ObjId z : objs) {
        expect_eq(
            r, "symmetric.hexagon", {x, y, z},
            [&] {
              return v.then(v.then(v.associator(x, y, z), v.symmetry(x, v.tensor(y, z))), v.associator(y, z, x));
            },
            [&] {
              return v.then(v.then(v.tensor(v.symmetry(x, y), id(z)), v.associator(y, x, z)),
                            v.tensor(id(y), v.symmetry(x, z)));
            });
        if (full()) return r;
      }
  r.normalize();
  return r;
}

/// lam is a bijection hom(x(x)y, z) = hom(x, [y,z]) with inverse
/// g |-> (g(x)id);eval, natural in x. Instances whose hom-sets exceed the
/// budget are counted in `skipped`.
inline CheckReport check_closed(const MonoidalBase& v, const CheckOptions& opts = {}) {
  using detail::expect_eq;
  if (!v.has_closed()) throw CapabilityError(v.name() + ": not closed");
  CheckReport r;
  const auto objs = v.check_objects();
  auto full = [&] { return r.failures.size() >= opts.max_failures; };
  auto id = [&](ObjId x) { return v.identity(x); };
  // An instance belongs to the light section when its enumeration is small.
  auto wanted = [&](std::uint64_t cost) {
    if (cost > opts.hom_budget) return false;
    return (opts.sections & (cost <= opts.light_budget ? CheckOptions::kLight : CheckOptions::kHeavy)) != 0;
  };
  auto over_budget = [&](std::uint64_t cost) {
    if (cost > opts.hom_budget && (opts.sections & CheckOptions::kHeavy)) ++r.skipped;
  };
  if (opts.sections & CheckOptions::kLight) {
    for (ObjId y : objs)
      for (ObjId z : objs) {
        ObjId h = v.internal_hom(y, z);
        detail::expect_typed(r, v, "closed.eval_typing", {y, z}, [&] { return v.eval(y, z); }, v.tensor(h, y), z);
      }
    if (full()) return r;
  }

  // Instances are visited cheapest first.
  struct Triple {
    std::uint64_t cost;
    ObjId x, y, z;
  };
  std::vector<Triple> triples;
  for (ObjId x : objs)
    for (ObjId y : objs)
      for (ObjId z : objs) {
        ObjId xy = v.tensor(x, y), h = v.internal_hom(y, z);
        triples.push_back({std::max(v.hom_size(xy, z), v.hom_size(x, h)), x, y, z});
      }
  std::stable_sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) { return a.cost < b.cost; });
  for (const Triple& t : triples) {
    const ObjId x = t.x, y = t.y, z = t.z;
    over_budget(t.cost);
    if (!wanted(t.cost)) continue;
    ObjId xy = v.tensor(x, y), h = v.internal_hom(y, z);
    for (const Mor& f : v.hom(xy, z)) {
      if (!detail::expect_typed(r, v, "closed.lam_typing", {x, y, f}, [&] { return v.lam(x, y, f); }, x, h))
        continue;
      expect_eq(
          r, "closed.beta", {x, y, f}, [&] { return v.then(v.tensor(v.lam(x, y, f), id(y)), v.eval(y, z)); },
          [&] { return f; });
      if (full()) return r;
    }
    for (const Mor& g : v.hom(x, h)) {
      expect_eq(
          r, "closed.eta", {x, y, g}, [&] { return v.lam(x, y, v.then(v.tensor(g, id(y)), v.eval(y, z))); },
          [&] { return g; });
      if (full()) return r;
    }
  }

  struct Quad {
    std::uint64_t cost;
    ObjId w, x, y, z;
  };
  std::vector<Quad> quads;
  for (const Triple& t : triples) {
    ObjId xy = v.tensor(t.x, t.y);
    for (ObjId w : objs) {
      std::uint64_t a = v.hom_size(w, t.x), b = v.hom_size(xy, t.z);
      std::uint64_t cost = (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
                               ? std::numeric_limits<std::uint64_t>::max()
                               : a * b;
      quads.push_back({cost, w, t.x, t.y, t.z});
    }
  }
  std::stable_sort(quads.begin(), quads.end(), [](const Quad& a, const Quad& b) { return a.cost < b.cost; });
  for (const Quad& q : quads) {
    over_budget(q.cost);
    if (!wanted(q.cost)) continue;
    ObjId xy = v.tensor(q.x, q.y);
    auto fs = v.hom(xy, q.z);
    for (const Mor& k : v.hom(q.w, q.x))
      for (const Mor& f : fs)
        expect_eq(
            r, "closed.lam_natural", {k, q.y, f}, [&] { return v.lam(q.w, q.y, v.then(v.tensor(k, id(q.y)), f)); },
            [&] { return v.then(k, v.lam(q.x, q.y, f)); });
    if (full()) return r;
  }
  r.normalize();
  return r;
}

/// Universal property of the chosen equalizer of (f, g), tested against every
/// check object as a cone apex.
inline CheckReport check_equalizer(const MonoidalBase& v, const Mor& f, const Mor& g, const CheckOptions& opts = {}) {
  using detail::expect_eq;
  Equalizer e = equalizer(v, f, g);
  CheckReport r;
  Instance inst{f, g};
  if (!detail::expect_typed(r, v, "equalizer.typing", inst, [&] { return e.incl; }, e.obj, f.src)) return r;
  expect_eq(r, "equalizer.equalizes", inst, [&] { return v.then(e.incl, f); }, [&] { return v.then(e.incl, g); });
  for (ObjId q : v.check_objects()) {
    if (v.hom_size(q, f.src) > opts.hom_budget || v.hom_size(q, e.obj) > opts.hom_budget) {
      ++r.skipped;
      continue;
    }
    auto through = v.hom(q, e.obj);
    for (const Mor& h : v.hom(q, f.src)) {
      if (!(v.then(h, f) == v.then(h, g))) continue;
      ++r.instances;
      auto u = e.factorize(h);
      if (!u || !(v.then(*u, e.incl) == h)) {
        r.fail("equalizer.factorization", {f, g, h}, u ? std::optional<Mor>(v.then(*u, e.incl)) : std::nullopt, h);
        continue;
      }
      for (const Mor& u2 : through)
        if (!(u2 == *u) && v.then(u2, e.incl) == h) r.fail("equalizer.uniqueness", {f, g, h}, *u, u2);
    }
  }
  r.normalize();
  return r;
}

/// Universal property of the chosen product, tested against every check
/// object as a cone apex.
inline CheckReport check_product(const MonoidalBase& v, const std::vector<ObjId>& objs_in,
                                 const CheckOptions& opts = {}) {
  Product p = finite_product(v, objs_in);
  CheckReport r;
  Instance base_inst;
  for (ObjId o : objs_in) base_inst.push_back(o);
  if (p.proj.size() != objs_in.size()) {
    r.fail("product.arity", base_inst);
    return r;
  }
  for (std::size_t i = 0; i < objs_in.size(); ++i)
    detail::expect_typed(r, v, "product.projection_typing", base_inst, [&] { return p.proj[i]; }, p.obj, objs_in[i]);
  if (!r.ok()) return r;
  for (ObjId q : v.check_objects()) {
    std::uint64_t space = 1;
    for (ObjId o : objs_in) space = space * std::max<std::uint64_t>(v.hom_size(q, o), 1);
    if (space > opts.hom_budget || v.hom_size(q, p.obj) > opts.hom_budget) {
      ++r.skipped;
      continue;
    }
    std::vector<std::vector<Mor>> legs;
    for (ObjId o : objs_in) legs.push_back(v.hom(q, o));
    auto through = v.hom(q, p.obj);
    std::vector<std::size_t> idx(objs_in.size(), 0);
    bool empty = std::any_of(legs.begin(), legs.end(), [](const auto& l) { return l.empty(); });
    if (empty) continue;
    while (true) {
      std::vector<Mor> cone;
      for (std::size_t i = 0; i < idx.size(); ++i) cone.push_back(legs[i][idx[i]]);
      ++r.instances;
      Instance inst = base_inst;
      inst.push_back(q);
      for (const Mor& m : cone) inst.push_back(m);
      Mor u = p.pair(q, cone);
      bool good = u.src == q && u.dst == p.obj && v.valid(u);
      for (std::size_t i = 0; good && i < cone.size(); ++i) good = v.then(u, p.proj[i]) == cone[i];
      if (!good) {
        r.fail("product.pairing", inst, u);
      } else {
        for (const Mor& u2 : through) {
          if (u2 == u) continue;
          bool same = true;
          for (std::size_t i = 0; same && i < cone.size(); ++i) same = v.then(u2, p.proj[i]) == cone[i];
          if (same) r.fail("product.uniqueness", inst, u, u2);
        }
      }
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == legs[i].size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
  }
  r.normalize();
  return r;
}

/// Full subcategory of the base on `objects`, as an explicit FinCat plus the
/// arrow <-> morphism correspondence (arrow k of hom(i,j) is homs[i][j][k]).
struct MaterializedCat {
  FinCat cat;
  std::vector<ObjId> objects;
  std::vector<std::vector<Mor>> homs;  // row-major over object positions

  const Mor& mor(const Arrow& a) const { return homs[a.src * objects.size() + a.dst].at(a.k); }
  std::optional<Arrow> arrow(const Mor& m) const {
    auto si = std::find(objects.begin(), objects.end(), m.src);
    auto di = std::find(objects.begin(), objects.end(), m.dst);
    if (si == objects.end() || di == objects.end()) return std::nullopt;
    ObjId s = static_cast<ObjId>(si - objects.begin()), d = static_cast<ObjId>(di - objects.begin());
    const auto& h = homs[s * objects.size() + d];
    auto it = std::lower_bound(h.begin(), h.end(), m);
    if (it == h.end() || !(*it == m)) return std::nullopt;
    return Arrow{s, d, static_cast<std::uint32_t>(it - h.begin())};
  }
};

inline MaterializedCat materialize(const MonoidalBase& v, const std::vector<ObjId>& objects) {
  MaterializedCat m;
  m.objects = objects;
  const std::size_t n = objects.size();
  m.homs.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m.homs[i * n + j] = v.hom(objects[i], objects[j]);
      std::sort(m.homs[i * n + j].begin(), m.homs[i * n + j].end());
    }
  m.cat = FinCat::build(
      n, [&](ObjId i, ObjId j) { return static_cast<std::uint32_t>(m.homs[i * n + j].size()); },
      [&](ObjId i) { return m.arrow(v.identity(objects[i]))->k; },
      [&](const Arrow& f, const Arrow& g) { return m.arrow(v.then(m.mor(f), m.mor(g))).value().k; });
  return m;
}

}  // namespace ecat
