#pragma once

// Corpus generators and independent oracles shared by the unit suites and
// the acceptance binary. Oracles here work from first principles (relations,
// function tables) and never call the checkers they are compared against.

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ecat/ecat.hpp"

namespace ecat::testing {

inline std::string fixture_path(const std::string& name) { return std::string(ECAT_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline dsl::Document load_fixture(const std::string& name) {
  return dsl::parse_or_throw(read_file(fixture_path(name)), name);
}

// ---------------------------------------------------------------------------
// random finite categories

/// A random category with at most `max_objects` objects and hom-sets of at
/// most `max_hom` arrows, realized as a subcategory of finite sets: each
/// object carries a set of 1..3 points, a few random functions generate,
/// and the closure under composition is kept when it stays small.
inline FinCat random_category(std::mt19937_64& rng, std::size_t max_objects = 4, std::uint32_t max_hom = 3) {
  using Fn = std::vector<std::uint32_t>;
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  for (;;) {
    const std::size_t n = pick(1, max_objects);
    std::vector<std::uint32_t> carrier(n);
    for (auto& c : carrier) c = static_cast<std::uint32_t>(pick(1, 3));
    std::vector<std::set<Fn>> hom(n * n);
    for (ObjId x = 0; x < n; ++x) {
      Fn id(carrier[x]);
      std::iota(id.begin(), id.end(), 0u);
      hom[x * n + x].insert(id);
    }
    const std::size_t gens = pick(0, n + 2);
    for (std::size_t g = 0; g < gens; ++g) {
      ObjId x = static_cast<ObjId>(pick(0, n - 1)), y = static_cast<ObjId>(pick(0, n - 1));
      Fn f(carrier[x]);
      for (auto& v : f) v = static_cast<std::uint32_t>(pick(0, carrier[y] - 1));
      hom[x * n + y].insert(f);
    }
    bool small = true, grew = true;
    while (small && grew) {
      grew = false;
      for (ObjId x = 0; x < n && small; ++x)
        for (ObjId y = 0; y < n && small; ++y)
          for (ObjId z = 0; z < n && small; ++z) {
            std::vector<Fn> fs(hom[x * n + y].begin(), hom[x * n + y].end());
            std::vector<Fn> gs(hom[y * n + z].begin(), hom[y * n + z].end());
            for (const Fn& f : fs)
              for (const Fn& g : gs) {
                Fn h(f.size());
                for (std::size_t i = 0; i < f.size(); ++i) h[i] = g[f[i]];
                if (hom[x * n + z].insert(h).second) grew = true;
              }
            if (hom[x * n + z].size() > max_hom) small = false;
          }
    }
    if (!small) continue;
    std::vector<std::vector<Fn>> list(n * n);
    for (std::size_t p = 0; p < n * n; ++p) list[p].assign(hom[p].begin(), hom[p].end());
    auto index = [&](ObjId x, ObjId y, const Fn& f) {
      const auto& l = list[x * n + y];
      return static_cast<std::uint32_t>(std::find(l.begin(), l.end(), f) - l.begin());
    };
    return FinCat::build(
        n, [&](ObjId x, ObjId y) { return static_cast<std::uint32_t>(list[x * n + y].size()); },
        [&](ObjId x) {
          Fn id(carrier[x]);
          std::iota(id.begin(), id.end(), 0u);
          return index(x, x, id);
        },
        [&](const Arrow& f, const Arrow& g) {
          const Fn& a = list[f.src * n + f.dst][f.k];
          const Fn& b = list[g.src * n + g.dst][g.k];
          Fn h(a.size());
          for (std::size_t i = 0; i < a.size(); ++i) h[i] = b[a[i]];
          return index(f.src, g.dst, h);
        });
  }
}

// ---------------------------------------------------------------------------
// thin presentations

/// The unique candidate s -> d in a thin base, or an ill-typed placeholder
/// when there is none (so that checkers report a typing failure).
inline Mor thin_mor(const MonoidalBase& v, ObjId s, ObjId d) {
  auto m = v.mor_at(s, d, 0);
  return m ? *m : Mor{s, d, {}};
}

inline KellyEnrichedCat thin_kelly(const BasePtr& v, std::size_t n, const std::function<ObjId(ObjId, ObjId)>& h) {
  KellyEnrichedCat K;
  K.base = v;
  K.n = n;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) K.hom_obj.push_back(h(x, y));
  for (ObjId x = 0; x < n; ++x) K.e_id.push_back(thin_mor(*v, v->unit(), h(x, x)));
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (ObjId z = 0; z < n; ++z) K.e_comp.push_back(thin_mor(*v, v->tensor(h(y, z), h(x, y)), h(x, z)));
  return K;
}

inline EnrichPtr bool_poset(std::size_t n, const std::function<bool(ObjId, ObjId)>& le) {
  return from_kelly(thin_kelly(bool_base(), n, [&](ObjId x, ObjId y) -> ObjId { return x == y || le(x, y); }));
}

inline EnrichPtr chain(std::size_t n) {
  return bool_poset(n, [](ObjId x, ObjId y) { return x <= y; });
}

/// Two minimal points under a common top: 0 < 2 and 1 < 2.
inline EnrichPtr vee() {
  return bool_poset(3, [](ObjId, ObjId y) { return y == 2; });
}

/// Functor between thin enrichments from its object map alone.
inline EnrichedFunctor thin_functor(const EnrichPtr& A, const EnrichPtr& B, std::vector<ObjId> ob) {
  const std::size_t n = A->objects();
  std::vector<Mor> e;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) e.push_back(thin_mor(A->V(), A->hom(x, y), B->hom(ob[x], ob[y])));
  return make_functor(A, B, std::move(ob), std::move(e));
}

// ---------------------------------------------------------------------------
// oracles for thin enrichments

/// Reflexive and transitive, read off the relation directly.
inline bool preorder_oracle(std::size_t n, const std::function<bool(ObjId, ObjId)>& le) {
  for (ObjId x = 0; x < n; ++x)
    if (!le(x, x)) return false;
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y)
      for (ObjId z = 0; z < n; ++z)
        if (le(x, y) && le(y, z) && !le(x, z)) return false;
  return true;
}

/// Lawvere metric space with distances in {0..n, inf}: zero self-distance
/// and the triangle inequality in unbounded integer arithmetic.
inline bool metric_oracle(std::size_t points, std::uint32_t inf, const std::function<std::uint32_t(ObjId, ObjId)>& d) {
  auto dist = [&](ObjId x, ObjId y) -> std::uint64_t { return d(x, y) == inf ? 1u << 30 : d(x, y); };
  for (ObjId x = 0; x < points; ++x)
    if (dist(x, x) != 0) return false;
  for (ObjId x = 0; x < points; ++x)
    for (ObjId y = 0; y < points; ++y)
      for (ObjId z = 0; z < points; ++z)
        if (dist(x, z) > dist(x, y) + dist(y, z)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// monads over the underlying category

/// Textbook Kleisli category of a monad on an ordinary category, from the
/// underlying functor and the unit and multiplication components: hom(x,y)
/// is C(x, Ty) and g after f is f ; T g ; mu.
inline FinCat kleisli_oracle(const FinCat& C, const std::function<ObjId(ObjId)>& Tob,
                             const std::function<Arrow(const Arrow&)>& Tmor, const std::vector<Arrow>& eta,
                             const std::vector<Arrow>& mu) {
  const std::size_t n = C.objects();
  return FinCat::build(
      n, [&](ObjId x, ObjId y) { return C.hom_size(x, Tob(y)); }, [&](ObjId x) { return eta[x].k; },
      [&](const Arrow& f, const Arrow& g) {
        Arrow fc{f.src, Tob(f.dst), f.k}, gc{g.src, Tob(g.dst), g.k};
        return C.then(C.then(fc, Tmor(gc)), mu[g.dst]).k;
      });
}

/// Eilenberg-Moore algebras enumerated directly: (x, a : Tx -> x) with
/// eta_x ; a = id and mu_x ; a = T a ; a.
struct AlgebraOracle {
  std::vector<std::pair<ObjId, Arrow>> algebras;
  /// hom[i*N + j] lists the arrows between carriers commuting with structure.
  std::vector<std::vector<Arrow>> hom;
};

inline AlgebraOracle algebra_oracle(const FinCat& C, const std::function<ObjId(ObjId)>& Tob,
                                    const std::function<Arrow(const Arrow&)>& Tmor, const std::vector<Arrow>& eta,
                                    const std::vector<Arrow>& mu) {
  AlgebraOracle o;
  for (ObjId x = 0; x < C.objects(); ++x)
    for (const Arrow& a : C.arrows(Tob(x), x))
      if (C.then(eta[x], a) == C.identity(x) && C.then(mu[x], a) == C.then(Tmor(a), a)) o.algebras.push_back({x, a});
  const std::size_t N = o.algebras.size();
  o.hom.resize(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      auto [x, a] = o.algebras[i];
      auto [y, b] = o.algebras[j];
      for (const Arrow& f : C.arrows(x, y))
        if (C.then(a, f) == C.then(Tmor(f), b)) o.hom[i * N + j].push_back(f);
    }
  return o;
}

/// The three fixture monads: identity on a 3-chain, the top-point monad on
/// the vee, and the Z/2 monad with unit and multiplication the generator.
inline EnrichedMonad identity_chain_monad() { return identity_monad(chain(3)); }

inline EnrichedMonad top_point_monad() {
  EnrichPtr V = vee();
  return make_monad(thin_functor(V, V, {2, 2, 2}), {Arrow{0, 2, 0}, Arrow{1, 2, 0}, Arrow{2, 2, 0}},
                    {Arrow{2, 2, 0}, Arrow{2, 2, 0}, Arrow{2, 2, 0}});
}

inline FinCat z2_group() {
  return FinCat::build(
      1, [](ObjId, ObjId) { return 2u; }, [](ObjId) { return 0u; },
      [](const Arrow& f, const Arrow& g) { return f.k ^ g.k; });
}

inline EnrichedMonad z2_monad() {
  EnrichPtr S = canonical_set_enrichment(z2_group());
  return make_monad(id_functor(S), {Arrow{0, 0, 1}}, {Arrow{0, 0, 1}});
}

// ---------------------------------------------------------------------------
// shared corpus pieces

inline EnrichPtr codiscrete(std::size_t n) {
  return bool_poset(n, [](ObjId, ObjId) { return true; });
}

/// All preorders on n points, as relation bitmasks.
inline std::vector<std::function<bool(ObjId, ObjId)>> preorders(std::size_t n) {
  std::vector<std::function<bool(ObjId, ObjId)>> out;
  for (unsigned bits = 0; bits < (1u << (n * n)); ++bits) {
    auto le = [bits, n](ObjId x, ObjId y) { return x == y || ((bits >> (x * n + y)) & 1); };
    bool diag_free = true;
    for (ObjId x = 0; x < n; ++x) diag_free = diag_free && !((bits >> (x * n + x)) & 1);
    if (diag_free && preorder_oracle(n, le)) out.push_back(le);
  }
  return out;
}

/// The canonical Set-enrichment of C with the elements of every hom-set
/// renumbered by a random permutation.
inline EnrichPtr shuffled_set_enrichment(const FinCat& C, std::mt19937_64& rng) {
  EnrichPtr E = canonical_set_enrichment(C);
  const std::size_t n = C.objects();
  std::vector<Code> perm(n * n);
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      Code& p = perm[x * n + y];
      p.resize(C.hom_size(x, y));
      std::iota(p.begin(), p.end(), 0u);
      std::shuffle(p.begin(), p.end(), rng);
    }
  auto pi = [&](ObjId x, ObjId y) -> const Code& { return perm[x * n + y]; };
  std::vector<Mor> eid, ecomp;
  std::vector<std::vector<Mor>> fa(n * n);
  for (ObjId x = 0; x < n; ++x) eid.push_back(Mor{1, E->hom(x, x), Code{pi(x, x)[E->eid(x).code[0]]}});
  for (ObjId x = 0; x < n; ++x)
    for (ObjId y = 0; y < n; ++y) {
      for (const Arrow& f : C.arrows(x, y)) fa[x * n + y].push_back(Mor{1, E->hom(x, y), Code{pi(x, y)[f.k]}});
      for (ObjId z = 0; z < n; ++z) {
        const Mor& old = E->ecomp(x, y, z);
        const std::uint32_t a = E->hom(y, z), b = E->hom(x, y);
        Code c(a * b);
        for (std::uint32_t g = 0; g < a; ++g)
          for (std::uint32_t f = 0; f < b; ++f) c[pi(y, z)[g] * b + pi(x, y)[f]] = pi(x, z)[old.code[g * b + f]];
        ecomp.push_back(Mor{old.src, old.dst, std::move(c)});
      }
    }
  return make_enrichment(E->base, C, E->hom_obj, std::move(eid), std::move(ecomp), std::move(fa));
}

/// Cocone into a one-object category: every object to the point, every
/// cell the identity.
inline KleisliCocone point_cocone(const EnrichedMonad& T) {
  EnrichPtr Pt = dynamic_cast<const FinSetBase*>(T.carrier->base.get())
                     ? canonical_set_enrichment(FinCat::discrete(1), T.carrier->base)
                     : bool_poset(1, [](ObjId, ObjId) { return true; });
  auto leg = thin_functor(T.carrier, Pt, std::vector<ObjId>(T.carrier->objects(), 0));
  KleisliCocone q{Pt, leg, EnrichedTransformation{compose_functors(T.endo, leg), leg, {}}};
  for (ObjId x = 0; x < T.carrier->objects(); ++x) q.cell.component.push_back(Pt->under.identity(0));
  return q;
}

inline bool iso_oracle(const FinCat& C, ObjId a, ObjId b) {
  for (const Arrow& f : C.arrows(a, b))
    for (const Arrow& g : C.arrows(b, a))
      if (C.then(f, g) == C.identity(a) && C.then(g, f) == C.identity(b)) return true;
  return false;
}

inline bool ff_oracle(const EnrichedFunctor& F) {
  const FinCat &C = F.dom->under, &D = F.cod->under;
  for (ObjId x = 0; x < C.objects(); ++x)
    for (ObjId y = 0; y < C.objects(); ++y) {
      std::set<std::uint32_t> hit;
      for (const Arrow& f : C.arrows(x, y)) hit.insert(F(f).k);
      if (hit.size() != C.hom_size(x, y) || hit.size() != D.hom_size(F(x), F(y))) return false;
    }
  return true;
}

inline bool eso_oracle(const EnrichedFunctor& F) {
  for (ObjId y = 0; y < F.cod->objects(); ++y) {
    bool found = false;
    for (ObjId x = 0; x < F.dom->objects() && !found; ++x) found = iso_oracle(F.cod->under, F(x), y);
    if (!found) return false;
  }
  return true;
}

/// Random functors between small random Set-enrichments over one base.
inline std::vector<EnrichedFunctor> random_functors(std::mt19937_64& rng, std::size_t want) {
  auto sets = finset_base(3);
  std::vector<EnrichedFunctor> out;
  while (out.size() < want) {
    EnrichPtr A = canonical_set_enrichment(random_category(rng, 3, 3), sets);
    EnrichPtr B = canonical_set_enrichment(random_category(rng, 3, 3), sets);
    std::vector<EnrichedFunctor> fs;
    try {
      fs = enumerate_enriched_functors(A, B, 200);
    } catch (const CapExceeded&) {
      continue;
    }
    if (fs.empty()) continue;
    out.push_back(fs[std::uniform_int_distribution<std::size_t>(0, fs.size() - 1)(rng)]);
  }
  return out;
}

/// Inclusion of one object per isomorphism class.
inline EnrichedFunctor skeleton_inclusion(const EnrichPtr& E) {
  std::vector<ObjId> keep;
  for (ObjId y = 0; y < E->objects(); ++y) {
    bool fresh = true;
    for (ObjId k : keep) fresh = fresh && !iso_oracle(E->under, k, y);
    if (fresh) keep.push_back(y);
  }
  return full_sub_enrichment(E, keep).inclusion;
}

inline std::size_t iso_classes(std::size_t n, const std::function<bool(ObjId, ObjId)>& le) {
  std::size_t c = 0;
  for (ObjId x = 0; x < n; ++x) {
    bool least = true;
    for (ObjId y = 0; y < x; ++y) least = least && !(le(x, y) && le(y, x));
    c += least;
  }
  return c;
}

inline std::size_t antitone_maps(std::size_t n, const std::function<bool(ObjId, ObjId)>& le) {
  std::size_t c = 0;
  for (unsigned f = 0; f < (1u << n); ++f) {
    bool ok = true;
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        if (le(x, y) && ((f >> y) & 1) && !((f >> x) & 1)) ok = false;
    c += ok;
  }
  return c;
}

inline std::vector<EnrichedMonad> monad_fixtures() { return {identity_chain_monad(), top_point_monad(), z2_monad()}; }

inline FinCat oracle_kleisli(const EnrichedMonad& T) {
  const auto& t = T.endo;
  return kleisli_oracle(
      T.carrier->under, [&](ObjId x) { return t(x); }, [&](const Arrow& f) { return t(f); }, T.unit.component,
      T.mult.component);
}

inline AlgebraOracle oracle_algebras(const EnrichedMonad& T) {
  const auto& t = T.endo;
  return algebra_oracle(
      T.carrier->under, [&](ObjId x) { return t(x); }, [&](const Arrow& f) { return t(f); }, T.unit.component,
      T.mult.component);
}

}  // namespace ecat::testing
