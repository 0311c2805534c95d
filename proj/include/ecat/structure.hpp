#pragma once

#include <map>
#include <mutex>

#include "builtins.hpp"

namespace ecat {

/// A structure on a finite carrier {0..n-1}, as a flat integer encoding.
using StructCode = std::vector<std::uint8_t>;

/// A cartesian notion of structure on finite sets. Products use the
/// row-major pair numbering of finite sets; the empty product is a
/// one-element carrier.
class CartesianStructure {
 public:
  virtual ~CartesianStructure() = default;
  virtual std::string name() const = 0;
  /// Every structure on a carrier of size n, in a fixed order.
  virtual std::vector<StructCode> structures(std::uint32_t n) const = 0;
  virtual bool preserves(std::uint32_t n, const StructCode& s, std::uint32_t m, const StructCode& t,
                         const Code& f) const = 0;
  virtual StructCode unit_structure() const = 0;
  virtual StructCode product(std::uint32_t n, const StructCode& s, std::uint32_t m, const StructCode& t) const = 0;

  /// Induced structure on a subset, when such subobjects exist.
  virtual bool has_restriction() const { return false; }
  virtual std::optional<StructCode> restrict(std::uint32_t, const StructCode&, const Code&) const {
    return std::nullopt;
  }
  /// Structure on the set of structure maps between (n,s) and (m,t), listed
  /// in `maps`, making it an exponential.
  virtual bool has_exponential() const { return false; }
  virtual StructCode exponential(std::uint32_t, const StructCode&, std::uint32_t, const StructCode&,
                                 const std::vector<Code>&) const {
    throw CapabilityError(name() + ": no exponentials");
  }

  /// The structure on n points making the bijection p an isomorphism from
  /// (n, s). The default searches structures(n).
  virtual StructCode transport(std::uint32_t n, const StructCode& s, const Code& p) const {
    Code inv(n);
    for (std::uint32_t i = 0; i < n; ++i) inv[p[i]] = i;
    for (const StructCode& t : structures(n))
      if (preserves(n, s, n, t, p) && preserves(n, t, n, s, inv)) return t;
    throw StructuralError(name() + ": no transported structure");
  }
};

using StructurePtr = std::shared_ptr<const CartesianStructure>;

/// Every set carries exactly one structure and every function preserves it.
class TrivialStructure : public CartesianStructure {
 public:
  std::string name() const override { return "trivial"; }
  std::vector<StructCode> structures(std::uint32_t) const override { return {StructCode{}}; }
  bool preserves(std::uint32_t, const StructCode&, std::uint32_t, const StructCode&, const Code&) const override {
    return true;
  }
  StructCode unit_structure() const override { return {}; }
  StructCode product(std::uint32_t, const StructCode&, std::uint32_t, const StructCode&) const override { return {}; }
  bool has_restriction() const override { return true; }
  std::optional<StructCode> restrict(std::uint32_t, const StructCode&, const Code&) const override {
    return StructCode{};
  }
  bool has_exponential() const override { return true; }
  StructCode exponential(std::uint32_t, const StructCode&, std::uint32_t, const StructCode&,
                         const std::vector<Code>&) const override {
    return {};
  }
};

/// Partial orders, encoded as the n*n reflexive antisymmetric transitive
/// relation; structure maps are the monotone functions. With `pointed`, a
/// least element is required (maps need not preserve it).
class PosetStructure : public CartesianStructure {
 public:
  explicit PosetStructure(bool pointed) : pointed_(pointed) {}

  std::string name() const override { return pointed_ ? "finpointedposet" : "finposet"; }

  std::vector<StructCode> structures(std::uint32_t n) const override {
    std::vector<StructCode> out;
    const std::size_t pairs = std::size_t{n} * n;
    if (pairs > 16) throw CapExceeded("poset enumeration on " + std::to_string(n) + " points", pairs);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs); ++bits) {
      StructCode s(pairs);
      for (std::size_t i = 0; i < pairs; ++i) s[i] = (bits >> i) & 1;
      if (is_order(n, s) && (!pointed_ || least(n, s))) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool preserves(std::uint32_t n, const StructCode& s, std::uint32_t m, const StructCode& t,
                 const Code& f) const override {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (s[i * n + j] && !t[f[i] * m + f[j]]) return false;
    return true;
  }

  StructCode unit_structure() const override { return {1}; }

  StructCode transport(std::uint32_t n, const StructCode& s, const Code& p) const override {
    StructCode r(s.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[p[i] * n + p[j]] = s[i * n + j];
    return r;
  }

  StructCode product(std::uint32_t n, const StructCode& s, std::uint32_t m, const StructCode& t) const override {
    const std::size_t N = std::size_t{n} * m;
    StructCode p(N * N);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b)
        p[a * N + b] = s[(a / m) * n + b / m] && t[(a % m) * m + b % m];
    return p;
  }

  bool has_restriction() const override { return !pointed_; }
  std::optional<StructCode> restrict(std::uint32_t n, const StructCode& s, const Code& subset) const override {
    const std::size_t k = subset.size();
    StructCode r(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) r[i * k + j] = s[subset[i] * n + subset[j]];
    if (pointed_ && !least(static_cast<std::uint32_t>(k), r)) return std::nullopt;
    return r;
  }

  bool has_exponential() const override { return true; }
  StructCode exponential(std::uint32_t n, const StructCode&, std::uint32_t m, const StructCode& t,
                         const std::vector<Code>& maps) const override {
    const std::size_t k = maps.size();
    StructCode e(k * k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        bool le = true;
        for (std::size_t i = 0; le && i < n; ++i) le = t[maps[a][i] * m + maps[b][i]];
        e[a * k + b] = le;
      }
    return e;
  }

  static bool is_order(std::uint32_t n, const StructCode& s) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!s[i * n + i]) return false;
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && s[i * n + j] && s[j * n + i]) return false;
        for (std::size_t k = 0; k < n; ++k)
          if (s[i * n + j] && s[j * n + k] && !s[i * n + k]) return false;
      }
    }
    return true;
  }

  static bool least(std::uint32_t n, const StructCode& s) {
    for (std::size_t b = 0; b < n; ++b) {
      bool ok = true;
      for (std::size_t j = 0; ok && j < n; ++j) ok = s[b * n + j];
      if (ok) return true;
    }
    return false;
  }

 private:
  bool pointed_;
};

inline StructurePtr trivial_structure() { return std::make_shared<TrivialStructure>(); }
inline StructurePtr poset_structure() { return std::make_shared<PosetStructure>(false); }
inline StructurePtr pointed_poset_structure() { return std::make_shared<PosetStructure>(true); }

/// The axioms of a cartesian notion of structure, decided on carriers of
/// size at most `cap`. Each failure names the violated clause.
inline CheckReport check_structure_axioms(const CartesianStructure& S, std::uint32_t cap) {
  CheckReport r;
  FinSetBase sets(0);
  std::vector<std::vector<StructCode>> st(cap + 1);
  for (std::uint32_t n = 0; n <= cap; ++n) st[n] = S.structures(n);
  auto functions = [&](std::uint32_t n, std::uint32_t m) { return sets.hom(n, m); };
  auto fail = [&](const char* clause, std::initializer_list<InstanceItem> inst, std::string detail = {}) {
    r.fail(std::string("structure.") + clause, Instance(inst), {}, {}, std::move(detail));
  };
  StructCode pu = S.unit_structure();
  if (cap >= 1 && std::find(st[1].begin(), st[1].end(), pu) == st[1].end())
    fail("unit", {ObjId{1}}, "unit structure is not a structure on one point");
  for (std::uint32_t n = 0; n <= cap; ++n)
    for (std::size_t a = 0; a < st[n].size(); ++a) {
      const auto& s = st[n][a];
      ++r.instances;
      if (!S.preserves(n, s, n, s, sets.identity(n).code)) fail("identity", {n, ObjId(a)});
      ++r.instances;
      if (!S.preserves(n, s, 1, pu, Code(n, 0))) fail("terminal_map", {n, ObjId(a)});
      for (std::size_t b = 0; b < st[n].size(); ++b) {
        if (a == b) continue;
        ++r.instances;
        const auto& t = st[n][b];
        if (S.preserves(n, s, n, t, sets.identity(n).code) && S.preserves(n, t, n, s, sets.identity(n).code))
          fail("antisymmetry", {n, ObjId(a), ObjId(b)});
      }
    }
  for (std::uint32_t n = 0; n <= cap; ++n)
    for (std::uint32_t m = 0; m <= cap; ++m)
      for (std::size_t a = 0; a < st[n].size(); ++a)
        for (std::size_t b = 0; b < st[m].size(); ++b) {
          const auto& s = st[n][a];
          const auto& t = st[m][b];
          StructCode p = S.product(n, s, m, t);
          Product pr = sets.product({n, m});
          ++r.instances;
          if (!S.preserves(n * m, p, n, s, pr.proj[0].code)) fail("projection_1", {n, ObjId(a), m, ObjId(b)});
          ++r.instances;
          if (!S.preserves(n * m, p, m, t, pr.proj[1].code)) fail("projection_2", {n, ObjId(a), m, ObjId(b)});
          // pairing and composition, with a third carrier
          for (std::uint32_t l = 0; l <= cap; ++l)
            for (std::size_t c = 0; c < st[l].size(); ++c) {
              const auto& u = st[l][c];
              auto fs = functions(l, n);
              auto gs = functions(l, m);
              for (const Mor& f : fs) {
                if (!S.preserves(l, u, n, s, f.code)) continue;
                for (const Mor& g : gs) {
                  if (!S.preserves(l, u, m, t, g.code)) continue;
                  ++r.instances;
                  if (!S.preserves(l, u, n * m, p, pr.pair(l, {f, g}).code))
                    fail("pairing", {l, ObjId(c), f, g});
                }
              }
              for (const Mor& f : functions(n, m)) {
                if (!S.preserves(n, s, m, t, f.code)) continue;
                for (const Mor& g : functions(m, l)) {
                  if (!S.preserves(m, t, l, u, g.code)) continue;
                  ++r.instances;
                  if (!S.preserves(n, s, l, u, sets.then(f, g).code)) fail("composition", {f, g});
                }
              }
            }
        }
  r.normalize();
  return r;
}

/// The cartesian monoidal category of structured finite sets. Objects are
/// interned (carrier size, structure) pairs. Objects 0..K-1 are the
/// canonical representatives, under renaming of the carrier, of every
/// structure on at most `cap` points; these form the check window.
/// Products and exponentials are interned on demand with their exact
/// structure, so unitors and associators are identities as for finite sets.
class StructBase : public MonoidalBase {
 public:
  StructBase(StructurePtr s, std::uint32_t cap, std::string builtin = {})
      : s_(std::move(s)), cap_(cap), builtin_(std::move(builtin)) {
    auto report = check_structure_axioms(*s_, cap_);
    if (!report.ok())
      throw Refusal(s_->name() + ": structure axiom '" + report.failures.front().law + "' fails at " +
                    to_string(report.failures.front().instance));
    FinSetBase sets(0);
    for (std::uint32_t n = 0; n <= cap_; ++n) {
      std::vector<StructCode> reps;
      auto perms = sets.hom(n, n);
      for (const StructCode& s : s_->structures(n)) {
        StructCode best = s;
        for (const Mor& p : perms) {
          if (!sets.inverse(p)) continue;
          best = std::min(best, s_->transport(n, s, p.code));
        }
        if (std::find(reps.begin(), reps.end(), best) == reps.end()) reps.push_back(best);
      }
      std::sort(reps.begin(), reps.end());
      for (const auto& s : reps) intern(n, s);
    }
    window_ = static_cast<ObjId>(objects_.size());
    unit_ = intern(1, s_->unit_structure());
  }

  const CartesianStructure& structure() const { return *s_; }
  std::uint32_t cap() const { return cap_; }

  std::uint32_t carrier(ObjId x) const { return entry(x).first; }
  StructCode structure_of(ObjId x) const { return entry(x).second; }
  ObjId intern(std::uint32_t n, const StructCode& s) const {
    std::lock_guard lock(mu_);
    auto key = std::pair{n, s};
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    ObjId id = static_cast<ObjId>(objects_.size());
    objects_.push_back(key);
    index_.emplace(key, id);
    return id;
  }
  std::optional<ObjId> find(std::uint32_t n, const StructCode& s) const {
    std::lock_guard lock(mu_);
    auto it = index_.find(std::pair{n, s});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string name() const override { return s_->name() + "_struct(" + std::to_string(cap_) + ")"; }
  std::string builtin_spec() const override { return builtin_; }
  std::vector<ObjId> check_objects() const override {
    std::vector<ObjId> v(window_);
    std::iota(v.begin(), v.end(), 0);
    return v;
  }
  bool valid_object(ObjId x) const override {
    std::lock_guard lock(mu_);
    return x < objects_.size();
  }
  std::uint64_t hom_size(ObjId a, ObjId b) const override {
    std::uint64_t raw = detail::sat_pow(carrier(b), carrier(a));
    if (raw > FinSetBase::kMaxHom) return raw;
    return hom(a, b).size();
  }
  std::vector<Mor> hom(ObjId a, ObjId b) const override {
    {
      std::lock_guard lock(mu_);
      auto it = hom_cache_.find({a, b});
      if (it != hom_cache_.end()) return it->second;
    }
    auto [n, s] = entry(a);
    auto [m, t] = entry(b);
    std::vector<Mor> out;
    for (Mor f : sets_.hom(n, m))
      if (s_->preserves(n, s, m, t, f.code)) out.push_back(Mor{a, b, std::move(f.code)});
    std::lock_guard lock(mu_);
    return hom_cache_.emplace(std::pair{a, b}, std::move(out)).first->second;
  }
  bool valid(const Mor& f) const override {
    if (!valid_object(f.src) || !valid_object(f.dst)) return false;
    auto [n, s] = entry(f.src);
    auto [m, t] = entry(f.dst);
    if (f.code.size() != n) return false;
    for (auto v : f.code)
      if (v >= m) return false;
    return s_->preserves(n, s, m, t, f.code);
  }

  Mor identity(ObjId x) const override { return retag(sets_.identity(carrier(x)), x, x); }
  Mor then(const Mor& f, const Mor& g) const override {
    if (f.dst != g.src) throw StructuralError(name() + ": " + to_string(f) + " and " + to_string(g) + " not composable");
    require(f);
    require(g);
    return retag(sets_.then(plain(f), plain(g)), f.src, g.dst);
  }

  ObjId unit() const override { return unit_; }
  ObjId tensor(ObjId x, ObjId y) const override {
    auto [n, s] = entry(x);
    auto [m, t] = entry(y);
    return intern(n * m, s_->product(n, s, m, t));
  }
  Mor tensor(const Mor& f, const Mor& g) const override {
    require(f);
    require(g);
    return retag(sets_.tensor(plain(f), plain(g)), tensor(f.src, g.src), tensor(f.dst, g.dst));
  }
  Mor lunitor(ObjId x) const override { return identity(x); }
  Mor lunitor_inv(ObjId x) const override { return identity(x); }
  Mor runitor(ObjId x) const override { return identity(x); }
  Mor runitor_inv(ObjId x) const override { return identity(x); }
  Mor associator(ObjId x, ObjId y, ObjId z) const override { return identity(tensor(tensor(x, y), z)); }
  Mor associator_inv(ObjId x, ObjId y, ObjId z) const override { return identity(tensor(x, tensor(y, z))); }

  bool has_symmetry() const override { return true; }
  Mor symmetry(ObjId x, ObjId y) const override {
    return retag(sets_.symmetry(carrier(x), carrier(y)), tensor(x, y), tensor(y, x));
  }

  bool has_closed() const override { return s_->has_exponential(); }
  ObjId internal_hom(ObjId y, ObjId z) const override {
    if (!has_closed()) return MonoidalBase::internal_hom(y, z);
    auto maps = hom(y, z);
    std::vector<Code> codes;
    for (const Mor& f : maps) codes.push_back(f.code);
    auto [n, s] = entry(y);
    auto [m, t] = entry(z);
    return intern(static_cast<std::uint32_t>(maps.size()), s_->exponential(n, s, m, t, codes));
  }
  Mor eval(ObjId y, ObjId z) const override {
    ObjId h = internal_hom(y, z);
    auto maps = hom(y, z);
    const std::uint32_t ny = carrier(y);
    Mor e{tensor(h, y), z, Code(maps.size() * ny)};
    for (std::size_t k = 0; k < maps.size(); ++k)
      for (std::size_t i = 0; i < ny; ++i) e.code[k * ny + i] = maps[k].code[i];
    return e;
  }
  Mor lam(ObjId x, ObjId y, const Mor& f) const override {
    if (!has_closed()) return MonoidalBase::lam(x, y, f);
    require(f);
    if (f.src != tensor(x, y)) throw StructuralError(name() + " lam: " + to_string(f) + " does not start at x(x)y");
    const ObjId z = f.dst;
    ObjId h = internal_hom(y, z);
    auto maps = hom(y, z);
    const std::uint32_t nx = carrier(x), ny = carrier(y);
    Mor g{x, h, Code(nx)};
    for (std::size_t a = 0; a < nx; ++a) {
      Mor row{y, z, Code(ny)};
      for (std::size_t i = 0; i < ny; ++i) row.code[i] = f.code[a * ny + i];
      auto it = std::lower_bound(maps.begin(), maps.end(), row);
      if (it == maps.end() || !(*it == row)) throw StructuralError(name() + " lam: a row is not a structure map");
      g.code[a] = static_cast<std::uint32_t>(it - maps.begin());
    }
    return g;
  }

  bool has_equalizers() const override { return s_->has_restriction(); }
  Equalizer equalizer(const Mor& f, const Mor& g) const override {
    if (!has_equalizers()) return MonoidalBase::equalizer(f, g);
    require_parallel(f, g);
    Equalizer e = sets_.equalizer(plain(f), plain(g));
    auto [n, s] = entry(f.src);
    auto sub = s_->restrict(n, s, e.incl.code);
    if (!sub) throw CapabilityError(name() + ": equalizer subset carries no structure");
    ObjId eo = intern(e.obj, *sub);
    Mor incl = retag(e.incl, eo, f.src);
    return Equalizer{eo, incl, [f, g, incl](const Mor& h) -> std::optional<Mor> {
                       if (h.dst != f.src) return std::nullopt;
                       Mor u{h.src, incl.src, Code(h.code.size())};
                       for (std::size_t t = 0; t < h.code.size(); ++t) {
                         std::uint32_t v = h.code[t];
                         if (v >= f.code.size() || f.code[v] != g.code[v]) return std::nullopt;
                         auto it = std::lower_bound(incl.code.begin(), incl.code.end(), v);
                         u.code[t] = static_cast<std::uint32_t>(it - incl.code.begin());
                       }
                       return u;
                     }};
  }

  bool has_products() const override { return true; }
  Product product(const std::vector<ObjId>& objs) const override {
    std::vector<ObjId> carriers;
    for (ObjId o : objs) carriers.push_back(carrier(o));
    Product p = sets_.product(carriers);
    // Row-major numbering of the n-ary product agrees with the left fold
    // ((x0 * x1) * x2) ... of binary products.
    ObjId P = unit_;
    for (std::size_t i = 0; i < objs.size(); ++i) P = i == 0 ? objs[0] : tensor(P, objs[i]);
    std::vector<Mor> proj;
    for (std::size_t i = 0; i < objs.size(); ++i) proj.push_back(retag(p.proj[i], P, objs[i]));
    // The pairing refers back to this base for carrier sizes.
    auto pair = p.pair;
    return Product{P, proj, [this, pair, P](ObjId apex, const std::vector<Mor>& legs) {
                     std::vector<Mor> plain_legs;
                     for (const Mor& l : legs) plain_legs.push_back(plain(l));
                     return retag(pair(carrier(apex), plain_legs), apex, P);
                   }};
  }

  std::optional<Mor> inverse(const Mor& f) const override {
    auto g = sets_.inverse(plain(f));
    if (!g) return std::nullopt;
    Mor gi = retag(*g, f.dst, f.src);
    if (!valid(gi)) return std::nullopt;
    return gi;
  }

  std::optional<std::uint64_t> index_of(const Mor& f) const override {
    if (!valid(f)) return std::nullopt;
    auto h = hom(f.src, f.dst);
    auto it = std::lower_bound(h.begin(), h.end(), f);
    return static_cast<std::uint64_t>(it - h.begin());
  }
  std::optional<Mor> mor_at(ObjId src, ObjId dst, std::uint64_t k) const override {
    if (!valid_object(src) || !valid_object(dst)) return std::nullopt;
    auto h = hom(src, dst);
    if (k >= h.size()) return std::nullopt;
    return h[k];
  }

 private:
  std::pair<std::uint32_t, StructCode> entry(ObjId x) const {
    std::lock_guard lock(mu_);
    if (x >= objects_.size()) throw StructuralError(name() + ": object " + std::to_string(x) + " out of range");
    return objects_[x];
  }
  Mor plain(const Mor& f) const { return Mor{carrier(f.src), carrier(f.dst), f.code}; }
  static Mor retag(Mor f, ObjId src, ObjId dst) {
    f.src = src;
    f.dst = dst;
    return f;
  }
  void require(const Mor& f) const {
    if (!valid(f)) throw StructuralError(name() + ": invalid morphism " + to_string(f));
  }

  StructurePtr s_;
  std::uint32_t cap_;
  std::string builtin_;
  FinSetBase sets_{0};
  ObjId window_ = 0;
  ObjId unit_ = 0;
  mutable std::mutex mu_;
  mutable std::vector<std::pair<std::uint32_t, StructCode>> objects_;
  mutable std::map<std::pair<std::uint32_t, StructCode>, ObjId> index_;
  mutable std::map<std::pair<ObjId, ObjId>, std::vector<Mor>> hom_cache_;
};

inline BasePtr struct_cat(StructurePtr s, std::uint32_t cap) {
  std::string spelling = s->name() + "_struct, " + std::to_string(cap);
  return std::make_shared<StructBase>(std::move(s), cap, std::move(spelling));
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"bool",    "cost",           "terminal",
                                              "finset",  "finposet_struct", "finpointedposet_struct",
                                              "trivial_struct"};
  return names;
}

/// Builtin bases by their DSL spelling; throws StructuralError on an unknown
/// name or a wrong parameter count.
inline BasePtr builtin_base(const std::string& name, const std::vector<std::uint64_t>& params = {}) {
  auto arity = [&](std::size_t k) {
    if (params.size() != k)
      throw StructuralError("builtin " + name + " takes " + std::to_string(k) + " parameter" + (k == 1 ? "" : "s") +
                            ", got " + std::to_string(params.size()));
  };
  auto small = [&](std::uint64_t limit) {
    if (params[0] > limit) throw StructuralError("builtin " + name + " parameter exceeds " + std::to_string(limit));
    return static_cast<std::uint32_t>(params[0]);
  };
  using Make = std::function<BasePtr()>;
  const std::map<std::string, std::pair<std::size_t, Make>> table{
      {"bool", {0, [] { return bool_base(); }}},
      {"terminal", {0, [] { return terminal_base(); }}},
      {"cost", {1, [&] { return cost_base(small(64)); }}},
      {"finset", {1, [&] { return finset_base(small(16)); }}},
      {"finposet_struct", {1, [&] { return struct_cat(poset_structure(), small(4)); }}},
      {"finpointedposet_struct", {1, [&] { return struct_cat(pointed_poset_structure(), small(4)); }}},
      {"trivial_struct", {1, [&] { return struct_cat(trivial_structure(), small(4)); }}},
  };
  if (auto it = table.find(name); it != table.end()) {
    arity(it->second.first);
    return it->second.second();
  }
  throw StructuralError("unknown builtin base '" + name + "'");
}

}  // namespace ecat
