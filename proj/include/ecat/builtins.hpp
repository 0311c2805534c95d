#pragma once

#include "table_base.hpp"

namespace ecat {

/// Truth values {0, 1} ordered by 0 <= 1; tensor is conjunction and the
/// internal hom is implication.
inline BasePtr bool_base() {
  auto t = TableBase::thin(
      "bool", 2, [](ObjId a, ObjId b) { return a <= b; }, 1, [](ObjId a, ObjId b) { return a & b; },
      [](ObjId a, ObjId b) -> ObjId { return (!a || b) ? 1 : 0; });
  t.builtin = "bool";
  return std::make_shared<TableBase>(std::move(t));
}

/// Distances {0, ..., n, inf} with inf encoded as n+1. There is a morphism
/// a -> b iff a >= b. Finite sums saturate at n and inf is absorbing, which
/// keeps truncated subtraction an exact right adjoint.
inline BasePtr cost_base(std::uint32_t n) {
  const ObjId inf = n + 1;
  auto add = [n, inf](ObjId a, ObjId b) -> ObjId {
    if (a == inf || b == inf) return inf;
    return std::min<ObjId>(a + b, n);
  };
  auto monus = [inf](ObjId b, ObjId c) -> ObjId {
    if (b == inf) return 0;
    if (c == inf) return inf;
    return c > b ? c - b : 0;
  };
  auto t = TableBase::thin(
      "cost(" + std::to_string(n) + ")", n + 2, [](ObjId a, ObjId b) { return a >= b; }, 0, add, monus);
  t.builtin = "cost, " + std::to_string(n);
  return std::make_shared<TableBase>(std::move(t));
}

inline BasePtr terminal_base() {
  auto t = TableBase::thin(
      "terminal", 1, [](ObjId, ObjId) { return true; }, 0, [](ObjId, ObjId) { return ObjId{0}; },
      [](ObjId, ObjId) { return ObjId{0}; });
  t.builtin = "terminal";
  return std::make_shared<TableBase>(std::move(t));
}

namespace detail {

inline std::uint64_t sat_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
    r *= b;
  }
  return r;
}

}  // namespace detail

/// Finite sets and functions, with cartesian product as tensor. An object is
/// a cardinality; a morphism a -> b stores its table of values. Laws are
/// checked on cardinalities 0..k while tensors and exponentials of those
/// remain available as objects.
///
/// Pairs in a product x*y are numbered row-major, (i, j) |-> i*y + j. A
/// function e in [y, z] = z^y is numbered so that e(i) = (e / z^i) % z.
class FinSetBase : public MonoidalBase {
 public:
  static constexpr ObjId kMaxObject = 1u << 20;
  static constexpr std::uint64_t kMaxHom = std::uint64_t{1} << 26;

  explicit FinSetBase(std::uint32_t k) : k_(k) {}

  std::uint32_t window() const { return k_; }

  std::string name() const override { return "finset(" + std::to_string(k_) + ")"; }
  std::string builtin_spec() const override { return "finset, " + std::to_string(k_); }
  std::vector<ObjId> check_objects() const override {
    std::vector<ObjId> v(k_ + 1);
    std::iota(v.begin(), v.end(), 0);
    return v;
  }
  bool valid_object(ObjId x) const override { return x <= kMaxObject; }
  std::uint64_t hom_size(ObjId a, ObjId b) const override { return detail::sat_pow(b, a); }

  std::vector<Mor> hom(ObjId a, ObjId b) const override {
    std::uint64_t size = hom_size(a, b);
    if (size > kMaxHom) throw CapExceeded("finset: hom(" + std::to_string(a) + "," + std::to_string(b) + ")", size);
    std::vector<Mor> out;
    out.reserve(size);
    if (size == 0) return out;
    Mor f{a, b, Code(a, 0)};
    while (true) {
      out.push_back(f);
      std::size_t i = a;
      while (i > 0 && ++f.code[i - 1] == b) f.code[--i] = 0;
      if (i == 0) break;
    }
    return out;
  }

  bool valid(const Mor& f) const override {
    if (f.src > kMaxObject || f.dst > kMaxObject || f.code.size() != f.src) return false;
    return std::all_of(f.code.begin(), f.code.end(), [&](std::uint32_t v) { return v < f.dst; });
  }

  Mor identity(ObjId x) const override {
    Mor f{x, x, Code(x)};
    std::iota(f.code.begin(), f.code.end(), 0u);
    return f;
  }
  Mor then(const Mor& f, const Mor& g) const override {
    if (f.dst != g.src) throw StructuralError("finset: " + to_string(f) + " and " + to_string(g) + " not composable");
    require(f);
    require(g);
    Mor h{f.src, g.dst, Code(f.src)};
    for (std::size_t i = 0; i < f.src; ++i) h.code[i] = g.code[f.code[i]];
    return h;
  }

  ObjId unit() const override { return 1; }
  ObjId tensor(ObjId x, ObjId y) const override { return checked(std::uint64_t{x} * y); }
  Mor tensor(const Mor& f, const Mor& g) const override {
    require(f);
    require(g);
    Mor h{tensor(f.src, g.src), tensor(f.dst, g.dst), Code(std::size_t{f.src} * g.src)};
    for (std::size_t i = 0; i < f.src; ++i)
      for (std::size_t j = 0; j < g.src; ++j) h.code[i * g.src + j] = f.code[i] * g.dst + g.code[j];
    return h;
  }
  // Row-major numbering makes every unitor and associator an identity.
  Mor lunitor(ObjId x) const override { return identity(x); }
  Mor lunitor_inv(ObjId x) const override { return identity(x); }
  Mor runitor(ObjId x) const override { return identity(x); }
  Mor runitor_inv(ObjId x) const override { return identity(x); }
  Mor associator(ObjId x, ObjId y, ObjId z) const override { return identity(tensor(tensor(x, y), z)); }
  Mor associator_inv(ObjId x, ObjId y, ObjId z) const override { return identity(tensor(tensor(x, y), z)); }

  bool has_symmetry() const override { return true; }
  Mor symmetry(ObjId x, ObjId y) const override {
    Mor s{tensor(x, y), tensor(y, x), Code(std::size_t{x} * y)};
    for (std::size_t i = 0; i < x; ++i)
      for (std::size_t j = 0; j < y; ++j) s.code[i * y + j] = static_cast<std::uint32_t>(j * x + i);
    return s;
  }

  bool has_closed() const override { return true; }
  ObjId internal_hom(ObjId y, ObjId z) const override { return checked(detail::sat_pow(z, y)); }
  Mor eval(ObjId y, ObjId z) const override {
    ObjId h = internal_hom(y, z);
    Mor e{tensor(h, y), z, Code(std::size_t{h} * y)};
    for (std::size_t f = 0; f < h; ++f) {
      std::size_t rest = f;
      for (std::size_t i = 0; i < y; ++i) {
        e.code[f * y + i] = static_cast<std::uint32_t>(rest % z);
        rest /= z;
      }
    }
    return e;
  }
  Mor lam(ObjId x, ObjId y, const Mor& f) const override {
    require(f);
    if (f.src != tensor(x, y)) throw StructuralError("finset lam: " + to_string(f) + " does not start at x*y");
    const ObjId z = f.dst;
    Mor g{x, internal_hom(y, z), Code(x)};
    for (std::size_t a = 0; a < x; ++a) {
      std::uint64_t e = 0, place = 1;
      for (std::size_t i = 0; i < y; ++i) {
        e += f.code[a * y + i] * place;
        place *= z;
      }
      g.code[a] = static_cast<std::uint32_t>(e);
    }
    return g;
  }

  bool has_equalizers() const override { return true; }
  Equalizer equalizer(const Mor& f, const Mor& g) const override {
    require_parallel(f, g);
    require(f);
    require(g);
    Code subset;
    for (std::uint32_t i = 0; i < f.src; ++i)
      if (f.code[i] == g.code[i]) subset.push_back(i);
    const ObjId e = static_cast<ObjId>(subset.size());
    Mor incl{e, f.src, subset};
    return Equalizer{e, incl, [f, g, incl](const Mor& h) -> std::optional<Mor> {
                       if (h.dst != f.src || h.code.size() != h.src) return std::nullopt;
                       Mor u{h.src, incl.src, Code(h.src)};
                       for (std::size_t t = 0; t < h.src; ++t) {
                         auto it = std::lower_bound(incl.code.begin(), incl.code.end(), h.code[t]);
                         if (it == incl.code.end() || *it != h.code[t]) return std::nullopt;
                         u.code[t] = static_cast<std::uint32_t>(it - incl.code.begin());
                       }
                       return u;
                     }};
  }

  bool has_products() const override { return true; }
  Product product(const std::vector<ObjId>& objs) const override {
    std::uint64_t total = 1;
    for (ObjId o : objs) total *= o;
    const ObjId P = checked(total);
    // stride[i] = product of the factors after i
    std::vector<std::uint64_t> stride(objs.size(), 1);
    for (std::size_t i = objs.size(); i-- > 1;) stride[i - 1] = stride[i] * objs[i];
    std::vector<Mor> proj;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      Mor p{P, objs[i], Code(P)};
      for (std::size_t t = 0; t < P; ++t) p.code[t] = static_cast<std::uint32_t>((t / stride[i]) % objs[i]);
      proj.push_back(std::move(p));
    }
    return Product{P, proj, [objs, stride, P](ObjId apex, const std::vector<Mor>& legs) {
                     if (legs.size() != objs.size()) throw StructuralError("finset pairing: wrong number of legs");
                     Mor u{apex, P, Code(apex, 0)};
                     for (std::size_t i = 0; i < legs.size(); ++i) {
                       if (legs[i].src != apex || legs[i].dst != objs[i])
                         throw StructuralError("finset pairing: leg " + to_string(legs[i]) + " has the wrong type");
                       for (std::size_t t = 0; t < apex; ++t)
                         u.code[t] += static_cast<std::uint32_t>(legs[i].code[t] * stride[i]);
                     }
                     return u;
                   }};
  }

  std::optional<Mor> inverse(const Mor& f) const override {
    if (f.src != f.dst || !valid(f)) return std::nullopt;
    Mor g{f.dst, f.src, Code(f.src, 0)};
    std::vector<bool> hit(f.src, false);
    for (std::uint32_t i = 0; i < f.src; ++i) {
      if (hit[f.code[i]]) return std::nullopt;
      hit[f.code[i]] = true;
      g.code[f.code[i]] = i;
    }
    return g;
  }

  /// Mixed-radix index, first value most significant, matching hom() order.
  std::optional<std::uint64_t> index_of(const Mor& f) const override {
    if (!valid(f) || hom_size(f.src, f.dst) == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    std::uint64_t k = 0;
    for (std::uint32_t v : f.code) k = k * f.dst + v;
    return k;
  }
  std::optional<Mor> mor_at(ObjId src, ObjId dst, std::uint64_t k) const override {
    if (!valid_object(src) || !valid_object(dst) || k >= hom_size(src, dst)) return std::nullopt;
    Mor f{src, dst, Code(src, 0)};
    for (std::size_t i = src; i-- > 0;) {
      f.code[i] = static_cast<std::uint32_t>(k % dst);
      k /= dst;
    }
    return f;
  }

 private:
  static ObjId checked(std::uint64_t v) {
    if (v > kMaxObject) throw CapExceeded("finset: object cardinality", v);
    return static_cast<ObjId>(v);
  }
  void require(const Mor& f) const {
    if (!valid(f)) throw StructuralError("finset: invalid morphism " + to_string(f));
  }

  std::uint32_t k_;
};

inline BasePtr finset_base(std::uint32_t k) { return std::make_shared<FinSetBase>(k); }

}  // namespace ecat
