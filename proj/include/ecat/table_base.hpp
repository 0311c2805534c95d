#pragma once

#include "monoidal.hpp"

namespace ecat {

/// A monoidal category given entirely by integer tables over an explicit
/// FinCat. Morphism codes are single local indices.
///
/// Tables indexed by a morphism use its global index: arrows are numbered
/// row-major over (src, dst), then by local index.
struct MonoidalTables {
  std::string name = "table";
  FinCat cat;
  ObjId unit = 0;
  std::vector<ObjId> tensor_obj;           // n*n
  std::vector<std::uint32_t> tensor_mor;   // gid(f) * A + gid(g)
  std::vector<std::uint32_t> lunitor, lunitor_inv, runitor, runitor_inv;  // n
  std::vector<std::uint32_t> assoc, assoc_inv;                            // n^3
  std::optional<std::vector<std::uint32_t>> symmetry;                     // n*n

  struct Closed {
    std::vector<ObjId> ihom;           // n*n
    std::vector<std::uint32_t> eval;   // n*n
    std::vector<std::uint32_t> lam;    // (x*n + y) * A + gid(f)
  };
  std::optional<Closed> closed;

  /// Equalizers and finite products are chosen by universal search.
  bool limits = false;
  /// Builtin spelling when the tables come from a builtin constructor.
  std::string builtin;
};

class TableBase : public MonoidalBase {
 public:
  explicit TableBase(MonoidalTables t) : t_(std::move(t)) {
    const std::size_t n = t_.cat.objects();
    gid_offset_.assign(n * n + 1, 0);
    for (std::size_t p = 0; p < n * n; ++p) gid_offset_[p + 1] = gid_offset_[p] + t_.cat.hom_table()[p];
    validate_shapes();
  }

  /// Thin base: at most one morphism per hom, given by `le`. All morphism
  /// tables are forced; only the object-level data is supplied.
  static MonoidalTables thin(std::string name, std::size_t n, const std::function<bool(ObjId, ObjId)>& le, ObjId unit,
                             const std::function<ObjId(ObjId, ObjId)>& tensor,
                             const std::function<ObjId(ObjId, ObjId)>& ihom = nullptr, bool limits = true) {
    std::vector<bool> rel(n * n);
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y) rel[x * n + y] = le(x, y);
    MonoidalTables t;
    t.name = std::move(name);
    t.cat = FinCat::preorder(n, rel);
    t.unit = unit;
    t.tensor_obj.resize(n * n);
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y) t.tensor_obj[x * n + y] = tensor(x, y);
    std::size_t arrows = t.cat.arrow_count();
    t.tensor_mor.assign(arrows * arrows, 0);
    t.lunitor.assign(n, 0);
    t.lunitor_inv.assign(n, 0);
    t.runitor.assign(n, 0);
    t.runitor_inv.assign(n, 0);
    t.assoc.assign(n * n * n, 0);
    t.assoc_inv.assign(n * n * n, 0);
    t.symmetry = std::vector<std::uint32_t>(n * n, 0);
    if (ihom) {
      MonoidalTables::Closed c;
      c.ihom.resize(n * n);
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y) c.ihom[x * n + y] = ihom(x, y);
      c.eval.assign(n * n, 0);
      c.lam.assign(n * n * arrows, 0);
      t.closed = std::move(c);
    }
    t.limits = limits;
    return t;
  }

  const MonoidalTables& tables() const { return t_; }
  const FinCat& cat() const { return t_.cat; }

  std::size_t gid(const Mor& f) const { return gid_offset_[f.src * n() + f.dst] + f.code[0]; }
  Mor from_gid(std::size_t g) const {
    auto it = std::upper_bound(gid_offset_.begin(), gid_offset_.end(), g) - 1;
    std::size_t p = it - gid_offset_.begin();
    return table_mor(static_cast<ObjId>(p / n()), static_cast<ObjId>(p % n()), static_cast<std::uint32_t>(g - *it));
  }
  std::size_t arrow_total() const { return gid_offset_.back(); }

  std::string name() const override { return t_.name; }
  std::string builtin_spec() const override { return t_.builtin; }
  std::vector<ObjId> check_objects() const override {
    std::vector<ObjId> v(n());
    std::iota(v.begin(), v.end(), 0);
    return v;
  }
  bool valid_object(ObjId x) const override { return x < n(); }
  std::uint64_t hom_size(ObjId a, ObjId b) const override { return t_.cat.hom_size(a, b); }
  std::vector<Mor> hom(ObjId a, ObjId b) const override {
    std::vector<Mor> out;
    for (std::uint32_t k = 0; k < t_.cat.hom_size(a, b); ++k) out.push_back(table_mor(a, b, k));
    return out;
  }
  bool valid(const Mor& f) const override {
    return f.code.size() == 1 && t_.cat.valid(Arrow{f.src, f.dst, f.code[0]});
  }

  Mor identity(ObjId x) const override { return lift(t_.cat.identity(x)); }
  Mor then(const Mor& f, const Mor& g) const override {
    require(f);
    require(g);
    return lift(t_.cat.then(arrow(f), arrow(g)));
  }

  ObjId unit() const override { return t_.unit; }
  ObjId tensor(ObjId x, ObjId y) const override { return t_.tensor_obj.at(obj(x) * n() + obj(y)); }
  Mor tensor(const Mor& f, const Mor& g) const override {
    require(f);
    require(g);
    return table_mor(tensor(f.src, g.src), tensor(f.dst, g.dst), t_.tensor_mor[gid(f) * arrow_total() + gid(g)]);
  }
  Mor lunitor(ObjId x) const override { return table_mor(tensor(unit(), x), x, t_.lunitor.at(obj(x))); }
  Mor lunitor_inv(ObjId x) const override { return table_mor(x, tensor(unit(), x), t_.lunitor_inv.at(obj(x))); }
  Mor runitor(ObjId x) const override { return table_mor(tensor(x, unit()), x, t_.runitor.at(obj(x))); }
  Mor runitor_inv(ObjId x) const override { return table_mor(x, tensor(x, unit()), t_.runitor_inv.at(obj(x))); }
  Mor associator(ObjId x, ObjId y, ObjId z) const override {
    return table_mor(tensor(tensor(x, y), z), tensor(x, tensor(y, z)), t_.assoc.at(idx3(x, y, z)));
  }
  Mor associator_inv(ObjId x, ObjId y, ObjId z) const override {
    return table_mor(tensor(x, tensor(y, z)), tensor(tensor(x, y), z), t_.assoc_inv.at(idx3(x, y, z)));
  }

  bool has_symmetry() const override { return t_.symmetry.has_value(); }
  Mor symmetry(ObjId x, ObjId y) const override {
    if (!t_.symmetry) return MonoidalBase::symmetry(x, y);
    return table_mor(tensor(x, y), tensor(y, x), (*t_.symmetry).at(obj(x) * n() + obj(y)));
  }

  bool has_closed() const override { return t_.closed.has_value(); }
  ObjId internal_hom(ObjId y, ObjId z) const override {
    if (!t_.closed) return MonoidalBase::internal_hom(y, z);
    return t_.closed->ihom.at(obj(y) * n() + obj(z));
  }
  Mor eval(ObjId y, ObjId z) const override {
    if (!t_.closed) return MonoidalBase::eval(y, z);
    return table_mor(tensor(internal_hom(y, z), y), z, t_.closed->eval.at(obj(y) * n() + obj(z)));
  }
  Mor lam(ObjId x, ObjId y, const Mor& f) const override {
    if (!t_.closed) return MonoidalBase::lam(x, y, f);
    require(f);
    if (f.src != tensor(x, y)) throw StructuralError("lam: " + to_string(f) + " does not start at x(x)y");
    return table_mor(x, internal_hom(y, f.dst), t_.closed->lam.at((obj(x) * n() + obj(y)) * arrow_total() + gid(f)));
  }

  bool has_equalizers() const override { return t_.limits; }
  Equalizer equalizer(const Mor& f, const Mor& g) const override;
  bool has_products() const override { return t_.limits; }
  Product product(const std::vector<ObjId>& objs) const override;

  bool thin() const override {
    const auto& h = t_.cat.hom_table();
    return std::all_of(h.begin(), h.end(), [](std::uint32_t s) { return s <= 1; });
  }

  std::optional<std::uint64_t> index_of(const Mor& f) const override {
    if (!valid(f)) return std::nullopt;
    return f.code[0];
  }
  std::optional<Mor> mor_at(ObjId src, ObjId dst, std::uint64_t k) const override {
    if (!valid_object(src) || !valid_object(dst) || k >= hom_size(src, dst)) return std::nullopt;
    return table_mor(src, dst, static_cast<std::uint32_t>(k));
  }

 private:
  std::size_t n() const { return t_.cat.objects(); }
  ObjId obj(ObjId x) const {
    if (x >= n()) throw StructuralError(t_.name + ": object " + std::to_string(x) + " out of range");
    return x;
  }
  std::size_t idx3(ObjId x, ObjId y, ObjId z) const { return (obj(x) * n() + obj(y)) * n() + obj(z); }
  void require(const Mor& f) const {
    if (!valid(f)) throw StructuralError(t_.name + ": invalid morphism " + to_string(f));
  }
  static Arrow arrow(const Mor& f) { return Arrow{f.src, f.dst, f.code[0]}; }
  static Mor lift(const Arrow& a) { return table_mor(a.src, a.dst, a.k); }

  void validate_shapes() const {
    const std::size_t N = n(), A = arrow_total();
    auto need = [&](const auto& v, std::size_t size, const char* what) {
      if (v.size() != size)
        throw StructuralError(t_.name + ": table '" + what + "' has " + std::to_string(v.size()) +
                              " entries, expected " + std::to_string(size));
    };
    t_.cat.validate();
    if (N > 0 && t_.unit >= N) throw StructuralError(t_.name + ": unit out of range");
    need(t_.tensor_obj, N * N, "tensor");
    need(t_.tensor_mor, A * A, "tensormor");
    need(t_.lunitor, N, "lunitor");
    need(t_.lunitor_inv, N, "lunitorinv");
    need(t_.runitor, N, "runitor");
    need(t_.runitor_inv, N, "runitorinv");
    need(t_.assoc, N * N * N, "assoc");
    need(t_.assoc_inv, N * N * N, "associnv");
    for (ObjId o : t_.tensor_obj)
      if (o >= N) throw StructuralError(t_.name + ": tensor of objects out of range");
    if (t_.symmetry) need(*t_.symmetry, N * N, "symmetry");
    if (t_.closed) {
      need(t_.closed->ihom, N * N, "ihom");
      need(t_.closed->eval, N * N, "eval");
      need(t_.closed->lam, N * N * A, "lam");
      for (ObjId o : t_.closed->ihom)
        if (o >= N) throw StructuralError(t_.name + ": internal hom out of range");
    }
  }

  MonoidalTables t_;
  std::vector<std::size_t> gid_offset_;
};

inline Equalizer TableBase::equalizer(const Mor& f, const Mor& g) const {
  require_parallel(f, g);
  require(f);
  require(g);
  const ObjId a = f.src;
  auto equalizes = [&](const Mor& h) { return then(h, f) == then(h, g); };
  auto unique_through = [&](const Mor& m, const Mor& h) -> std::optional<Mor> {
    std::optional<Mor> found;
    for (const Mor& u : hom(h.src, m.src))
      if (then(u, m) == h) {
        if (found) return std::nullopt;
        found = u;
      }
    return found;
  };
  for (ObjId e = 0; e < n(); ++e)
    for (const Mor& m : hom(e, a)) {
      if (!equalizes(m)) continue;
      bool universal = true;
      for (ObjId q = 0; q < n() && universal; ++q)
        for (const Mor& h : hom(q, a))
          if (equalizes(h) && !unique_through(m, h)) {
            universal = false;
            break;
          }
      if (!universal) continue;
      auto self = std::make_shared<TableBase>(*this);
      return Equalizer{e, m, [self, m, f, g](const Mor& h) -> std::optional<Mor> {
                         if (h.dst != m.dst || !(self->then(h, f) == self->then(h, g))) return std::nullopt;
                         for (const Mor& u : self->hom(h.src, m.src))
                           if (self->then(u, m) == h) return u;
                         return std::nullopt;
                       }};
    }
  throw CapabilityError(t_.name + ": no equalizer of " + to_string(f) + ", " + to_string(g));
}

inline Product TableBase::product(const std::vector<ObjId>& objs) const {
  for (ObjId o : objs) obj(o);
  const std::size_t m = objs.size();
  // Cone legs from q, enumerated as a mixed-radix counter.
  auto cones = [&](ObjId q) {
    std::vector<std::vector<Mor>> legs;
    for (ObjId o : objs) legs.push_back(hom(q, o));
    std::vector<std::vector<Mor>> out;
    if (std::any_of(legs.begin(), legs.end(), [](const auto& l) { return l.empty(); })) return out;
    std::vector<std::size_t> idx(m, 0);
    while (true) {
      std::vector<Mor> c;
      for (std::size_t i = 0; i < m; ++i) c.push_back(legs[i][idx[i]]);
      out.push_back(std::move(c));
      std::size_t i = 0;
      while (i < m && ++idx[i] == legs[i].size()) idx[i++] = 0;
      if (i == m) break;
    }
    return out;
  };
  auto factors = [&](const std::vector<Mor>& proj, const std::vector<Mor>& cone, ObjId P, ObjId q) {
    std::vector<Mor> us;
    for (const Mor& u : hom(q, P)) {
      bool ok = true;
      for (std::size_t i = 0; ok && i < m; ++i) ok = then(u, proj[i]) == cone[i];
      if (ok) us.push_back(u);
    }
    return us;
  };
  for (ObjId P = 0; P < n(); ++P)
    for (const auto& proj : cones(P)) {
      bool universal = true;
      for (ObjId q = 0; q < n() && universal; ++q)
        for (const auto& cone : cones(q))
          if (factors(proj, cone, P, q).size() != 1) {
            universal = false;
            break;
          }
      if (!universal) continue;
      auto self = std::make_shared<TableBase>(*this);
      return Product{P, proj, [self, proj, P, m](ObjId apex, const std::vector<Mor>& cone) {
                       if (cone.size() != m) throw StructuralError("pairing: wrong number of legs");
                       for (const Mor& u : self->hom(apex, P)) {
                         bool ok = true;
                         for (std::size_t i = 0; ok && i < m; ++i) ok = self->then(u, proj[i]) == cone[i];
                         if (ok) return u;
                       }
                       throw StructuralError("pairing: cone does not factor");
                     }};
    }
  throw CapabilityError(t_.name + ": no product of the requested objects");
}

}  // namespace ecat
