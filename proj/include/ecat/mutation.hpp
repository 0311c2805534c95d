#pragma once

#include <random>

#include "monoidal.hpp"

namespace ecat {

/// A single-entry change to one of the tables defining a monoidal base.
struct Mutation {
  enum class Kind {
    Then,
    Identity,
    Unit,
    TensorObj,
    TensorMor,
    Lunitor,
    LunitorInv,
    Runitor,
    RunitorInv,
    Associator,
    AssociatorInv,
    Symmetry,
    InternalHom,
    Eval,
    Lam
  };
  Kind kind;
  Instance key;
  std::variant<ObjId, Mor> value;
};

inline const char* kind_name(Mutation::Kind k) {
  switch (k) {
    case Mutation::Kind::Then: return "then";
    case Mutation::Kind::Identity: return "id";
    case Mutation::Kind::Unit: return "unit";
    case Mutation::Kind::TensorObj: return "tensor";
    case Mutation::Kind::TensorMor: return "tensormor";
    case Mutation::Kind::Lunitor: return "lunitor";
    case Mutation::Kind::LunitorInv: return "lunitorinv";
    case Mutation::Kind::Runitor: return "runitor";
    case Mutation::Kind::RunitorInv: return "runitorinv";
    case Mutation::Kind::Associator: return "assoc";
    case Mutation::Kind::AssociatorInv: return "associnv";
    case Mutation::Kind::Symmetry: return "symmetry";
    case Mutation::Kind::InternalHom: return "ihom";
    case Mutation::Kind::Eval: return "eval";
    case Mutation::Kind::Lam: return "lam";
  }
  return "?";
}

inline std::string to_string(const Mutation& m) {
  std::string v = std::holds_alternative<ObjId>(m.value) ? std::to_string(std::get<ObjId>(m.value))
                                                          : to_string(std::get<Mor>(m.value));
  return std::string(kind_name(m.kind)) + " " + to_string(m.key) + " := " + v;
}

/// Decorator overriding exactly one table entry of the wrapped base.
class MutatedBase : public MonoidalBase {
 public:
  using K = Mutation::Kind;

  MutatedBase(BasePtr inner, Mutation m) : in_(std::move(inner)), m_(std::move(m)) {}

  const Mutation& mutation() const { return m_; }

  std::string name() const override { return in_->name() + "[" + to_string(m_) + "]"; }
  std::vector<ObjId> check_objects() const override { return in_->check_objects(); }
  bool valid_object(ObjId x) const override { return in_->valid_object(x); }
  std::uint64_t hom_size(ObjId a, ObjId b) const override { return in_->hom_size(a, b); }
  std::vector<Mor> hom(ObjId a, ObjId b) const override { return in_->hom(a, b); }
  bool valid(const Mor& f) const override { return in_->valid(f); }

  Mor identity(ObjId x) const override { return pick(K::Identity, {x}, [&] { return in_->identity(x); }); }
  Mor then(const Mor& f, const Mor& g) const override {
    return pick(K::Then, {f, g}, [&] { return in_->then(f, g); });
  }
  ObjId unit() const override { return pick_obj(K::Unit, {}, [&] { return in_->unit(); }); }
  ObjId tensor(ObjId x, ObjId y) const override {
    return pick_obj(K::TensorObj, {x, y}, [&] { return in_->tensor(x, y); });
  }
  Mor tensor(const Mor& f, const Mor& g) const override {
    return pick(K::TensorMor, {f, g}, [&] { return in_->tensor(f, g); });
  }
  Mor lunitor(ObjId x) const override { return pick(K::Lunitor, {x}, [&] { return in_->lunitor(x); }); }
  Mor lunitor_inv(ObjId x) const override { return pick(K::LunitorInv, {x}, [&] { return in_->lunitor_inv(x); }); }
  Mor runitor(ObjId x) const override { return pick(K::Runitor, {x}, [&] { return in_->runitor(x); }); }
  Mor runitor_inv(ObjId x) const override { return pick(K::RunitorInv, {x}, [&] { return in_->runitor_inv(x); }); }
  Mor associator(ObjId x, ObjId y, ObjId z) const override {
    return pick(K::Associator, {x, y, z}, [&] { return in_->associator(x, y, z); });
  }
  Mor associator_inv(ObjId x, ObjId y, ObjId z) const override {
    return pick(K::AssociatorInv, {x, y, z}, [&] { return in_->associator_inv(x, y, z); });
  }

  bool has_symmetry() const override { return in_->has_symmetry(); }
  Mor symmetry(ObjId x, ObjId y) const override {
    return pick(K::Symmetry, {x, y}, [&] { return in_->symmetry(x, y); });
  }
  bool has_closed() const override { return in_->has_closed(); }
  ObjId internal_hom(ObjId y, ObjId z) const override {
    return pick_obj(K::InternalHom, {y, z}, [&] { return in_->internal_hom(y, z); });
  }
  Mor eval(ObjId y, ObjId z) const override { return pick(K::Eval, {y, z}, [&] { return in_->eval(y, z); }); }
  Mor lam(ObjId x, ObjId y, const Mor& f) const override {
    return pick(K::Lam, {x, y, f}, [&] { return in_->lam(x, y, f); });
  }

  bool has_equalizers() const override { return in_->has_equalizers(); }
  Equalizer equalizer(const Mor& f, const Mor& g) const override { return in_->equalizer(f, g); }
  bool has_products() const override { return in_->has_products(); }
  Product product(const std::vector<ObjId>& objs) const override { return in_->product(objs); }
  bool thin() const override { return in_->thin(); }
  std::optional<std::uint64_t> index_of(const Mor& f) const override { return in_->index_of(f); }
  std::optional<Mor> mor_at(ObjId s, ObjId d, std::uint64_t k) const override { return in_->mor_at(s, d, k); }

 private:
  template <class F>
  Mor pick(K kind, Instance key, F&& orig) const {
    if (m_.kind == kind && m_.key == key) return std::get<Mor>(m_.value);
    return orig();
  }
  template <class F>
  ObjId pick_obj(K kind, Instance key, F&& orig) const {
    if (m_.kind == kind && m_.key == key) return std::get<ObjId>(m_.value);
    return orig();
  }

  BasePtr in_;
  Mutation m_;
};

/// Draws a random single-entry mutation among the check objects of `v`.
/// Morphism-valued entries are replaced by a different morphism of the same
/// type; object-valued entries by a different check object. Returns nullopt
/// if no mutable entry was found after a bounded number of attempts.
inline std::optional<Mutation> random_mutation(const MonoidalBase& v, std::mt19937_64& rng) {
  using K = Mutation::Kind;
  const auto objs = v.check_objects();
  if (objs.empty()) return std::nullopt;
  detail::HomCache homs(v, objs);
  std::vector<Mor> all = homs.all();
  auto obj = [&] { return objs[std::uniform_int_distribution<std::size_t>(0, objs.size() - 1)(rng)]; };
  auto other_obj = [&](ObjId o) -> std::optional<ObjId> {
    if (objs.size() < 2) return std::nullopt;
    ObjId p;
    do p = obj();
    while (p == o);
    return p;
  };
  auto other_mor = [&](const Mor& m) -> std::optional<Mor> {
    if (v.hom_size(m.src, m.dst) < 2 || v.hom_size(m.src, m.dst) > (1u << 16)) return std::nullopt;
    auto h = v.hom(m.src, m.dst);
    Mor p;
    do p = h[std::uniform_int_distribution<std::size_t>(0, h.size() - 1)(rng)];
    while (p == m);
    return p;
  };
  auto any_mor = [&]() -> std::optional<Mor> {
    if (all.empty()) return std::nullopt;
    return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
  };
  std::vector<K> kinds = {K::Then,    K::Identity,   K::Unit,    K::TensorObj,  K::TensorMor,
                          K::Lunitor, K::LunitorInv, K::Runitor, K::RunitorInv, K::Associator,
                          K::AssociatorInv};
  if (v.has_symmetry()) kinds.push_back(K::Symmetry);
  if (v.has_closed()) kinds.insert(kinds.end(), {K::InternalHom, K::Eval, K::Lam});

  for (int attempt = 0; attempt < 1000; ++attempt) {
    K k = kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
    auto mor_entry = [&](Instance key, const Mor& orig) -> std::optional<Mutation> {
      auto alt = other_mor(orig);
      if (!alt) return std::nullopt;
      return Mutation{k, std::move(key), *alt};
    };
    auto obj_entry = [&](Instance key, ObjId orig) -> std::optional<Mutation> {
      auto alt = other_obj(orig);
      if (!alt) return std::nullopt;
      return Mutation{k, std::move(key), *alt};
    };
    std::optional<Mutation> m;
    try {
      switch (k) {
        case K::Then: {
          auto f = any_mor();
          if (!f) break;
          std::vector<Mor> outs;
          for (ObjId c : objs)
            for (const Mor& g : homs.hom(f->dst, c)) outs.push_back(g);
          if (outs.empty()) break;
          Mor g = outs[std::uniform_int_distribution<std::size_t>(0, outs.size() - 1)(rng)];
          m = mor_entry({*f, g}, v.then(*f, g));
          break;
        }
        case K::Identity: {
          ObjId x = obj();
          m = mor_entry({x}, v.identity(x));
          break;
        }
        case K::Unit: m = obj_entry({}, v.unit()); break;
        case K::TensorObj: {
          ObjId x = obj(), y = obj();
          m = obj_entry({x, y}, v.tensor(x, y));
          break;
        }
        case K::TensorMor: {
          auto f = any_mor(), g = any_mor();
          if (f && g) m = mor_entry({*f, *g}, v.tensor(*f, *g));
          break;
        }
        case K::Lunitor: case K::LunitorInv: case K::Runitor: case K::RunitorInv: {
          ObjId x = obj();
          Mor orig = k == K::Lunitor      ? v.lunitor(x)
                     : k == K::LunitorInv ? v.lunitor_inv(x)
                     : k == K::Runitor    ? v.runitor(x)
                                          : v.runitor_inv(x);
          m = mor_entry({x}, orig);
          break;
        }
        case K::Associator: case K::AssociatorInv: {
          ObjId x = obj(), y = obj(), z = obj();
          m = mor_entry({x, y, z}, k == K::Associator ? v.associator(x, y, z) : v.associator_inv(x, y, z));
          break;
        }
        case K::Symmetry: {
          ObjId x = obj(), y = obj();
          m = mor_entry({x, y}, v.symmetry(x, y));
          break;
        }
        case K::InternalHom: {
          ObjId y = obj(), z = obj();
          m = obj_entry({y, z}, v.internal_hom(y, z));
          break;
        }
        case K::Eval: {
          ObjId y = obj(), z = obj();
          m = mor_entry({y, z}, v.eval(y, z));
          break;
        }
        case K::Lam: {
          ObjId x = obj(), y = obj(), z = obj();
          ObjId xy = v.tensor(x, y);
          if (v.hom_size(xy, z) == 0 || v.hom_size(xy, z) > (1u << 16)) break;
          auto h = v.hom(xy, z);
          Mor f = h[std::uniform_int_distribution<std::size_t>(0, h.size() - 1)(rng)];
          m = mor_entry({x, y, f}, v.lam(x, y, f));
          break;
        }
      }
    } catch (const CapExceeded&) {
      m.reset();
    }
    if (m) return m;
  }
  return std::nullopt;
}

/// Every applicable law checker. With `first_failure`, light sections of
/// all checkers run before heavy ones and the scan stops at the first
/// failing stage; the verdict is the same either way.
inline CheckReport check_base(const MonoidalBase& v, const CheckOptions& opts = {}, bool first_failure = false) {
  CheckReport r;
  if (!first_failure) {
    r.merge(check_base_category(v, opts));
    r.merge(check_monoidal(v, opts));
    if (v.has_symmetry()) r.merge(check_symmetric(v, opts));
    if (v.has_closed()) r.merge(check_closed(v, opts));
    r.normalize();
    return r;
  }
  CheckOptions light = opts, heavy = opts;
  light.sections = CheckOptions::kLight;
  heavy.sections = CheckOptions::kHeavy;
  std::vector<std::function<CheckReport()>> stages;
  stages.push_back([&] { return check_monoidal(v, light); });
  if (v.has_symmetry()) stages.push_back([&] { return check_symmetric(v, opts); });
  if (v.has_closed()) stages.push_back([&] { return check_closed(v, light); });
  stages.push_back([&] { return check_base_category(v, opts); });
  stages.push_back([&] { return check_monoidal(v, heavy); });
  if (v.has_closed()) stages.push_back([&] { return check_closed(v, heavy); });
  for (auto& stage : stages) {
    r.merge(stage());
    if (!r.ok()) break;
  }
  r.normalize();
  return r;
}

}  // namespace ecat
