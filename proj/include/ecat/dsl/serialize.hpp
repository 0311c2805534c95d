#pragma once

#include <json.hpp>

#include "document.hpp"

namespace ecat::dsl {

namespace detail {

inline std::string tup(std::initializer_list<std::uint64_t> xs) {
  std::string s = "(";
  bool first = true;
  for (auto x : xs) {
    if (!first) s += ",";
    s += std::to_string(x);
    first = false;
  }
  return s + ")";
}

inline std::string text(const Arrow& f) { return tup({f.src, f.dst, f.k}); }

inline std::uint64_t index(const MonoidalBase& v, const Mor& m) {
  auto k = v.index_of(m);
  if (!k) throw StructuralError(v.name() + ": morphism " + to_string(m) + " has no integer index");
  return *k;
}

inline std::string text(const MonoidalBase& v, const Mor& m) { return tup({m.src, m.dst, index(v, m)}); }

/// Entries the parser reconstructs on its own: forced ones in singleton
/// homs and placeholders for empty ones.
inline bool implied(const MonoidalBase& v, const Mor& m) { return !v.valid(m) || v.hom_size(m.src, m.dst) == 1; }

inline bool structured(const MonoidalBase& v) { return dynamic_cast<const StructBase*>(&v) != nullptr; }

/// Kelly data reproducing E exactly, when its underlying category is the
/// canonical one built from points.
inline std::optional<KellyEnrichedCat> kelly_form(const EnrichmentDecl& d) {
  if (d.kelly) return d.kelly;
  const Enrichment& E = *d.enrichment;
  KellyEnrichedCat K = to_kelly(E);
  try {
    EnrichPtr R = from_kelly(K);
    if (R->under == E.under && R->from_arr_table == E.from_arr_table) return K;
  } catch (const Error&) {
  }
  return std::nullopt;
}

class Writer {
 public:
  std::string out;

  void open(const std::string& header) { out += header + " {\n"; }
  void line(const std::string& s) { out += "  " + s + ";\n"; }
  void close() { out += "}\n"; }

  void base(const std::string& name, const MonoidalBase& v) {
    if (auto spec = v.builtin_spec(); !spec.empty()) {
      out += "base " + name + " = builtin(" + spec + ");\n";
      return;
    }
    auto* tb = dynamic_cast<const TableBase*>(&v);
    if (!tb) throw CapabilityError(v.name() + " has no text form");
    const MonoidalTables& t = tb->tables();
    const FinCat& C = t.cat;
    const std::size_t n = C.objects();
    auto ten = [&](ObjId x, ObjId y) { return t.tensor_obj[x * n + y]; };
    auto loc = [&](ObjId s, ObjId d, std::uint32_t k, const std::string& lhs) {
      if (C.hom_size(s, d) != 1) line(lhs + " = " + tup({s, d, k}));
    };
    open("base " + name);
    line("objects " + std::to_string(n));
    line("unit " + std::to_string(t.unit));
    category(C, "hom");
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y) line("tensor " + tup({x, y}) + " = " + std::to_string(ten(x, y)));
    const auto all = C.all_arrows();
    const std::size_t A = all.size();
    for (std::size_t i = 0; i < A; ++i)
      for (std::size_t j = 0; j < A; ++j) {
        const Arrow &f = all[i], &g = all[j];
        loc(ten(f.src, g.src), ten(f.dst, g.dst), t.tensor_mor[i * A + j], "tensormor " + text(f) + text(g));
      }
    for (ObjId x = 0; x < n; ++x) {
      std::string sx = " " + std::to_string(x);
      loc(ten(t.unit, x), x, t.lunitor[x], "lunitor" + sx);
      loc(x, ten(t.unit, x), t.lunitor_inv[x], "lunitorinv" + sx);
      loc(ten(x, t.unit), x, t.runitor[x], "runitor" + sx);
      loc(x, ten(x, t.unit), t.runitor_inv[x], "runitorinv" + sx);
    }
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z) {
          std::size_t i = (x * n + y) * n + z;
          ObjId l = ten(ten(x, y), z), r = ten(x, ten(y, z));
          loc(l, r, t.assoc[i], "assoc " + tup({x, y, z}));
          loc(r, l, t.assoc_inv[i], "associnv " + tup({x, y, z}));
        }
    if (t.symmetry) {
      line("symmetric");
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y) loc(ten(x, y), ten(y, x), (*t.symmetry)[x * n + y], "symmetry " + tup({x, y}));
    }
    if (t.closed) {
      const auto& c = *t.closed;
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y) line("ihom " + tup({x, y}) + " = " + std::to_string(c.ihom[x * n + y]));
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z) loc(ten(c.ihom[y * n + z], y), z, c.eval[y * n + z], "eval " + tup({y, z}));
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y)
          for (std::size_t i = 0; i < A; ++i) {
            const Arrow& f = all[i];
            if (f.src != ten(x, y)) continue;
            loc(x, c.ihom[y * n + f.dst], c.lam[(x * n + y) * A + i], "lam " + tup({x, y}) + text(f));
          }
    }
    if (t.limits) line("limits");
    close();
  }

  void category(const FinCat& C, const char* homkw) {
    const std::size_t n = C.objects();
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        if (C.hom_size(x, y) > 0) line(std::string(homkw) + " " + tup({x, y}) + " = " + std::to_string(C.hom_size(x, y)));
    for (ObjId x = 0; x < n; ++x)
      if (C.hom_size(x, x) != 1) line("id " + std::to_string(x) + " = " + text(C.identity(x)));
    for (const Arrow& f : C.all_arrows())
      for (ObjId z = 0; z < n; ++z)
        for (const Arrow& g : C.arrows(f.dst, z))
          if (C.hom_size(f.src, z) != 1) line("then " + text(f) + text(g) + " = " + text(C.then(f, g)));
  }

  void enrichment(const std::string& name, const EnrichmentDecl& d) {
    const MonoidalBase& v = d.kelly ? *d.kelly->base : d.enrichment->V();
    if (structured(v)) throw CapabilityError("enrichments over " + v.name() + " have no stable text form");
    auto K = kelly_form(d);
    const std::size_t n = K ? K->n : d.enrichment->objects();
    auto hom = [&](ObjId x, ObjId y) { return K ? K->hom(x, y) : d.enrichment->hom(x, y); };
    auto eid = [&](ObjId x) { return K ? K->eid(x) : d.enrichment->eid(x); };
    auto ecomp = [&](ObjId x, ObjId y, ObjId z) { return K ? K->ecomp(x, y, z) : d.enrichment->ecomp(x, y, z); };
    auto mor = [&](const std::string& lhs, const Mor& m) {
      if (!implied(v, m)) line(lhs + " = " + text(v, m));
    };
    open("enrichment " + name + " over " + d.base);
    line("objects " + std::to_string(n));
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y) line("homobj " + tup({x, y}) + " = " + std::to_string(hom(x, y)));
    for (ObjId x = 0; x < n; ++x) mor("eid " + std::to_string(x), eid(x));
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z) mor("ecomp " + tup({x, y, z}), ecomp(x, y, z));
    if (!K) {
      const Enrichment& E = *d.enrichment;
      category(E.under, "arrows");
      for (const Arrow& f : E.under.all_arrows()) mor("fromarr " + text(f), E.from_arr(f));
    }
    close();
  }

  void functor(const std::string& name, const FunctorDecl& d) {
    const EnrichedFunctor& F = d.functor;
    const MonoidalBase& v = F.dom->V();
    open("functor " + name + " : " + d.dom + " -> " + d.cod);
    const std::size_t n = F.dom->objects();
    for (ObjId x = 0; x < n; ++x) line("ob " + std::to_string(x) + " = " + std::to_string(F(x)));
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        if (!implied(v, F.efun(x, y))) line("efun " + tup({x, y}) + " = " + text(v, F.efun(x, y)));
    close();
  }

  void components(const char* kw, const FinCat& C, const std::vector<Arrow>& cs) {
    for (ObjId x = 0; x < cs.size(); ++x)
      if (C.hom_size(cs[x].src, cs[x].dst) != 1) line(std::string(kw) + " " + std::to_string(x) + " = " + text(cs[x]));
  }

  void item(const Item& it) {
    std::visit(
        [&](const auto& d) {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, BaseDecl>) {
            base(it.name, *d.base);
          } else if constexpr (std::is_same_v<D, EnrichmentDecl>) {
            enrichment(it.name, d);
          } else if constexpr (std::is_same_v<D, FunctorDecl>) {
            functor(it.name, d);
          } else if constexpr (std::is_same_v<D, TransformationDecl>) {
            open("transformation " + it.name + " : " + d.src + " => " + d.dst);
            components("component", d.transformation.src.cod->under, d.transformation.component);
            close();
          } else if constexpr (std::is_same_v<D, MonadDecl>) {
            open("monad " + it.name + " on " + d.endo);
            const FinCat& C = d.monad.carrier->under;
            components("unit", C, d.monad.unit.component);
            components("mult", C, d.monad.mult.component);
            close();
          } else {
            open("cocone " + it.name + " for " + d.monad + " via " + d.leg);
            components("cell", d.cocone.apex->under, d.cocone.cell.component);
            close();
          }
        },
        it.decl);
  }
};

}  // namespace detail

/// Canonical text: fixed statement order, sorted tables, two-space
/// indentation, entries the parser can reconstruct left out, and a blank
/// line between declarations.
inline std::string serialize(const Document& doc) {
  detail::Writer w;
  for (std::size_t i = 0; i < doc.items.size(); ++i) {
    if (i) w.out += "\n";
    w.item(doc.items[i]);
  }
  return w.out;
}

// ---------------------------------------------------------------------------
// JSON export

namespace detail {

using nlohmann::json;

inline json mor_json(const MonoidalBase& v, const Mor& m) {
  if (!v.valid(m)) return nullptr;
  return json::array({m.src, m.dst, index(v, m)});
}
inline json arrow_json(const Arrow& f) { return json::array({f.src, f.dst, f.k}); }

inline json category_json(const FinCat& C) {
  const std::size_t n = C.objects();
  json hom = json::array(), ids = json::array(), comp = json::array();
  for (ObjId x = 0; x < n; ++x) {
    json row = json::array();
    for (ObjId y = 0; y < n; ++y) row.push_back(C.hom_size(x, y));
    hom.push_back(row);
    ids.push_back(C.hom_size(x, x) ? json(C.identity(x).k) : json(nullptr));
  }
  for (const Arrow& f : C.all_arrows())
    for (ObjId z = 0; z < n; ++z)
      for (const Arrow& g : C.arrows(f.dst, z)) comp.push_back({arrow_json(f), arrow_json(g), arrow_json(C.then(f, g))});
  return {{"objects", n}, {"hom", hom}, {"identity", ids}, {"compose", comp}};
}

inline json base_json(const MonoidalBase& v) {
  if (auto spec = v.builtin_spec(); !spec.empty()) return {{"builtin", spec}, {"label", v.name()}};
  auto* tb = dynamic_cast<const TableBase*>(&v);
  if (!tb) return {{"label", v.name()}};
  const MonoidalTables& t = tb->tables();
  json j = {{"label", t.name},
            {"category", category_json(t.cat)},
            {"unit", t.unit},
            {"tensor", t.tensor_obj},
            {"tensormor", t.tensor_mor},
            {"lunitor", t.lunitor},
            {"lunitorinv", t.lunitor_inv},
            {"runitor", t.runitor},
            {"runitorinv", t.runitor_inv},
            {"assoc", t.assoc},
            {"associnv", t.assoc_inv},
            {"limits", t.limits}};
  j["symmetry"] = t.symmetry ? json(*t.symmetry) : json(nullptr);
  if (t.closed)
    j["closed"] = {{"ihom", t.closed->ihom}, {"eval", t.closed->eval}, {"lam", t.closed->lam}};
  else
    j["closed"] = nullptr;
  return j;
}

inline json decl_json(const Decl& decl) {
  return std::visit(
      [](const auto& d) -> json {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, BaseDecl>) {
          return base_json(*d.base);
        } else if constexpr (std::is_same_v<D, EnrichmentDecl>) {
          const MonoidalBase& v = d.kelly ? *d.kelly->base : d.enrichment->V();
          const std::size_t n = d.kelly ? d.kelly->n : d.enrichment->objects();
          auto hom = [&](ObjId x, ObjId y) { return d.kelly ? d.kelly->hom(x, y) : d.enrichment->hom(x, y); };
          auto eid = [&](ObjId x) { return d.kelly ? d.kelly->eid(x) : d.enrichment->eid(x); };
          auto ecomp = [&](ObjId x, ObjId y, ObjId z) {
            return d.kelly ? d.kelly->ecomp(x, y, z) : d.enrichment->ecomp(x, y, z);
          };
          json homobj = json::array(), ids = json::array(), comp = json::array();
          for (ObjId x = 0; x < n; ++x) {
            json row = json::array();
            for (ObjId y = 0; y < n; ++y) row.push_back(hom(x, y));
            homobj.push_back(row);
            ids.push_back(mor_json(v, eid(x)));
          }
          for (ObjId x = 0; x < n; ++x)
            for (ObjId y = 0; y < n; ++y)
              for (ObjId z = 0; z < n; ++z) comp.push_back(mor_json(v, ecomp(x, y, z)));
          json j = {{"base", d.base}, {"objects", n}, {"homobj", homobj}, {"eid", ids}, {"ecomp", comp},
                    {"kelly", d.kelly.has_value()}, {"lawful", d.enrichment != nullptr}};
          if (d.enrichment) {
            json fa = json::array();
            for (const Arrow& f : d.enrichment->under.all_arrows())
              fa.push_back({{"arrow", arrow_json(f)}, {"point", mor_json(v, d.enrichment->from_arr(f))}});
            j["underlying"] = category_json(d.enrichment->under);
            j["fromarr"] = fa;
          }
          return j;
        } else if constexpr (std::is_same_v<D, FunctorDecl>) {
          const EnrichedFunctor& F = d.functor;
          json efun = json::array(), arrows = json::array();
          for (const Mor& m : F.e_fun) efun.push_back(mor_json(F.dom->V(), m));
          for (const Arrow& f : F.dom->under.all_arrows()) arrows.push_back({arrow_json(f), arrow_json(F(f))});
          return {{"dom", d.dom}, {"cod", d.cod}, {"ob", F.ob_map}, {"efun", efun}, {"arrows", arrows}};
        } else {
          auto comps = [](const std::vector<Arrow>& cs) {
            json a = json::array();
            for (const Arrow& c : cs) a.push_back(arrow_json(c));
            return a;
          };
          if constexpr (std::is_same_v<D, TransformationDecl>)
            return {{"src", d.src}, {"dst", d.dst}, {"components", comps(d.transformation.component)}};
          else if constexpr (std::is_same_v<D, MonadDecl>)
            return {{"endo", d.endo}, {"unit", comps(d.monad.unit.component)}, {"mult", comps(d.monad.mult.component)}};
          else
            return {{"monad", d.monad}, {"leg", d.leg}, {"cell", comps(d.cocone.cell.component)}};
        }
      },
      decl);
}

}  // namespace detail

inline nlohmann::json to_json(const Document& doc) {
  nlohmann::json items = nlohmann::json::array();
  for (const Item& it : doc.items) {
    nlohmann::json j = detail::decl_json(it.decl);
    j["name"] = it.name;
    j["kind"] = kind_name(it.decl);
    items.push_back(std::move(j));
  }
  return {{"items", items}};
}

}  // namespace ecat::dsl
