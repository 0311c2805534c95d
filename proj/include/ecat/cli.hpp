#pragma once

// The `ecat` command line front end. Kept out of the umbrella header since
// it pulls in CLI11.

#include <CLI11.hpp>
#include <atomic>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "ecat.hpp"

namespace ecat::cli {

using nlohmann::json;

/// Bad invocation or input that names nothing usable; exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string format = "text";
  unsigned jobs = 1;
  std::size_t cap = 10000;
  std::uint64_t seed = 0;
  std::size_t mutations = 0;
  std::vector<std::string> files;
  std::string construction, variant = "univalent", along;
  std::string base, enrichment, functor, other, monad, cocone, from, to;
  std::vector<ObjId> keep;
};

struct Check {
  std::string name;
  CheckReport report;
};

struct Result {
  std::vector<Check> checks;
  json facts = json::object();
  std::optional<dsl::Document> document;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.report.ok(); });
  }
  void add(std::string name, CheckReport r) { checks.push_back({std::move(name), std::move(r)}); }
};

// ---------------------------------------------------------------------------
// input

struct Source {
  std::vector<std::string> files;
  std::vector<std::uint32_t> first_line;  // line of the joined text where each file starts
  std::string text;
};

inline Source load(const std::vector<std::string>& files) {
  Source s;
  std::uint32_t line = 1;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + f + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string body = ss.str();
    if (!body.empty() && body.back() != '\n') body += '\n';
    s.files.push_back(f);
    s.first_line.push_back(line);
    line += static_cast<std::uint32_t>(std::count(body.begin(), body.end(), '\n'));
    s.text += body;
  }
  return s;
}

inline std::string locate(const Source& s, dsl::Diagnostic d) {
  std::size_t i = 0;
  while (i + 1 < s.files.size() && s.first_line[i + 1] <= d.span.begin.line) ++i;
  d.span.begin.line -= s.first_line[i] - 1;
  return dsl::format(d, s.files[i]);
}

/// All files parsed as one document, so later files may refer to names
/// declared in earlier ones.
struct Loaded {
  Source source;
  dsl::ParseResult parsed;
  std::vector<std::string> diagnostics() const {
    std::vector<std::string> out;
    for (const auto& d : parsed.diagnostics) out.push_back(locate(source, d));
    return out;
  }
};

/// A declaration repeated verbatim in a later file is dropped, so that each
/// file of a multi-file invocation can stay self-contained. Blanking keeps
/// every line and column in place.
inline void drop_repeats(Source& s) {
  std::vector<std::size_t> line_start{0};
  for (std::size_t i = 0; i < s.text.size(); ++i)
    if (s.text[i] == '\n') line_start.push_back(i + 1);
  auto offset = [&](const dsl::Pos& p) { return line_start[p.line - 1] + p.col - 1; };
  auto file_of = [&](const dsl::Pos& p) {
    return std::upper_bound(s.first_line.begin(), s.first_line.end(), p.line) - s.first_line.begin();
  };
  std::vector<dsl::Diagnostic> ignored;
  std::map<std::string, std::pair<std::ptrdiff_t, std::string>> seen;
  for (const auto& it : dsl::parse_syntax(s.text, ignored)) {
    std::size_t a = offset(it.span.begin), b = offset(it.span.end);
    std::string canon;
    for (const auto& t : dsl::lex(std::string_view(s.text).substr(a, b - a), ignored)) canon += t.text + " ";
    auto f = file_of(it.span.begin);
    auto [pos, fresh] = seen.emplace(it.name, std::pair{f, canon});
    if (!fresh && pos->second.first != f && pos->second.second == canon)
      for (std::size_t i = a; i < b; ++i)
        if (s.text[i] != '\n') s.text[i] = ' ';
  }
}

inline Loaded load_document(const std::vector<std::string>& files) {
  Loaded l;
  l.source = load(files);
  if (files.size() > 1) drop_repeats(l.source);
  l.parsed = dsl::parse(l.source.text);
  return l;
}

template <class D>
const dsl::Item& pick(const dsl::Document& doc, const std::string& name, const char* what) {
  if (name.empty()) {
    auto all = doc.all<D>();
    if (all.empty()) throw UsageError(std::string("the input declares no ") + what);
    return *all.back();
  }
  const dsl::Item* it = doc.find(name);
  if (!it || !std::holds_alternative<D>(it->decl)) {
    std::vector<std::string> names;
    for (const auto* c : doc.all<D>()) names.push_back(c->name);
    std::string sug = dsl::closest(name, names);
    throw UsageError("'" + name + "' is not a declared " + what + (sug.empty() ? "" : " (did you mean '" + sug + "'?)"));
  }
  return *it;
}

inline const EnrichPtr& lawful(const dsl::Item& it) {
  const auto& d = std::get<dsl::EnrichmentDecl>(it.decl);
  if (!d.enrichment) throw Refusal("enrichment '" + it.name + "' fails its laws; see `ecat check`");
  return d.enrichment;
}

// ---------------------------------------------------------------------------
// naming constructed items

inline std::string fresh(const dsl::Document& doc, const std::string& stem) {
  if (!doc.find(stem)) return stem;
  for (int i = 2;; ++i)
    if (std::string s = stem + "_" + std::to_string(i); !doc.find(s)) return s;
}

inline std::string base_name(dsl::Document& doc, const BasePtr& b, const std::string& stem = "V") {
  for (const auto* it : doc.all<dsl::BaseDecl>())
    if (std::get<dsl::BaseDecl>(it->decl).base == b) return it->name;
  std::string n = fresh(doc, stem);
  doc.add(n, dsl::BaseDecl{b});
  return n;
}

inline std::string name_of(dsl::Document& doc, const EnrichPtr& E, const std::string& stem) {
  for (const auto* it : doc.all<dsl::EnrichmentDecl>())
    if (std::get<dsl::EnrichmentDecl>(it->decl).enrichment == E) return it->name;
  std::string b = base_name(doc, E->base);
  std::string n = fresh(doc, stem);
  doc.add(n, dsl::EnrichmentDecl{b, std::nullopt, E});
  return n;
}

inline std::string name_of(dsl::Document& doc, const EnrichedFunctor& F, const std::string& stem) {
  for (const auto* it : doc.all<dsl::FunctorDecl>()) {
    const auto& G = std::get<dsl::FunctorDecl>(it->decl).functor;
    if (G.dom == F.dom && G.cod == F.cod && same_functor(G, F)) return it->name;
  }
  std::string a = name_of(doc, F.dom, stem + "_dom"), b = name_of(doc, F.cod, stem + "_cod");
  std::string n = fresh(doc, stem);
  doc.add(n, dsl::FunctorDecl{a, b, F});
  return n;
}

inline std::string name_of(dsl::Document& doc, const EnrichedTransformation& t, const std::string& stem,
                           const std::string& src_stem, const std::string& dst_stem) {
  std::string a = name_of(doc, t.src, src_stem), b = name_of(doc, t.dst, dst_stem);
  std::string n = fresh(doc, stem);
  doc.add(n, dsl::TransformationDecl{a, b, t});
  return n;
}

// ---------------------------------------------------------------------------
// verdict reports

inline CheckReport verdict(const std::string& law, bool ok, std::string detail = {}) {
  CheckReport r;
  r.instances = 1;
  if (!ok) r.fail(law, {}, {}, {}, std::move(detail));
  return r;
}

inline CheckReport ff_report(const EnrichedFunctor& F) {
  CheckReport r;
  auto ff = is_fully_faithful(F);
  r.instances = F.dom->objects() * F.dom->objects();
  for (auto [x, y] : ff.failing) r.fail("factor.fully_faithful", {x, y}, F.efun(x, y));
  return r;
}

inline CheckReport eso_report(const EnrichedFunctor& F) {
  CheckReport r;
  auto eso = is_essentially_surjective(F);
  r.instances = F.cod->objects();
  for (ObjId y : eso.missed) r.fail("factor.essentially_surjective", {y}, {}, {}, "no object maps isomorphically onto it");
  return r;
}

inline CheckReport invertible_report(const EnrichedTransformation& t) {
  return verdict("transformation.invertible", invertible_2cell(t).has_value(), "some component has no inverse");
}

inline CheckReport check_item(const dsl::Document& doc, const dsl::Item& it) {
  return std::visit(
      [&](const auto& d) -> CheckReport {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, dsl::BaseDecl>) {
          return check_base(*d.base);
        } else if constexpr (std::is_same_v<D, dsl::EnrichmentDecl>) {
          return d.enrichment ? check_enrichment(*d.enrichment) : check_kelly(*d.kelly);
        } else if constexpr (std::is_same_v<D, dsl::FunctorDecl>) {
          return check_functor_enrichment(d.functor);
        } else if constexpr (std::is_same_v<D, dsl::TransformationDecl>) {
          return check_nat_trans_enrichment(d.transformation);
        } else if constexpr (std::is_same_v<D, dsl::MonadDecl>) {
          return check_enriched_monad(d.monad);
        } else {
          return check_kleisli_cocone(doc.get<dsl::MonadDecl>(d.monad)->monad, d.cocone);
        }
      },
      it.decl);
}

/// Every random single-entry mutation of the base must be caught.
inline CheckReport mutation_report(const BasePtr& b, std::size_t n, std::uint64_t seed) {
  CheckReport r;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    auto m = random_mutation(*b, rng);
    if (!m) {
      r.fail("mutation.available", {}, {}, {}, "no table entry can be changed");
      break;
    }
    ++r.instances;
    if (check_base(MutatedBase(b, *m), {}, true).ok()) r.fail("mutation.detected", {}, {}, {}, to_string(*m));
  }
  return r;
}

// ---------------------------------------------------------------------------
// commands

inline Result check_document(const dsl::Document& doc, const Options& o, const std::string& label) {
  Result out;
  for (std::size_t i = 0; i < doc.items.size(); ++i) {
    const auto& it = doc.items[i];
    std::string title = label + kind_name(it.decl) + " " + it.name;
    out.add(title, check_item(doc, it));
    if (o.mutations)
      if (const auto* b = std::get_if<dsl::BaseDecl>(&it.decl))
        out.add(title + " mutations", mutation_report(b->base, o.mutations, o.seed + i));
  }
  return out;
}

inline Result construct(dsl::Document doc, const Options& o) {
  Result out;
  const std::string& c = o.construction;
  auto enrichment = [&]() -> std::pair<std::string, EnrichPtr> {
    const auto& it = pick<dsl::EnrichmentDecl>(doc, o.enrichment, "enrichment");
    return {it.name, lawful(it)};
  };
  if (c == "self") {
    const auto& it = pick<dsl::BaseDecl>(doc, o.base, "base");
    std::string bn = it.name;
    EnrichPtr S = self_enrichment(std::get<dsl::BaseDecl>(it.decl).base, o.keep);
    out.add("enrichment", check_enrichment(*S));
    name_of(doc, S, bn + "_self");
  } else if (c == "opposite") {
    auto [n, E] = enrichment();
    EnrichPtr op = opposite_enrichment(E);
    out.add("enrichment", check_enrichment(*op));
    EnrichPtr back = opposite_enrichment(op);
    CheckReport inv;
    try {
      inv = check_functor_enrichment(identity_comparison(E, back));
      inv.merge(check_functor_enrichment(identity_comparison(back, E)));
      inv.merge(verdict("opposite.involutive", back->under == E->under, "underlying categories differ"));
    } catch (const StructuralError& e) {
      inv.fail("opposite.involutive", {}, {}, {}, e.what());
    }
    out.add("involutive", inv);
    name_of(doc, op, n + "_op");
  } else if (c == "full-sub") {
    auto [n, E] = enrichment();
    if (o.keep.empty()) throw UsageError("full-sub needs --keep");
    for (ObjId x : o.keep)
      if (x >= E->objects()) throw UsageError("--keep: object " + std::to_string(x) + " out of range");
    auto s = full_sub_enrichment(E, o.keep);
    out.add("enrichment", check_enrichment(*s.sub));
    out.add("inclusion", check_functor_enrichment(s.inclusion));
    out.add("inclusion fully faithful", ff_report(s.inclusion));
    name_of(doc, s.sub, n + "_sub");
    name_of(doc, s.inclusion, n + "_inclusion");
  } else if (c == "functor-category") {
    const auto& a = pick<dsl::EnrichmentDecl>(doc, o.from, "enrichment");
    const auto& b = pick<dsl::EnrichmentDecl>(doc, o.to, "enrichment");
    auto fc = functor_category_enrichment(lawful(a), lawful(b), o.cap);
    out.add("enrichment", check_enrichment(*fc.enrichment));
    out.facts["functors"] = fc.functors.size();
    // no univalence verdict here; functors with nontrivial automorphisms are flagged
    auto uni = univalence_report(*fc.enrichment);
    out.facts["skeletal"] = uni.skeletal;
    out.facts["gaunt"] = uni.gaunt;
    out.facts["automorphisms"] = uni.automorphism_counts;
    name_of(doc, fc.enrichment, a.name + "_to_" + b.name);
  } else if (c == "dialgebra") {
    const auto& f = pick<dsl::FunctorDecl>(doc, o.functor, "functor");
    const auto& g = pick<dsl::FunctorDecl>(doc, o.other.empty() ? f.name : o.other, "functor");
    auto d = dialgebra_enrichment(std::get<dsl::FunctorDecl>(f.decl).functor, std::get<dsl::FunctorDecl>(g.decl).functor);
    out.add("enrichment", check_enrichment(*d.enrichment));
    out.add("projection", check_functor_enrichment(d.projection));
    out.facts["dialgebras"] = d.objects.size();
    name_of(doc, d.enrichment, f.name + "_" + g.name + "_dialgebras");
    name_of(doc, d.projection, f.name + "_" + g.name + "_projection");
  } else if (c == "change-of-base") {
    auto [n, E] = enrichment();
    if (o.along != "bool-to-cost" && o.along != "collapse") throw UsageError("--along must be bool-to-cost or collapse");
    const bool to_cost = o.along == "bool-to-cost";
    const std::string want = to_cost ? "cost" : "terminal";
    auto kind = [](const BasePtr& b) { return b->builtin_spec().substr(0, b->builtin_spec().find(',')); };
    if (to_cost && kind(E->base) != "bool") throw UsageError("bool-to-cost starts at the bool base, not " + E->V().name());
    BasePtr target;
    if (!o.base.empty()) {
      target = std::get<dsl::BaseDecl>(pick<dsl::BaseDecl>(doc, o.base, "base").decl).base;
      if (kind(target) != want) throw UsageError("--along " + o.along + " needs a " + want + " base, not " + o.base);
    } else {
      for (const auto* it : doc.all<dsl::BaseDecl>())
        if (kind(std::get<dsl::BaseDecl>(it->decl).base) == want) target = std::get<dsl::BaseDecl>(it->decl).base;
      if (!target && to_cost) throw UsageError("bool-to-cost needs a cost base; declare one or pass --base");
      if (!target) target = terminal_base();
    }
    const std::string target_name = base_name(doc, target, "Pt");
    LaxMonoidalFunctor F = to_cost ? bool_to_cost(E->base, target) : collapse_to_terminal(E->base, target);
    out.add("lax monoidal", check_lax(F));
    auto pres = check_preserves_underlying(F, E->hom_obj);
    out.add("preserves underlying", pres.report);
    out.facts["refused"] = !pres.report.ok();
    if (pres.report.ok()) {
      EnrichPtr R = change_of_base(F, E);
      out.add("enrichment", check_enrichment(*R));
      out.add("underlying unchanged", verdict("change_of_base.underlying", R->under == E->under));
      name_of(doc, R, n + "_" + target_name);
    }
  } else if (c == "set-enrichment") {
    auto [n, E] = enrichment();
    BasePtr b = o.base.empty() ? BasePtr{} : std::get<dsl::BaseDecl>(pick<dsl::BaseDecl>(doc, o.base, "base").decl).base;
    EnrichPtr S = canonical_set_enrichment(E->under, b);
    out.add("enrichment", check_enrichment(*S));
    base_name(doc, S->base, "Set");
    name_of(doc, S, n + "_set");
  } else if (c == "kelly") {
    auto [n, E] = enrichment();
    auto k = kelly_round_trip(E);
    out.add("enrichment", check_enrichment(*k.rebuilt));
    out.add("to original", check_functor_enrichment(k.to_original));
    out.add("from original", check_functor_enrichment(k.from_original));
    out.add("round trip",
            verdict("kelly.round_trip", same_functor(compose_functors(k.from_original, k.to_original), id_functor(E)) &&
                                            same_functor(compose_functors(k.to_original, k.from_original),
                                                         id_functor(k.rebuilt))));
    name_of(doc, k.rebuilt, n + "_kelly");
    name_of(doc, k.to_original, n + "_kelly_iso");
  } else {
    throw UsageError("unknown construction '" + c + "'");
  }
  out.document = std::move(doc);
  return out;
}

inline Result factorize(dsl::Document doc, const Options& o) {
  Result out;
  const auto& it = pick<dsl::FunctorDecl>(doc, o.functor, "functor");
  const std::string n = it.name;
  EnrichedFunctor F = std::get<dsl::FunctorDecl>(it.decl).functor;
  auto fr = image_factorization(F);
  out.add("image", check_enrichment(*fr.image));
  out.add("eso part", eso_report(fr.eso_part));
  out.add("ff part", ff_report(fr.ff_part));
  out.add("comparison", check_nat_trans_enrichment(fr.comparison));
  out.add("comparison invertible", invertible_report(fr.comparison));
  out.facts["fully_faithful"] = is_fully_faithful(F).ok;
  out.facts["essentially_surjective"] = is_essentially_surjective(F).ok;
  out.facts["image_objects"] = fr.image_objects;
  name_of(doc, fr.image, n + "_image");
  name_of(doc, fr.eso_part, n + "_eso");
  name_of(doc, fr.ff_part, n + "_ff");
  name_of(doc, fr.comparison, n + "_comparison", n, n + "_factored");
  out.document = std::move(doc);
  return out;
}

inline Result equivalence(dsl::Document doc, const Options& o) {
  Result out;
  const auto& it = pick<dsl::FunctorDecl>(doc, o.functor, "functor");
  const std::string n = it.name;
  EnrichedFunctor F = std::get<dsl::FunctorDecl>(it.decl).functor;
  out.add("fully faithful", ff_report(F));
  out.add("essentially surjective", eso_report(F));
  if (out.ok()) {
    auto ae = weak_equivalence_to_adjoint_equivalence(F);
    out.add("inverse", check_functor_enrichment(ae.bwd));
    out.add("unit", check_nat_trans_enrichment(ae.unit));
    out.add("unit invertible", invertible_report(ae.unit));
    out.add("counit", check_nat_trans_enrichment(ae.counit));
    out.add("counit invertible", invertible_report(ae.counit));
    out.add("triangles", ae.triangles);
    name_of(doc, ae.bwd, n + "_inverse");
    name_of(doc, ae.unit, n + "_unit", n + "_dom_id", n + "_there_back");
    name_of(doc, ae.counit, n + "_counit", n + "_back_there", n + "_cod_id");
  }
  out.document = std::move(doc);
  return out;
}

inline Result rezk(dsl::Document doc, const Options& o) {
  Result out;
  const auto& it = pick<dsl::EnrichmentDecl>(doc, o.enrichment, "enrichment");
  const std::string n = it.name;
  auto rr = rezk_completion(lawful(it));
  auto uni = univalence_report(*rr.completion);
  out.add("completion", check_enrichment(*rr.completion));
  out.add("unit", check_functor_enrichment(rr.unit_functor));
  out.add("unit fully faithful", ff_report(rr.unit_functor));
  out.add("unit essentially surjective", eso_report(rr.unit_functor));
  out.add("skeletal", verdict("rezk.skeletal", uni.skeletal, "distinct isomorphic objects remain"));
  out.facts["objects"] = rr.completion->objects();
  out.facts["skeletal"] = uni.skeletal;
  out.facts["gaunt"] = uni.gaunt;
  out.facts["automorphisms"] = uni.automorphism_counts;
  name_of(doc, rr.completion, n + "_rezk");
  name_of(doc, rr.unit_functor, n + "_rezk_unit");
  out.document = std::move(doc);
  return out;
}

inline Result yoneda_check(const dsl::Document& doc, const Options& o) {
  Result out;
  const auto& it = pick<dsl::EnrichmentDecl>(doc, o.enrichment, "enrichment");
  out.add("yoneda fully faithful", check_yoneda_ff(lawful(it), o.cap));
  return out;
}

inline Result precomp_check(const dsl::Document& doc, const Options& o) {
  Result out;
  const auto& f = pick<dsl::FunctorDecl>(doc, o.functor, "functor");
  const auto& e = pick<dsl::EnrichmentDecl>(doc, o.enrichment, "enrichment");
  auto pr = check_precomp_equivalence(std::get<dsl::FunctorDecl>(f.decl).functor, lawful(e), o.cap);
  out.add("precomposition equivalence", pr.report);
  out.facts["functors_from_cod"] = pr.functors_from_cod;
  out.facts["functors_from_dom"] = pr.functors_from_dom;
  out.facts["classes_from_cod"] = pr.classes_from_cod;
  out.facts["classes_from_dom"] = pr.classes_from_dom;
  return out;
}

inline Result kleisli(dsl::Document doc, const Options& o) {
  Result out;
  const auto& it = pick<dsl::MonadDecl>(doc, o.monad, "monad");
  const std::string n = it.name;
  EnrichedMonad T = std::get<dsl::MonadDecl>(it.decl).monad;
  out.add("monad", check_enriched_monad(T));
  if (!out.ok()) return out;
  EnrichPtr raw = fkleisli(T);
  if (o.variant == "raw") {
    out.add("enrichment", check_enrichment(*raw));
    out.facts["objects"] = raw->objects();
    name_of(doc, raw, n + "_kleisli");
  } else if (o.variant == "univalent") {
    auto U = univalent_kleisli(T);
    auto kappa = kleisli_comparison(T, raw, U);
    out.add("enrichment", check_enrichment(*U.enrichment()));
    out.add("comparison", check_functor_enrichment(kappa));
    out.add("comparison fully faithful", ff_report(kappa));
    out.add("comparison essentially surjective", eso_report(kappa));
    out.add("skeletal", verdict("kleisli.skeletal", U.report.skeletal));
    out.facts["algebras"] = U.em.algebras.size();
    out.facts["objects"] = U.enrichment()->objects();
    name_of(doc, raw, n + "_fkleisli");
    name_of(doc, U.enrichment(), n + "_kleisli");
    name_of(doc, kappa, n + "_comparison");
  } else {
    throw UsageError("--variant must be raw or univalent");
  }
  out.document = std::move(doc);
  return out;
}

inline Result kleisli_ump(dsl::Document doc, const Options& o) {
  Result out;
  const auto& it = pick<dsl::MonadDecl>(doc, o.monad, "monad");
  const std::string n = it.name;
  EnrichedMonad T = std::get<dsl::MonadDecl>(it.decl).monad;
  out.add("monad", check_enriched_monad(T));
  if (!out.ok()) return out;
  KleisliSetting s = kleisli_setting(T);
  KleisliCocone q;
  std::string qn;
  std::vector<const dsl::Item*> mine;
  for (const auto* c : doc.all<dsl::CoconeDecl>())
    if (std::get<dsl::CoconeDecl>(c->decl).monad == n) mine.push_back(c);
  if (o.cocone == "canonical" || (o.cocone.empty() && mine.empty())) {
    q = s.cocone;
    qn = "canonical";
  } else if (o.cocone == "free") {
    q = s.raw_cocone;
    qn = "free";
  } else {
    const auto& c = o.cocone.empty() ? *mine.back() : pick<dsl::CoconeDecl>(doc, o.cocone, "cocone");
    q = std::get<dsl::CoconeDecl>(c.decl).cocone;
    qn = c.name;
  }
  out.facts["cocone"] = qn;
  out.add("cocone", check_kleisli_cocone(T, q));
  if (!out.ok()) return out;
  auto ext = kleisli_universal_extend(T, s, q, true, o.cap);
  out.add("extension", ext.report);
  out.facts["mediators"] = ext.mediators;
  out.facts["scanned"] = ext.scanned;
  name_of(doc, s.univalent.enrichment(), n + "_kleisli");
  name_of(doc, ext.source.leg, n + "_leg");
  name_of(doc, q.leg, qn + "_leg");
  name_of(doc, ext.H, qn + "_mediator");
  name_of(doc, ext.theta, qn + "_theta", qn + "_through_mediator", qn + "_leg");
  out.document = std::move(doc);
  return out;
}

inline Result enum_functors(dsl::Document doc, const Options& o) {
  Result out;
  auto all = doc.all<dsl::EnrichmentDecl>();
  if (all.empty()) throw UsageError("the input declares no enrichment");
  const auto& a = o.from.empty() ? *all.front() : pick<dsl::EnrichmentDecl>(doc, o.from, "enrichment");
  const auto& b = pick<dsl::EnrichmentDecl>(doc, o.to, "enrichment");
  const std::string an = a.name, bn = b.name;
  auto fs = enumerate_enriched_functors(lawful(a), lawful(b), o.cap);
  CheckReport r;
  for (const auto& F : fs) r.merge(check_functor_enrichment(F));
  out.add("functors", r);
  out.facts["count"] = fs.size();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::string stem = an + "_to_" + bn + "_" + std::to_string(i);
    doc.add(fresh(doc, stem), dsl::FunctorDecl{an, bn, fs[i]});
  }
  out.document = std::move(doc);
  return out;
}

// ---------------------------------------------------------------------------
// rendering

inline json report_json(const CheckReport& r) {
  json fs = json::array();
  for (const auto& f : r.failures) {
    json j{{"law", f.law}, {"instance", to_string(f.instance)}};
    if (f.lhs) j["lhs"] = to_string(*f.lhs);
    if (f.rhs) j["rhs"] = to_string(*f.rhs);
    if (!f.detail.empty()) j["detail"] = f.detail;
    fs.push_back(std::move(j));
  }
  return {{"ok", r.ok()}, {"instances", r.instances}, {"skipped", r.skipped}, {"failures", fs}};
}

inline void render(const Result& res, const std::string& command, const Options& o, std::ostream& out) {
  if (o.format == "json") {
    json checks = json::array();
    for (const auto& c : res.checks) {
      json j = report_json(c.report);
      j["name"] = c.name;
      checks.push_back(std::move(j));
    }
    json j{{"command", command}, {"ok", res.ok()}, {"checks", checks}, {"facts", res.facts}};
    if (res.document) j["document"] = dsl::to_json(*res.document);
    out << j.dump(2) << "\n";
    return;
  }
  // Text output is itself a document: results ride along as comments.
  if (res.document) out << dsl::serialize(*res.document) << "\n";
  for (const auto& c : res.checks) {
    std::string s = c.report.summary();
    for (std::size_t p = 0; (p = s.find('\n', p)) != std::string::npos; p += 3) s.replace(p, 1, "\n# ");
    out << "# " << c.name << ": " << s << "\n";
  }
  for (const auto& [k, v] : res.facts.items()) out << "# " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  out << "# verdict: " << (res.ok() ? "ok" : "FAILED") << "\n";
}

// ---------------------------------------------------------------------------
// entry point

inline int run_check(const Options& o, std::ostream& out, std::ostream& err) {
  const std::size_t n = o.files.size();
  std::vector<Loaded> loaded(n);
  std::vector<Result> results(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        loaded[i] = load_document({o.files[i]});
        if (loaded[i].parsed.ok())
          results[i] = check_document(loaded[i].parsed.document, o, n > 1 ? o.files[i] + ": " : "");
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::min<std::size_t>(std::max(o.jobs, 1u), n); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  bool usage = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      err << "error: " << errors[i] << "\n";
      usage = true;
    }
    for (const auto& d : loaded[i].diagnostics()) err << d << "\n";
    if (!loaded[i].parsed.ok()) usage = true;
  }
  if (usage) return 2;
  Result all;
  for (auto& r : results)
    for (auto& c : r.checks) all.checks.push_back(std::move(c));
  render(all, "check", o, out);
  return all.ok() ? 0 : 1;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Workbench for finite enriched categories", "ecat"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", o.jobs, "Documents checked concurrently")->check(CLI::PositiveNumber);
  app.add_option("--cap", o.cap, "Bound on enumerated candidates")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for randomized mutations");

  auto files = [&](CLI::App* s) { s->add_option("files", o.files, "Input .ecat files")->required()->check(CLI::ExistingFile); };

  auto* check = app.add_subcommand("check", "Check every declaration against its laws");
  files(check);
  check->add_option("--mutations", o.mutations, "Random single-entry mutations per base, each of which must be caught");

  auto* cons = app.add_subcommand("construct", "Build an enrichment from the input");
  cons->add_option("construction", o.construction, "self, opposite, full-sub, functor-category, dialgebra, "
                                                   "change-of-base, set-enrichment or kelly")
      ->required()
      ->check(CLI::IsMember({"self", "opposite", "full-sub", "functor-category", "dialgebra", "change-of-base",
                             "set-enrichment", "kelly"}));
  files(cons);
  cons->add_option("--base", o.base, "Base to use (self, change-of-base, set-enrichment)");
  cons->add_option("--enrichment", o.enrichment, "Enrichment to transform");
  cons->add_option("--keep", o.keep, "Objects kept by full-sub or self")->delimiter(',');
  cons->add_option("--from", o.from, "Domain enrichment of a functor category");
  cons->add_option("--to", o.to, "Codomain enrichment of a functor category");
  cons->add_option("--functor", o.functor, "First functor of a dialgebra enrichment");
  cons->add_option("--other", o.other, "Second functor of a dialgebra enrichment");
  cons->add_option("--along", o.along, "Change of base functor")->check(CLI::IsMember({"bool-to-cost", "collapse"}));

  auto* fact = app.add_subcommand("factorize", "Factor a functor through its full image");
  files(fact);
  fact->add_option("--functor", o.functor, "Functor to use (default: the last declared)");
  auto* equiv = app.add_subcommand("equivalence", "Promote a weak equivalence to an adjoint equivalence");
  files(equiv);
  equiv->add_option("--functor", o.functor, "Functor to use (default: the last declared)");
  auto* rz = app.add_subcommand("rezk", "Rezk completion with its certificates");
  files(rz);
  rz->add_option("--enrichment", o.enrichment, "Enrichment to use (default: the last declared)");
  auto* yon = app.add_subcommand("yoneda-check", "Check that the Yoneda embedding is fully faithful");
  files(yon);
  yon->add_option("--enrichment", o.enrichment, "Enrichment to use (default: the last declared)");
  auto* pre = app.add_subcommand("precomp-check", "Check that precomposition with a functor is an equivalence");
  files(pre);
  pre->add_option("--functor", o.functor, "Functor to use (default: the last declared)");
  pre->add_option("--enrichment", o.enrichment, "Target enrichment (default: the last one declared)");
  auto* kl = app.add_subcommand("kleisli", "Kleisli enrichment of a monad");
  files(kl);
  kl->add_option("--monad", o.monad, "Monad to use (default: the last declared)");
  kl->add_option("--variant", o.variant, "Free Kleisli category or its univalent completion")->check(CLI::IsMember({"raw", "univalent"}));
  auto* ump = app.add_subcommand("kleisli-ump", "Extend a Kleisli cocone along the univalent Kleisli category");
  files(ump);
  ump->add_option("--monad", o.monad, "Monad to use (default: the last declared)");
  ump->add_option("--cocone", o.cocone, "Declared cocone, or canonical / free");
  auto* en = app.add_subcommand("enum-functors", "List every enriched functor between two enrichments");
  files(en);
  en->add_option("--from", o.from, "Domain (default: the first enrichment)");
  en->add_option("--to", o.to, "Codomain (default: the last enrichment)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  if (cmd == "check") return run_check(o, out, err);
  try {
    Loaded l = load_document(o.files);
    for (const auto& d : l.diagnostics()) err << d << "\n";
    if (!l.parsed.ok()) return 2;
    dsl::Document& doc = l.parsed.document;
    Result r;
    if (cmd == "construct") r = construct(std::move(doc), o);
    else if (cmd == "factorize") r = factorize(std::move(doc), o);
    else if (cmd == "equivalence") r = equivalence(std::move(doc), o);
    else if (cmd == "rezk") r = rezk(std::move(doc), o);
    else if (cmd == "yoneda-check") r = yoneda_check(doc, o);
    else if (cmd == "precomp-check") r = precomp_check(doc, o);
    else if (cmd == "kleisli") r = kleisli(std::move(doc), o);
    else if (cmd == "kleisli-ump") r = kleisli_ump(std::move(doc), o);
    else r = enum_functors(std::move(doc), o);
    render(r, cmd, o, out);
    return r.ok() ? 0 : 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    // A refused or capped computation is a failed check, not a usage problem.
    err << "error: " << e.what() << "\n";
    if (o.format == "json") out << json{{"command", cmd}, {"ok", false}, {"error", e.what()}}.dump(2) << "\n";
    return 1;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ecat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ecat::cli
