#pragma once

#include <map>
#include <set>
#include <tuple>
#include <variant>

#include "../monad.hpp"
#include "syntax.hpp"

namespace ecat::dsl {

struct BaseDecl {
  BasePtr base;
};

struct EnrichmentDecl {
  std::string base;
  std::optional<KellyEnrichedCat> kelly;  // set for declarations without underlying-category lines
  EnrichPtr enrichment;                   // null when the Kelly data fails its laws
};

struct FunctorDecl {
  std::string dom, cod;
  EnrichedFunctor functor;
};

struct TransformationDecl {
  std::string src, dst;
  EnrichedTransformation transformation;
};

struct MonadDecl {
  std::string endo;
  EnrichedMonad monad;
};

struct CoconeDecl {
  std::string monad, leg;
  KleisliCocone cocone;
};

using Decl = std::variant<BaseDecl, EnrichmentDecl, FunctorDecl, TransformationDecl, MonadDecl, CoconeDecl>;

inline const char* kind_name(const Decl& d) {
  static const char* names[] = {"base", "enrichment", "functor", "transformation", "monad", "cocone"};
  return names[d.index()];
}

struct Item {
  std::string name;
  Span span;
  Decl decl;
};

struct Document {
  std::vector<Item> items;

  const Item* find(std::string_view name) const {
    for (const auto& it : items)
      if (it.name == name) return &it;
    return nullptr;
  }
  template <class D>
  const D* get(std::string_view name) const {
    const Item* it = find(name);
    return it ? std::get_if<D>(&it->decl) : nullptr;
  }
  template <class D>
  std::vector<const Item*> all() const {
    std::vector<const Item*> out;
    for (const auto& it : items)
      if (std::holds_alternative<D>(it.decl)) out.push_back(&it);
    return out;
  }
  void add(std::string name, Decl d) {
    if (find(name)) throw StructuralError("'" + name + "' is already declared");
    items.push_back(Item{std::move(name), {}, std::move(d)});
  }
};

struct ParseResult {
  Document document;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return !has_errors(diagnostics); }
};

namespace detail {

using Key = std::vector<std::uint64_t>;

/// Accepted shape of one statement keyword. Argument and value letters:
/// n number, i name, 2 pair, 3 triple; value '-' means no '= value'.
struct Form {
  const char* keyword;
  const char* args;
  char value;
  const char* usage;
};

class Resolver {
 public:
  Resolver(Document& doc, std::vector<Diagnostic>& diags) : doc_(doc), diags_(diags) {}

  void item(const RawItem& raw) {
    if (doc_.find(raw.name) || poisoned_.count(raw.name)) {
      error(raw.name_span, "'" + raw.name + "' is already declared");
      return;
    }
    if (raw.broken) {
      poisoned_.insert(raw.name);
      return;
    }
    raw_ = &raw;
    try {
      Decl d = resolve(raw);
      doc_.items.push_back(Item{raw.name, raw.span, std::move(d)});
    } catch (const Failed&) {
      poisoned_.insert(raw.name);
    } catch (const Error& e) {
      error(raw.name_span, std::string(raw.kind) + " '" + raw.name + "': " + e.what());
      poisoned_.insert(raw.name);
    }
  }

 private:
  struct Failed {};

  void error(const Span& s, std::string msg, std::string suggestion = {}) {
    diags_.push_back({Severity::error, std::move(msg), s, std::move(suggestion)});
  }
  [[noreturn]] void fail(const Span& s, std::string msg, std::string suggestion = {}) {
    error(s, std::move(msg), std::move(suggestion));
    throw Failed{};
  }

  // ---- references

  static std::string article(std::string_view w) {
    return std::string(std::string_view("aeiou").find(w.front()) == std::string_view::npos ? "a " : "an ") +
           std::string(w);
  }

  template <class D>
  const D& ref(const Token& t, const char* what) {
    if (poisoned_.count(t.text)) throw Failed{};
    const Item* it = doc_.find(t.text);
    if (!it) {
      std::vector<std::string> names;
      for (const Item* c : doc_.all<D>()) names.push_back(c->name);
      fail(t.span, std::string("unknown ") + what + " '" + t.text + "'", closest(t.text, names));
    }
    const D* d = std::get_if<D>(&it->decl);
    if (!d) fail(t.span, "'" + t.text + "' is " + article(kind_name(it->decl)) + ", expected " + article(what));
    return *d;
  }

  EnrichPtr usable(const Token& t) {
    const auto& d = ref<EnrichmentDecl>(t, "enrichment");
    if (!d.enrichment) fail(t.span, "enrichment '" + t.text + "' fails its laws and cannot be used here");
    return d.enrichment;
  }

  /// Matches the header against literal words (non-empty `word`) and token
  /// kinds; returns the name tokens in order.
  std::vector<const Token*> header(const RawItem& raw, std::initializer_list<std::pair<Tok, const char*>> shape,
                                   const char* usage) {
    std::vector<const Token*> names;
    auto bad = [&](const Span& s) { fail(s, std::string("malformed header, expected `") + usage + "`"); };
    if (raw.header.size() != shape.size()) bad(raw.header.empty() ? raw.name_span : raw.header.front().span);
    std::size_t i = 0;
    for (const auto& [kind, word] : shape) {
      const Token& t = raw.header[i++];
      if (t.kind != kind || (word && t.text != word)) bad(t.span);
      if (kind == Tok::ident && !word) names.push_back(&t);
    }
    if (!raw.has_body) fail(raw.span, std::string("missing body, expected `") + usage + "`");
    return names;
  }

  // ---- statements

  using Table = std::map<Key, const Statement*>;

  std::map<std::string, Table> collect(const RawItem& raw, const std::vector<Form>& forms) {
    std::map<std::string, Table> out;
    std::vector<std::string> words;
    for (const auto& f : forms) words.push_back(f.keyword);
    for (const Statement& s : raw.body) {
      const Form* form = nullptr;
      for (const auto& f : forms)
        if (s.keyword == f.keyword) form = &f;
      if (!form) {
        error(s.keyword_span, "unknown statement '" + s.keyword + "' in " + raw.kind, closest(s.keyword, words));
        continue;
      }
      if (!shape_ok(s, *form)) {
        error(s.span, std::string("malformed statement, expected `") + form->usage + "`");
        continue;
      }
      Key k;
      for (const Value& a : s.args) {
        if (a.kind == Value::Kind::number) k.push_back(a.number);
        for (auto x : a.tuple) k.push_back(x);
      }
      if (!out[s.keyword].emplace(k, &s).second) error(s.span, "duplicate '" + s.keyword + "' entry");
    }
    if (count_errors() != errors_before_) throw Failed{};
    return out;
  }

  static bool value_ok(const Value& v, char c) {
    switch (c) {
      case 'n': return v.kind == Value::Kind::number;
      case 'i': return v.kind == Value::Kind::ident;
      case '2': return v.kind == Value::Kind::tuple && v.tuple.size() == 2;
      case '3': return v.kind == Value::Kind::tuple && v.tuple.size() == 3;
    }
    return false;
  }
  static bool shape_ok(const Statement& s, const Form& f) {
    std::string_view a = f.args;
    if (s.args.size() != a.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!value_ok(s.args[i], a[i])) return false;
    if (f.value == '-') return !s.value;
    return s.value && value_ok(*s.value, f.value);
  }
  std::size_t count_errors() const {
    return static_cast<std::size_t>(std::count_if(diags_.begin(), diags_.end(),
                                                  [](const Diagnostic& d) { return d.severity == Severity::error; }));
  }

  static const Statement* at(const std::map<std::string, Table>& t, const std::string& kw, const Key& k) {
    auto it = t.find(kw);
    if (it == t.end()) return nullptr;
    auto jt = it->second.find(k);
    return jt == it->second.end() ? nullptr : jt->second;
  }
  static bool present(const std::map<std::string, Table>& t, const std::string& kw) {
    auto it = t.find(kw);
    return it != t.end() && !it->second.empty();
  }

  /// Every key in the table must be in range; reports the first offender.
  void in_range(const std::map<std::string, Table>& t, const std::string& kw,
                const std::function<bool(const Key&)>& ok, const std::string& what) {
    auto it = t.find(kw);
    if (it == t.end()) return;
    for (const auto& [k, s] : it->second)
      if (!ok(k)) fail(s->args.empty() ? s->span : cover(s->args.front().span, s->args.back().span),
                       "'" + kw + "' entry out of range: " + what);
  }

  /// The one statement of a keyword that may appear once.
  const Statement* single(const std::map<std::string, Table>& t, const char* kw, bool required) {
    auto it = t.find(kw);
    if (it == t.end() || it->second.empty()) {
      if (required) fail(raw_->name_span, std::string("missing '") + kw + "' statement");
      return nullptr;
    }
    if (it->second.size() > 1) fail(std::next(it->second.begin())->second->span, std::string("duplicate '") + kw + "' statement");
    return it->second.begin()->second;
  }

  ObjId object(const Value& v, std::size_t n, const char* what) {
    if (v.number >= n) fail(v.span, std::string(what) + " " + std::to_string(v.number) + " out of range (" +
                                        std::to_string(n) + " objects)");
    return static_cast<ObjId>(v.number);
  }

  static std::string pair(std::uint64_t a, std::uint64_t b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }

  /// A base morphism written (src,dst,k), typed s -> d. Omitted entries are
  /// forced when hom(s,d) has one element and left as an ill-typed
  /// placeholder when it is empty, so that the checkers report them.
  Mor base_mor(const MonoidalBase& v, const Statement* st, ObjId s, ObjId d, const std::string& what) {
    if (!st) {
      std::uint64_t size = v.hom_size(s, d);
      if (size == 1) return *v.mor_at(s, d, 0);
      if (size == 0) return Mor{s, d, {}};
      fail(raw_->name_span, "missing entry " + what + ": hom" + pair(s, d) + " has " + std::to_string(size) +
                                " morphisms");
    }
    const Value& val = *st->value;
    const auto& t = val.tuple;
    if (t[0] != s || t[1] != d)
      fail(val.span, what + " must be a morphism " + std::to_string(s) + " -> " + std::to_string(d));
    auto m = v.mor_at(s, d, t[2]);
    if (!m)
      fail(val.span, "no morphism #" + std::to_string(t[2]) + " in hom" + pair(s, d) + ", which has " +
                         std::to_string(v.hom_size(s, d)));
    return *m;
  }

  /// An arrow of an explicit category, written (src,dst,k); omitted entries
  /// are forced in singleton homs.
  std::uint32_t local(const Statement* st, std::uint64_t size, ObjId s, ObjId d, const std::string& what) {
    if (!st) {
      if (size == 1) return 0;
      fail(raw_->name_span, "missing entry " + what + ": " + pair(s, d) + " has " + std::to_string(size) + " arrows");
    }
    const Value& val = *st->value;
    const auto& t = val.tuple;
    if (t[0] != s || t[1] != d)
      fail(val.span, what + " must be an arrow " + std::to_string(s) + " -> " + std::to_string(d));
    if (t[2] >= size)
      fail(val.span, "no arrow #" + std::to_string(t[2]) + " in " + pair(s, d) + ", which has " +
                         std::to_string(size));
    return static_cast<std::uint32_t>(t[2]);
  }
  Arrow arrow(const FinCat& C, const Statement* st, ObjId s, ObjId d, const std::string& what) {
    return Arrow{s, d, local(st, C.hom_size(s, d), s, d, what)};
  }

  /// Explicit category from `arrows`, `id` and `then` statements.
  FinCat category(const std::map<std::string, Table>& t, std::size_t n, const char* homkw) {
    in_range(t, homkw, [&](const Key& k) { return k[0] < n && k[1] < n; }, "object index");
    in_range(t, "id", [&](const Key& k) { return k[0] < n; }, "object index");
    auto size = [&](ObjId x, ObjId y) -> std::uint32_t {
      const Statement* s = at(t, homkw, {x, y});
      if (s && s->value->number > (1u << 20)) fail(s->value->span, "hom size too large");
      return s ? static_cast<std::uint32_t>(s->value->number) : 0;
    };
    auto key = [](const Arrow& f) { return Key{f.src, f.dst, f.k}; };
    FinCat c = FinCat::build(
        n, size, [&](ObjId x) { return local(at(t, "id", {x}), size(x, x), x, x, "id " + std::to_string(x)); },
        [&](const Arrow& f, const Arrow& g) {
          Key k = key(f);
          for (auto x : key(g)) k.push_back(x);
          return local(at(t, "then", k), size(f.src, g.dst), f.src, g.dst, "then " + to_string(f) + to_string(g));
        });
    auto it = t.find("then");
    if (it != t.end())
      for (const auto& [k, s] : it->second)
        if (k[1] != k[3] || k[0] >= n || k[1] >= n || k[4] >= n || k[2] >= c.hom_size(k[0], k[1]) ||
            k[5] >= c.hom_size(k[3], k[4]))
          fail(s->span, "'then' entry is not a pair of composable arrows");
    return c;
  }

  // ---- declarations

  Decl resolve(const RawItem& raw) {
    errors_before_ = count_errors();
    if (raw.kind == "base") return base(raw);
    if (raw.kind == "enrichment") return enrichment(raw);
    if (raw.kind == "functor") return functor(raw);
    if (raw.kind == "transformation") return transformation(raw);
    if (raw.kind == "monad") return monad(raw);
    return cocone(raw);
  }

  Decl base(const RawItem& raw) {
    if (!raw.has_body) {
      const auto& h = raw.header;
      auto bad = [&](const Span& s) { fail(s, "malformed header, expected `base NAME = builtin(ID, params...);`"); };
      if (h.size() < 5 || h[0].kind != Tok::equals || h[1].kind != Tok::ident || h[1].text != "builtin" ||
          h[2].kind != Tok::lparen || h[3].kind != Tok::ident || h.back().kind != Tok::rparen)
        bad(h.empty() ? raw.name_span : h.front().span);
      std::vector<std::uint64_t> params;
      for (std::size_t i = 4; i + 1 < h.size(); i += 2) {
        if (h[i].kind != Tok::comma || i + 1 >= h.size() - 1 || h[i + 1].kind != Tok::number) bad(h[i].span);
        params.push_back(h[i + 1].value);
      }
      const auto& names = builtin_names();
      if (std::find(names.begin(), names.end(), h[3].text) == names.end())
        fail(h[3].span, "unknown builtin base '" + h[3].text + "'", closest(h[3].text, names));
      try {
        return BaseDecl{builtin_base(h[3].text, params)};
      } catch (const Error& e) {
        fail(cover(h[3].span, h.back().span), e.what());
      }
    }
    if (!raw.header.empty()) fail(raw.header.front().span, "malformed header, expected `base NAME { ... }`");
    static const std::vector<Form> forms{
        {"objects", "n", '-', "objects N;"},
        {"unit", "n", '-', "unit I;"},
        {"hom", "2", 'n', "hom (x,y) = N;"},
        {"id", "n", '3', "id x = (x,x,k);"},
        {"then", "33", '3', "then (f)(g) = (h);"},
        {"tensor", "2", 'n', "tensor (x,y) = z;"},
        {"tensormor", "33", '3', "tensormor (f)(g) = (h);"},
        {"lunitor", "n", '3', "lunitor x = (s,d,k);"},
        {"lunitorinv", "n", '3', "lunitorinv x = (s,d,k);"},
        {"runitor", "n", '3', "runitor x = (s,d,k);"},
        {"runitorinv", "n", '3', "runitorinv x = (s,d,k);"},
        {"assoc", "3", '3', "assoc (x,y,z) = (s,d,k);"},
        {"associnv", "3", '3', "associnv (x,y,z) = (s,d,k);"},
        {"symmetric", "", '-', "symmetric;"},
        {"symmetry", "2", '3', "symmetry (x,y) = (s,d,k);"},
        {"ihom", "2", 'n', "ihom (x,y) = z;"},
        {"eval", "2", '3', "eval (y,z) = (s,d,k);"},
        {"lam", "23", '3', "lam (x,y)(f) = (s,d,k);"},
        {"limits", "", '-', "limits;"},
    };
    auto t = collect(raw, forms);
    const Statement* objs = single(t, "objects", true);
    const std::uint64_t n64 = objs->args[0].number;
    if (n64 > 4096) fail(objs->args[0].span, "too many objects");
    const std::size_t n = n64;
    MonoidalTables m;
    m.name = raw.name;
    m.cat = category(t, n, "hom");
    try {
      m.cat.validate();
    } catch (const Error& e) {
      fail(raw.name_span, e.what());
    }
    const FinCat& C = m.cat;
    m.unit = object(single(t, "unit", true)->args[0], n, "unit");
    auto objs2 = [&](const char* kw, std::vector<ObjId>& out) {
      in_range(t, kw, [&](const Key& k) { return k[0] < n && k[1] < n; }, "object index");
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y) {
          const Statement* s = at(t, kw, {x, y});
          if (!s) fail(raw.name_span, std::string("missing entry ") + kw + " " + pair(x, y));
          out.push_back(object(*s->value, n, "object"));
        }
    };
    objs2("tensor", m.tensor_obj);
    auto ten = [&](ObjId x, ObjId y) { return m.tensor_obj[x * n + y]; };
    const auto all = C.all_arrows();
    auto key2 = [](const Arrow& f, const Arrow& g) { return Key{f.src, f.dst, f.k, g.src, g.dst, g.k}; };
    auto loc = [&](const char* kw, const Key& k, ObjId s, ObjId d, const std::string& what) {
      return local(at(t, kw, k), C.hom_size(s, d), s, d, what);
    };
    for (const Arrow& f : all)
      for (const Arrow& g : all)
        m.tensor_mor.push_back(loc("tensormor", key2(f, g), ten(f.src, g.src), ten(f.dst, g.dst),
                                   "tensormor " + to_string(f) + to_string(g)));
    for (ObjId x = 0; x < n; ++x) {
      std::string sx = std::to_string(x);
      m.lunitor.push_back(loc("lunitor", {x}, ten(m.unit, x), x, "lunitor " + sx));
      m.lunitor_inv.push_back(loc("lunitorinv", {x}, x, ten(m.unit, x), "lunitorinv " + sx));
      m.runitor.push_back(loc("runitor", {x}, ten(x, m.unit), x, "runitor " + sx));
      m.runitor_inv.push_back(loc("runitorinv", {x}, x, ten(x, m.unit), "runitorinv " + sx));
    }
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z) {
          ObjId l = ten(ten(x, y), z), r = ten(x, ten(y, z));
          std::string w = "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
          m.assoc.push_back(loc("assoc", {x, y, z}, l, r, "assoc " + w));
          m.assoc_inv.push_back(loc("associnv", {x, y, z}, r, l, "associnv " + w));
        }
    if (present(t, "symmetric") || present(t, "symmetry")) {
      std::vector<std::uint32_t> sym;
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y) sym.push_back(loc("symmetry", {x, y}, ten(x, y), ten(y, x), "symmetry " + pair(x, y)));
      m.symmetry = std::move(sym);
    }
    if (present(t, "ihom")) {
      MonoidalTables::Closed c;
      objs2("ihom", c.ihom);
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z)
          c.eval.push_back(loc("eval", {y, z}, ten(c.ihom[y * n + z], y), z, "eval " + pair(y, z)));
      for (ObjId x = 0; x < n; ++x)
        for (ObjId y = 0; y < n; ++y)
          for (const Arrow& f : all) {
            if (f.src != ten(x, y)) {
              c.lam.push_back(0);
              continue;
            }
            c.lam.push_back(loc("lam", {x, y, f.src, f.dst, f.k}, x, c.ihom[y * n + f.dst],
                                "lam " + pair(x, y) + to_string(f)));
          }
      m.closed = std::move(c);
    } else if (present(t, "eval") || present(t, "lam")) {
      fail(raw.name_span, "eval and lam need ihom entries");
    }
    m.limits = present(t, "limits");
    return BaseDecl{std::make_shared<TableBase>(std::move(m))};
  }

  Decl enrichment(const RawItem& raw) {
    auto names = header(raw, {{Tok::ident, "over"}, {Tok::ident, nullptr}}, "enrichment NAME over BASE { ... }");
    const auto& bd = ref<BaseDecl>(*names[0], "base");
    const MonoidalBase& v = *bd.base;
    static const std::vector<Form> forms{
        {"objects", "n", '-', "objects N;"},
        {"homobj", "2", 'n', "homobj (x,y) = v;"},
        {"eid", "n", '3', "eid x = (s,d,k);"},
        {"ecomp", "3", '3', "ecomp (x,y,z) = (s,d,k);"},
        {"arrows", "2", 'n', "arrows (x,y) = N;"},
        {"id", "n", '3', "id x = (x,x,k);"},
        {"then", "33", '3', "then (f)(g) = (h);"},
        {"fromarr", "3", '3', "fromarr (x,y,k) = (s,d,k);"},
    };
    auto t = collect(raw, forms);
    const Statement* objs = single(t, "objects", true);
    const std::uint64_t n64 = objs->args[0].number;
    if (n64 > 64) fail(objs->args[0].span, "too many objects");
    const std::size_t n = n64;
    in_range(t, "homobj", [&](const Key& k) { return k[0] < n && k[1] < n; }, "object index");
    in_range(t, "eid", [&](const Key& k) { return k[0] < n; }, "object index");
    in_range(t, "ecomp", [&](const Key& k) { return k[0] < n && k[1] < n && k[2] < n; }, "object index");
    const ObjId I = v.unit();
    std::vector<ObjId> hom;
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y) {
        const Statement* s = at(t, "homobj", {x, y});
        if (!s) fail(raw.name_span, "missing entry homobj " + pair(x, y));
        if (s->value->number > UINT32_MAX || !v.valid_object(static_cast<ObjId>(s->value->number)))
          fail(s->value->span, "hom-object " + std::to_string(s->value->number) + " is not an object of " + v.name());
        hom.push_back(static_cast<ObjId>(s->value->number));
      }
    auto H = [&](ObjId x, ObjId y) { return hom[x * n + y]; };
    std::vector<Mor> eid, ecomp;
    for (ObjId x = 0; x < n; ++x) eid.push_back(base_mor(v, at(t, "eid", {x}), I, H(x, x), "eid " + std::to_string(x)));
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z)
          ecomp.push_back(base_mor(v, at(t, "ecomp", {x, y, z}), v.tensor(H(y, z), H(x, y)), H(x, z),
                                   "ecomp (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")"));
    EnrichmentDecl d{names[0]->text, {}, {}};
    bool kelly = !present(t, "arrows") && !present(t, "id") && !present(t, "then") && !present(t, "fromarr");
    if (kelly) {
      KellyEnrichedCat K{bd.base, n, hom, eid, ecomp};
      if (check_kelly(K).ok()) d.enrichment = from_kelly(K);
      d.kelly = std::move(K);
      return d;
    }
    FinCat C = category(t, n, "arrows");
    in_range(t, "fromarr", [&](const Key& k) { return k[0] < n && k[1] < n && k[2] < C.hom_size(k[0], k[1]); },
             "no such arrow");
    std::vector<std::vector<Mor>> fa(n * n);
    for (const Arrow& f : C.all_arrows())
      fa[f.src * n + f.dst].push_back(
          base_mor(v, at(t, "fromarr", {f.src, f.dst, f.k}), I, H(f.src, f.dst), "fromarr " + to_string(f)));
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y) {
        std::uint64_t points = v.hom_size(I, H(x, y));
        if (points != C.hom_size(x, y))
          fail(raw.name_span, "from_arr on " + pair(x, y) + " is not a bijection: " + std::to_string(C.hom_size(x, y)) +
                                  " arrows but " + std::to_string(points) + " points");
      }
    try {
      d.enrichment = make_enrichment(bd.base, std::move(C), std::move(hom), std::move(eid), std::move(ecomp), std::move(fa));
    } catch (const StructuralError& e) {
      fail(raw.name_span, e.what());
    }
    return d;
  }

  Decl functor(const RawItem& raw) {
    auto names = header(raw, {{Tok::colon, nullptr}, {Tok::ident, nullptr}, {Tok::arrow, nullptr}, {Tok::ident, nullptr}},
                        "functor NAME : DOM -> COD { ... }");
    EnrichPtr E1 = usable(*names[0]), E2 = usable(*names[1]);
    try {
      require_same_base(*E1, *E2);
    } catch (const Error& e) {
      fail(cover(names[0]->span, names[1]->span), e.what());
    }
    static const std::vector<Form> forms{
        {"ob", "n", 'n', "ob x = y;"},
        {"efun", "2", '3', "efun (x,y) = (s,d,k);"},
    };
    auto t = collect(raw, forms);
    const std::size_t n1 = E1->objects(), n2 = E2->objects();
    in_range(t, "ob", [&](const Key& k) { return k[0] < n1; }, "object index");
    in_range(t, "efun", [&](const Key& k) { return k[0] < n1 && k[1] < n1; }, "object index");
    std::vector<ObjId> ob;
    for (ObjId x = 0; x < n1; ++x) {
      const Statement* s = at(t, "ob", {x});
      if (!s) fail(raw.name_span, "missing entry ob " + std::to_string(x));
      ob.push_back(object(*s->value, n2, "object"));
    }
    std::vector<Mor> efun;
    for (ObjId x = 0; x < n1; ++x)
      for (ObjId y = 0; y < n1; ++y)
        efun.push_back(base_mor(E1->V(), at(t, "efun", {x, y}), E1->hom(x, y), E2->hom(ob[x], ob[y]), "efun " + pair(x, y)));
    try {
      return FunctorDecl{names[0]->text, names[1]->text, make_functor(E1, E2, std::move(ob), std::move(efun))};
    } catch (const Error& e) {
      fail(raw.name_span, std::string("functor is not well defined: ") + e.what());
    }
  }

  std::vector<Arrow> components(const std::map<std::string, Table>& t, const char* kw, const FinCat& C,
                                std::size_t n, const std::function<ObjId(ObjId)>& src,
                                const std::function<ObjId(ObjId)>& dst) {
    in_range(t, kw, [&](const Key& k) { return k[0] < n; }, "object index");
    std::vector<Arrow> out;
    for (ObjId x = 0; x < n; ++x) {
      ObjId s = src(x), d = dst(x);
      if (C.hom_size(s, d) == 0 && !at(t, kw, {x}))
        fail(raw_->name_span, std::string("no arrow can serve as ") + kw + " " + std::to_string(x) + ": " +
                                  pair(s, d) + " is empty");
      out.push_back(arrow(C, at(t, kw, {x}), s, d, std::string(kw) + " " + std::to_string(x)));
    }
    return out;
  }

  Decl transformation(const RawItem& raw) {
    auto names = header(raw, {{Tok::colon, nullptr}, {Tok::ident, nullptr}, {Tok::darrow, nullptr}, {Tok::ident, nullptr}},
                        "transformation NAME : F => G { ... }");
    const auto& F = ref<FunctorDecl>(*names[0], "functor").functor;
    const auto& G = ref<FunctorDecl>(*names[1], "functor").functor;
    if (F.dom != G.dom || F.cod != G.cod)
      fail(cover(names[0]->span, names[1]->span), "functors '" + names[0]->text + "' and '" + names[1]->text +
                                                      "' are not parallel");
    static const std::vector<Form> forms{{"component", "n", '3', "component x = (s,d,k);"}};
    auto t = collect(raw, forms);
    auto c = components(t, "component", F.cod->under, F.dom->objects(), [&](ObjId x) { return F(x); },
                        [&](ObjId x) { return G(x); });
    return TransformationDecl{names[0]->text, names[1]->text, EnrichedTransformation{F, G, std::move(c)}};
  }

  Decl monad(const RawItem& raw) {
    auto names = header(raw, {{Tok::ident, "on"}, {Tok::ident, nullptr}}, "monad NAME on ENDOFUNCTOR { ... }");
    const auto& T = ref<FunctorDecl>(*names[0], "functor").functor;
    if (T.dom != T.cod) fail(names[0]->span, "'" + names[0]->text + "' is not an endofunctor");
    static const std::vector<Form> forms{{"unit", "n", '3', "unit x = (s,d,k);"}, {"mult", "n", '3', "mult x = (s,d,k);"}};
    auto t = collect(raw, forms);
    const FinCat& C = T.dom->under;
    const std::size_t n = T.dom->objects();
    auto eta = components(t, "unit", C, n, [](ObjId x) { return x; }, [&](ObjId x) { return T(x); });
    auto mu = components(t, "mult", C, n, [&](ObjId x) { return T(T(x)); }, [&](ObjId x) { return T(x); });
    return MonadDecl{names[0]->text, make_monad(T, std::move(eta), std::move(mu))};
  }

  Decl cocone(const RawItem& raw) {
    auto names = header(raw, {{Tok::ident, "for"}, {Tok::ident, nullptr}, {Tok::ident, "via"}, {Tok::ident, nullptr}},
                        "cocone NAME for MONAD via LEG { ... }");
    const auto& M = ref<MonadDecl>(*names[0], "monad").monad;
    const auto& L = ref<FunctorDecl>(*names[1], "functor").functor;
    if (L.dom != M.carrier) fail(names[1]->span, "the leg must start at the monad's carrier");
    static const std::vector<Form> forms{{"cell", "n", '3', "cell x = (s,d,k);"}};
    auto t = collect(raw, forms);
    auto c = components(t, "cell", L.cod->under, L.dom->objects(), [&](ObjId x) { return L(M.endo(x)); },
                        [&](ObjId x) { return L(x); });
    KleisliCocone q{L.cod, L, EnrichedTransformation{compose_functors(M.endo, L), L, std::move(c)}};
    return CoconeDecl{names[0]->text, names[1]->text, std::move(q)};
  }

  Document& doc_;
  std::vector<Diagnostic>& diags_;
  std::set<std::string> poisoned_;
  const RawItem* raw_ = nullptr;
  std::size_t errors_before_ = 0;
};

}  // namespace detail

/// Parses and resolves a document. Resolution continues past failing
/// declarations; anything depending on one is skipped without further noise.
inline ParseResult parse(std::string_view text) {
  ParseResult r;
  auto raw = parse_syntax(text, r.diagnostics);
  detail::Resolver res(r.document, r.diagnostics);
  for (const auto& it : raw) res.item(it);
  std::stable_sort(r.diagnostics.begin(), r.diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.begin.line, a.span.begin.col) < std::tie(b.span.begin.line, b.span.begin.col);
  });
  return r;
}

/// Thrown by parse_or_throw; what() holds the formatted diagnostics.
class ParseFailure : public Error {
 public:
  ParseFailure(std::vector<Diagnostic> d, const std::string& file)
      : Error(render(d, file)), diagnostics_(std::move(d)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string render(const std::vector<Diagnostic>& ds, const std::string& file) {
    std::string s;
    for (const auto& d : ds) s += format(d, file) + "\n";
    return s;
  }
  std::vector<Diagnostic> diagnostics_;
};

inline Document parse_or_throw(std::string_view text, const std::string& file = "<input>") {
  ParseResult r = parse(text);
  if (!r.ok()) throw ParseFailure(std::move(r.diagnostics), file);
  return std::move(r.document);
}

}  // namespace ecat::dsl
