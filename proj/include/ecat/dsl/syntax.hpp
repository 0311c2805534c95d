#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecat::dsl {

struct Pos {
  std::uint32_t line = 1, col = 1;
  friend bool operator==(const Pos&, const Pos&) = default;
};

/// Half-open: `end` is the position just past the last character.
struct Span {
  Pos begin, end;
  friend bool operator==(const Span&, const Span&) = default;
};

inline Span cover(const Span& a, const Span& b) { return Span{a.begin, b.end}; }

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string message;
  Span span;
  std::string suggestion;
};

inline std::string format(const Diagnostic& d, std::string_view file = "<input>") {
  std::string s = std::string(file) + ":" + std::to_string(d.span.begin.line) + ":" + std::to_string(d.span.begin.col) +
                  ": " + (d.severity == Severity::error ? "error" : "warning") + ": " + d.message;
  if (!d.suggestion.empty()) s += " (did you mean '" + d.suggestion + "'?)";
  return s;
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::error) return true;
  return false;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

/// Closest candidate within a third of the word's length, or empty.
inline std::string closest(std::string_view word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = word.size() / 3 + 1;
  for (const auto& c : candidates) {
    std::size_t d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// tokens

enum class Tok { ident, number, lparen, rparen, lbrace, rbrace, comma, semi, equals, colon, arrow, darrow, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::uint64_t value = 0;
  Span span;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "a name";
    case Tok::number: return "a number";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::comma: return "','";
    case Tok::semi: return "';'";
    case Tok::equals: return "'='";
    case Tok::colon: return "':'";
    case Tok::arrow: return "'->'";
    case Tok::darrow: return "'=>'";
    case Tok::end: return "end of input";
  }
  return "?";
}

inline std::vector<Token> lex(std::string_view src, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  std::size_t i = 0;
  Pos p;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++p.line;
      p.col = 1;
    } else {
      ++p.col;
    }
    ++i;
  };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t;
    Pos start = p;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::ident;
      while (i < src.size() && ident_char(src[i])) {
        t.text += src[i];
        advance();
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::number;
      bool overflow = false;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        std::uint64_t d = static_cast<std::uint64_t>(src[i] - '0');
        if (t.value > (UINT64_MAX - d) / 10) overflow = true;
        t.value = t.value * 10 + d;
        t.text += src[i];
        advance();
      }
      if (overflow) diags.push_back({Severity::error, "number " + t.text + " is too large", {start, p}, {}});
    } else {
      auto two = [&](char next) { return i + 1 < src.size() && src[i + 1] == next; };
      if (c == '-' && two('>')) {
        t.kind = Tok::arrow;
        advance();
      } else if (c == '=' && two('>')) {
        t.kind = Tok::darrow;
        advance();
      } else {
        switch (c) {
          case '(': t.kind = Tok::lparen; break;
          case ')': t.kind = Tok::rparen; break;
          case '{': t.kind = Tok::lbrace; break;
          case '}': t.kind = Tok::rbrace; break;
          case ',': t.kind = Tok::comma; break;
          case ';': t.kind = Tok::semi; break;
          case '=': t.kind = Tok::equals; break;
          case ':': t.kind = Tok::colon; break;
          default: {
            advance();
            diags.push_back({Severity::error, std::string("unexpected character '") + c + "'", {start, p}, {}});
            continue;
          }
        }
      }
      t.text = std::string(src.substr(i - (t.kind == Tok::arrow || t.kind == Tok::darrow ? 1 : 0),
                                      t.kind == Tok::arrow || t.kind == Tok::darrow ? 2 : 1));
      advance();
    }
    t.span = {start, p};
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::end, "", 0, {p, p}});
  return out;
}

// ---------------------------------------------------------------------------
// statements and items

struct Value {
  enum class Kind { number, ident, tuple } kind = Kind::number;
  std::uint64_t number = 0;
  std::string ident;
  std::vector<std::uint64_t> tuple;
  Span span;
};

/// `keyword args... [= value];`
struct Statement {
  std::string keyword;
  Span span, keyword_span;
  std::vector<Value> args;
  std::optional<Value> value;
};

struct RawItem {
  std::string kind, name;
  Span span, name_span;
  std::vector<Token> header;  // between the name and the body or final ';'
  bool has_body = false;
  bool broken = false;  // a statement failed to parse
  std::vector<Statement> body;
};

inline const std::vector<std::string>& item_kinds() {
  static const std::vector<std::string> k{"base", "enrichment", "functor", "transformation", "monad", "cocone"};
  return k;
}

class SyntaxParser {
 public:
  SyntaxParser(std::vector<Token> toks, std::vector<Diagnostic>& diags) : t_(std::move(toks)), diags_(diags) {}

  std::vector<RawItem> items() {
    std::vector<RawItem> out;
    while (peek().kind != Tok::end) {
      if (auto it = item()) {
        out.push_back(std::move(*it));
      } else {
        recover_top();
      }
    }
    return out;
  }

 private:
  struct Abort {};

  const Token& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
  const Token& take() {
    const Token& t = t_[pos_];
    if (pos_ + 1 < t_.size()) ++pos_;
    return t;
  }
  void error(const Span& s, std::string msg, std::string suggestion = {}) {
    diags_.push_back({Severity::error, std::move(msg), s, std::move(suggestion)});
  }
  const Token& expect(Tok k, const char* context) {
    if (peek().kind != k) {
      error(peek().span, std::string("expected ") + describe(k) + " " + context + ", found " +
                             (peek().kind == Tok::end ? std::string("end of input") : "'" + peek().text + "'"));
      throw Abort{};
    }
    return take();
  }

  bool at_item_start() const {
    if (peek().kind != Tok::ident) return false;
    for (const auto& k : item_kinds())
      if (peek().text == k) return true;
    return false;
  }

  void recover_top() {
    // skip to the next item keyword that begins a statement
    bool boundary = true;
    while (peek().kind != Tok::end) {
      if (boundary && at_item_start()) return;
      Tok k = take().kind;
      boundary = (k == Tok::rbrace || k == Tok::semi);
    }
  }

  std::optional<RawItem> item() {
    const Token& kw = peek();
    if (kw.kind != Tok::ident || !at_item_start()) {
      std::string sug = kw.kind == Tok::ident ? closest(kw.text, item_kinds()) : std::string{};
      error(kw.span, "expected a declaration (base, enrichment, functor, transformation, monad or cocone)", sug);
      take();
      return std::nullopt;
    }
    try {
      RawItem it;
      it.kind = take().text;
      it.span = kw.span;
      const Token& name = expect(Tok::ident, "naming the declaration");
      it.name = name.text;
      it.name_span = name.span;
      int depth = 0;
      while (true) {
        const Token& t = peek();
        if (t.kind == Tok::end) {
          error(t.span, "unterminated declaration '" + it.name + "'");
          throw Abort{};
        }
        if (depth == 0 && t.kind == Tok::semi) {
          it.span = cover(it.span, take().span);
          return it;
        }
        if (depth == 0 && t.kind == Tok::lbrace) break;
        if (t.kind == Tok::lparen) ++depth;
        if (t.kind == Tok::rparen) --depth;
        it.header.push_back(take());
      }
      take();
      it.has_body = true;
      while (peek().kind != Tok::rbrace) {
        if (peek().kind == Tok::end) {
          error(peek().span, "missing '}' closing '" + it.name + "'");
          throw Abort{};
        }
        try {
          it.body.push_back(statement());
        } catch (const Abort&) {
          it.broken = true;
          while (peek().kind != Tok::end && peek().kind != Tok::rbrace && take().kind != Tok::semi) {
          }
        }
      }
      it.span = cover(it.span, take().span);
      return it;
    } catch (const Abort&) {
      return std::nullopt;
    }
  }

  Value value() {
    const Token& t = peek();
    Value v;
    v.span = t.span;
    if (t.kind == Tok::number) {
      v.kind = Value::Kind::number;
      v.number = take().value;
    } else if (t.kind == Tok::ident) {
      v.kind = Value::Kind::ident;
      v.ident = take().text;
    } else if (t.kind == Tok::lparen) {
      v.kind = Value::Kind::tuple;
      take();
      while (true) {
        v.tuple.push_back(expect(Tok::number, "inside a tuple").value);
        if (peek().kind == Tok::comma) {
          take();
          continue;
        }
        v.span = cover(v.span, expect(Tok::rparen, "closing a tuple").span);
        break;
      }
    } else {
      error(t.span, "expected a number, a name or a tuple, found '" + t.text + "'");
      throw Abort{};
    }
    return v;
  }

  Statement statement() {
    Statement s;
    const Token& kw = expect(Tok::ident, "starting a statement");
    s.keyword = kw.text;
    s.keyword_span = s.span = kw.span;
    while (peek().kind != Tok::semi && peek().kind != Tok::equals) {
      if (peek().kind == Tok::rbrace || peek().kind == Tok::end) {
        error(peek().span, "expected ';' after '" + s.keyword + "' statement");
        throw Abort{};
      }
      s.args.push_back(value());
    }
    if (peek().kind == Tok::equals) {
      take();
      s.value = value();
    }
    s.span = cover(s.span, expect(Tok::semi, "ending the statement").span);
    return s;
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
};

inline std::vector<RawItem> parse_syntax(std::string_view src, std::vector<Diagnostic>& diags) {
  return SyntaxParser(lex(src, diags), diags).items();
}

}  // namespace ecat::dsl
