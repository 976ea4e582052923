#pragma once

// Surface syntax for terms of every calculus:
//
//   term  ::= '\' ident+ '.' term | 'mu' ident '[' ident ']' term | app
//   app   ::= atom+ [ '\' ... | 'mu' ... ]
//   atom  ::= ident | 'C' | '#' ident | '(' term ')' | '[' term ']' '{' [ term '/' ident { ',' ... } ] '}'
//
// `λ` and `μ` are accepted for `\` and `mu`.  `--` starts a comment.

#include <cctype>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "term.hpp"

namespace lamlab {

enum class Calculus { Lambda, LambdaC, LambdaMu, Directed };

inline const char* calculus_name(Calculus c) {
  switch (c) {
    case Calculus::Lambda: return "lambda";
    case Calculus::LambdaC: return "lambda-c";
    case Calculus::LambdaMu: return "lambda-mu";
    case Calculus::Directed: return "directed";
  }
  return "?";
}

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

namespace detail {

enum class Tok { Ident, Lambda, Mu, Dot, LParen, RParen, LBracket, RBracket, LBrace, RBrace, Comma, Slash, Hash, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::End, {}, line, col};
    if (src.substr(i, 2) == "\xCE\xBB") {  // λ
      t.kind = Tok::Lambda;
      out.push_back(t);
      advance(2);
      continue;
    }
    if (src.substr(i, 2) == "\xCE\xBC") {  // μ
      t.kind = Tok::Mu;
      out.push_back(t);
      advance(2);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.text = std::string(src.substr(i, j - i));
      t.kind = t.text == "mu" ? Tok::Mu : Tok::Ident;
      out.push_back(t);
      advance(j - i);
      continue;
    }
    switch (c) {
      case '\\': t.kind = Tok::Lambda; break;
      case '.': t.kind = Tok::Dot; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '[': t.kind = Tok::LBracket; break;
      case ']': t.kind = Tok::RBracket; break;
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case ',': t.kind = Tok::Comma; break;
      case '/': t.kind = Tok::Slash; break;
      case '#': t.kind = Tok::Hash; break;
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(t);
    advance(1);
  }
  out.push_back(Token{Tok::End, {}, line, col});
  return out;
}

class TermParser {
 public:
  TermParser(std::string_view src, Calculus mode) : toks_(lex(src)), mode_(mode) {}

  Term parse() {
    Term t = term();
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(peek().line, peek().column, msg);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    if (mode_ == Calculus::LambdaC && peek().text == "C") fail("C is a constant and cannot be bound");
    return next().text;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::LParen:
      case Tok::Hash:
        return true;
      case Tok::LBracket:
        return mode_ == Calculus::Directed;
      default:
        return false;
    }
  }

  Term term() {
    if (peek().kind == Tok::Lambda) return abstraction();
    if (peek().kind == Tok::Mu) return mu_term();
    return application();
  }

  Term abstraction() {
    expect(Tok::Lambda, "lambda");
    std::vector<std::string> binders;
    binders.push_back(ident("binder"));
    while (peek().kind == Tok::Ident) binders.push_back(ident("binder"));
    expect(Tok::Dot, "'.'");
    return lams(binders, term());
  }

  Term mu_term() {
    if (mode_ != Calculus::LambdaMu) fail("mu-abstraction is only available in lambda-mu mode");
    expect(Tok::Mu, "mu");
    std::string a = ident("mu-variable");
    expect(Tok::LBracket, "'['");
    std::string b = ident("mu-variable");
    expect(Tok::RBracket, "']'");
    return Term::mu(a, b, term());
  }

  Term application() {
    if (!starts_atom()) fail("expected a term");
    Term t = atom();
    for (;;) {
      if (starts_atom()) {
        t = Term::app(t, atom());
      } else if (peek().kind == Tok::Lambda || peek().kind == Tok::Mu) {
        return Term::app(t, term());
      } else {
        return t;
      }
    }
  }

  Term atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Ident:
        ++pos_;
        if (mode_ == Calculus::LambdaC && tok.text == "C") return Term::constant_c();
        return Term::var(tok.text);
      case Tok::Hash: {
        if (mode_ != Calculus::LambdaC) fail("stack constants are only available in lambda-c mode");
        ++pos_;
        if (peek().kind != Tok::Ident) fail("expected stack-constant name");
        return Term::stack(next().text);
      }
      case Tok::LParen: {
        ++pos_;
        Term t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::LBracket: {
        ++pos_;
        Term director = term();
        expect(Tok::RBracket, "']'");
        expect(Tok::LBrace, "'{'");
        std::vector<BoxBinding> subst;
        if (peek().kind != Tok::RBrace) {
          for (;;) {
            Term a = term();
            expect(Tok::Slash, "'/'");
            std::string x = ident("variable");
            for (const auto& e : subst)
              if (e.first == x) fail("variable bound twice in box substitution: " + x);
            subst.emplace_back(x, a);
            if (peek().kind != Tok::Comma) break;
            ++pos_;
          }
        }
        expect(Tok::RBrace, "'}'");
        return Term::box(director, std::move(subst));
      }
      default:
        fail("expected a term");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Calculus mode_;
};

/// Stack constants may only appear as arguments.
inline bool stacks_in_argument_position(const Term& t, bool as_argument) {
  switch (t.kind()) {
    case Kind::Stack:
      return as_argument;
    case Kind::Lam:
      return stacks_in_argument_position(t.body(), false);
    case Kind::App:
      return stacks_in_argument_position(t.fun(), false) && stacks_in_argument_position(t.arg(), true);
    case Kind::Mu:
      return stacks_in_argument_position(t.body(), false);
    case Kind::Box:
      for (const auto& e : t.substitution())
        if (!stacks_in_argument_position(e.second, false)) return false;
      return stacks_in_argument_position(t.director(), false);
    default:
      return true;
  }
}

}  // namespace detail

/// Checks the constructs of t against a calculus; returns an empty string when admissible.
inline std::string calculus_violation(const Term& t, Calculus mode) {
  if (t.contains_c() && mode != Calculus::LambdaC) return "constant C outside lambda-c";
  if (t.contains_stack() && mode != Calculus::LambdaC) return "stack constant outside lambda-c";
  if (t.contains_mu() && mode != Calculus::LambdaMu) return "mu-abstraction outside lambda-mu";
  if (t.contains_box() && mode != Calculus::Directed) return "box outside directed mode";
  if (!detail::stacks_in_argument_position(t, false)) return "stack constant outside argument position";
  return {};
}

/// Parse a term; free variables are allowed and denote λ-variables.
inline Term parse_term(std::string_view text, Calculus mode = Calculus::Lambda) {
  Term t = detail::TermParser(text, mode).parse();
  if (auto why = calculus_violation(t, mode); !why.empty()) throw ParseError(1, 1, why);
  return t;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

struct Renderer {
  std::vector<std::string> lambda_scope;
  std::vector<std::string> mu_scope;
  std::set<std::string> reserved;  // free names of the whole term

  bool in_scope(const std::vector<std::string>& scope, const std::string& x) const {
    return std::find(scope.begin(), scope.end(), x) != scope.end();
  }

  void render(const Term& t, std::string& out) {
    switch (t.kind()) {
      case Kind::Var:
        out += t.name();
        break;
      case Kind::ConstC:
        out += 'C';
        break;
      case Kind::Stack:
        out += '#';
        out += t.name();
        break;
      case Kind::Lam: {
        std::string x = t.name();
        Term body = t.body();
        if (in_scope(lambda_scope, x)) {
          std::string fresh = fresh_name(x, [&](const std::string& c) {
            return in_scope(lambda_scope, c) || reserved.count(c) || body.has_free(c);
          });
          body = substitute(body, x, Term::var(fresh));
          x = fresh;
        }
        out += '\\';
        out += x;
        out += '.';
        lambda_scope.push_back(x);
        if (!body.is(Kind::Lam)) out += ' ';
        render(body, out);
        lambda_scope.pop_back();
        break;
      }
      case Kind::Mu: {
        std::string a = t.name();
        std::string b = t.named();
        Term body = t.body();
        if (in_scope(mu_scope, a)) {
          std::string fresh = fresh_name(a, [&](const std::string& c) {
            return in_scope(mu_scope, c) || reserved.count(c) || body.has_free_mu(c) || c == b;
          });
          body = rename_free_mu(body, a, fresh);
          if (b == a) b = fresh;
          a = fresh;
        }
        out += "mu ";
        out += a;
        out += " [";
        out += b;
        out += "] ";
        mu_scope.push_back(a);
        render(body, out);
        mu_scope.pop_back();
        break;
      }
      case Kind::App: {
        const Term& f = t.fun();
        const Term& a = t.arg();
        bool paren_f = f.is(Kind::Lam) || f.is(Kind::Mu);
        if (paren_f) out += '(';
        render(f, out);
        if (paren_f) out += ')';
        out += ' ';
        bool paren_a = a.is(Kind::App) || a.is(Kind::Lam) || a.is(Kind::Mu);
        if (paren_a) out += '(';
        render(a, out);
        if (paren_a) out += ')';
        break;
      }
      case Kind::Box: {
        out += '[';
        Renderer inner;
        for (const auto& e : t.substitution()) inner.reserved.insert(e.first);
        for (const auto& name : t.director().free_vars()) inner.reserved.insert(name);
        inner.render(t.director(), out);
        out += "]{";
        bool first = true;
        for (const auto& [x, a] : t.substitution()) {
          if (!first) out += ", ";
          first = false;
          render(a, out);
          out += '/';
          out += x;
        }
        out += '}';
        break;
      }
    }
  }
};

}  // namespace detail

/// Plain-ASCII rendering: `\x.\f. f (f x)`.  Shadowing binders are renamed.
inline std::string render_term(const Term& t) {
  detail::Renderer r;
  for (const auto& x : t.free_vars()) r.reserved.insert(x);
  for (const auto& a : t.free_mu_vars()) r.reserved.insert(a);
  std::string out;
  r.render(t, out);
  return out;
}

}  // namespace lamlab
