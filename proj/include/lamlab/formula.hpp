#pragma once

// Second-order formulas over a first-order signature: ⊥, atoms, →, ∀x, ∀X
// with four kinds of predicate variables (ordinary, ⊥, classical, •).

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "term.hpp"

namespace lamlab {

// ---------------------------------------------------------------------------
// First-order terms

struct FoTerm {
  std::string name;
  std::vector<FoTerm> args;
  bool variable = true;

  static FoTerm var(std::string n) { return FoTerm{std::move(n), {}, true}; }
  static FoTerm fun(std::string n, std::vector<FoTerm> a = {}) { return FoTerm{std::move(n), std::move(a), false}; }

  bool operator==(const FoTerm& o) const { return name == o.name && variable == o.variable && args == o.args; }
  bool operator!=(const FoTerm& o) const { return !(*this == o); }
  bool operator<(const FoTerm& o) const {
    return std::tie(variable, name, args) < std::tie(o.variable, o.name, o.args);
  }

  bool has_var(const std::string& x) const {
    if (variable) return name == x;
    return std::any_of(args.begin(), args.end(), [&](const FoTerm& a) { return a.has_var(x); });
  }

  void vars(std::set<std::string>& out) const {
    if (variable) out.insert(name);
    for (const auto& a : args) a.vars(out);
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : args) s += a.size();
    return s;
  }
};

inline FoTerm fo_zero() { return FoTerm::fun("0"); }
inline FoTerm fo_succ(FoTerm t) { return FoTerm::fun("s", {std::move(t)}); }
inline FoTerm fo_numeral(std::size_t n) {
  FoTerm t = fo_zero();
  for (std::size_t i = 0; i < n; ++i) t = fo_succ(t);
  return t;
}

inline FoTerm fo_substitute(const FoTerm& t, const std::map<std::string, FoTerm>& s) {
  if (t.variable) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  FoTerm r = t;
  for (auto& a : r.args) a = fo_substitute(a, s);
  return r;
}

inline std::string render_fo(const FoTerm& t) {
  if (t.args.empty()) return t.name;
  std::string s = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) s += (i ? ", " : "") + render_fo(t.args[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------
// Formulas

enum class VarKind : std::uint8_t { Ordinary, Bot, Classical, Bullet };

inline const char* kind_suffix(VarKind k) {
  switch (k) {
    case VarKind::Ordinary: return "";
    case VarKind::Bot: return ":b";
    case VarKind::Classical: return ":c";
    case VarKind::Bullet: return ":s";
  }
  return "";
}

enum class FKind : std::uint8_t { Bot, Atom, Arrow, ForallFO, ForallSO };

struct FormulaNode;

class Formula {
 public:
  Formula() = default;

  static Formula bot();
  /// Atom headed by a predicate variable of the given kind.
  static Formula atom(std::string var, VarKind kind, std::vector<FoTerm> args = {});
  /// Atom headed by a predicate symbol.
  static Formula symbol(std::string name, std::vector<FoTerm> args = {});
  static Formula arrow(Formula a, Formula b);
  static Formula forall_fo(std::string x, Formula body);
  /// Arity is read off the first free occurrence of the variable in body (0 if none).
  static Formula forall_so(std::string X, VarKind kind, Formula body);
  static Formula forall_so(std::string X, VarKind kind, std::size_t arity, Formula body);

  FKind kind() const;
  bool is(FKind k) const { return node_ && kind() == k; }
  explicit operator bool() const { return static_cast<bool>(node_); }

  const std::string& name() const;
  VarKind var_kind() const;
  bool is_symbol() const;
  const std::vector<FoTerm>& args() const;
  std::size_t arity() const;
  const Formula& left() const;
  const Formula& right() const;
  const Formula& body() const { return left(); }

 private:
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  FKind kind;
  std::string name;
  VarKind vkind = VarKind::Ordinary;
  bool symbol = false;
  std::vector<FoTerm> args;
  std::size_t arity = 0;
  Formula left, right;
};

inline Formula Formula::bot() {
  Formula f;
  f.node_ = std::make_shared<FormulaNode>(FormulaNode{FKind::Bot, "bot", VarKind::Ordinary, true, {}, 0, {}, {}});
  return f;
}
inline Formula Formula::atom(std::string var, VarKind kind, std::vector<FoTerm> args) {
  Formula f;
  std::size_t n = args.size();
  f.node_ = std::make_shared<FormulaNode>(
      FormulaNode{FKind::Atom, std::move(var), kind, false, std::move(args), n, {}, {}});
  return f;
}
inline Formula Formula::symbol(std::string name, std::vector<FoTerm> args) {
  Formula f;
  std::size_t n = args.size();
  f.node_ = std::make_shared<FormulaNode>(
      FormulaNode{FKind::Atom, std::move(name), VarKind::Ordinary, true, std::move(args), n, {}, {}});
  return f;
}
inline Formula Formula::arrow(Formula a, Formula b) {
  Formula f;
  f.node_ = std::make_shared<FormulaNode>(
      FormulaNode{FKind::Arrow, "", VarKind::Ordinary, false, {}, 0, std::move(a), std::move(b)});
  return f;
}
inline Formula Formula::forall_fo(std::string x, Formula body) {
  Formula f;
  f.node_ = std::make_shared<FormulaNode>(
      FormulaNode{FKind::ForallFO, std::move(x), VarKind::Ordinary, false, {}, 0, std::move(body), {}});
  return f;
}
inline Formula Formula::forall_so(std::string X, VarKind kind, std::size_t arity, Formula body) {
  Formula f;
  f.node_ = std::make_shared<FormulaNode>(
      FormulaNode{FKind::ForallSO, std::move(X), kind, false, {}, arity, std::move(body), {}});
  return f;
}

inline FKind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline VarKind Formula::var_kind() const { return node_->vkind; }
inline bool Formula::is_symbol() const { return node_->symbol; }
inline const std::vector<FoTerm>& Formula::args() const { return node_->args; }
inline std::size_t Formula::arity() const { return node_->arity; }
inline const Formula& Formula::left() const { return node_->left; }
inline const Formula& Formula::right() const { return node_->right; }

inline Formula neg(Formula a) { return Formula::arrow(std::move(a), Formula::bot()); }

/// F1, …, Fn → G
inline Formula arrows(const std::vector<Formula>& premises, Formula goal) {
  for (auto it = premises.rbegin(); it != premises.rend(); ++it) goal = Formula::arrow(*it, goal);
  return goal;
}

/// A second-order variable is its name together with its kind.
using SoVar = std::pair<std::string, VarKind>;

namespace detail {

inline std::optional<std::size_t> occurrence_arity(const Formula& f, const SoVar& X) {
  switch (f.kind()) {
    case FKind::Atom:
      if (!f.is_symbol() && f.name() == X.first && f.var_kind() == X.second) return f.args().size();
      return std::nullopt;
    case FKind::Arrow:
      if (auto a = occurrence_arity(f.left(), X)) return a;
      return occurrence_arity(f.right(), X);
    case FKind::ForallFO:
      return occurrence_arity(f.body(), X);
    case FKind::ForallSO:
      if (f.name() == X.first && f.var_kind() == X.second) return std::nullopt;
      return occurrence_arity(f.body(), X);
    default:
      return std::nullopt;
  }
}

}  // namespace detail

inline Formula Formula::forall_so(std::string X, VarKind kind, Formula body) {
  std::size_t arity = detail::occurrence_arity(body, {X, kind}).value_or(0);
  return forall_so(std::move(X), kind, arity, std::move(body));
}

// ---------------------------------------------------------------------------
// Free variables

inline void fo_free(const Formula& f, std::set<std::string>& out, std::set<std::string>& bound) {
  switch (f.kind()) {
    case FKind::Atom: {
      std::set<std::string> vs;
      for (const auto& a : f.args()) a.vars(vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      break;
    }
    case FKind::Arrow:
      fo_free(f.left(), out, bound);
      fo_free(f.right(), out, bound);
      break;
    case FKind::ForallFO: {
      bool fresh = bound.insert(f.name()).second;
      fo_free(f.body(), out, bound);
      if (fresh) bound.erase(f.name());
      break;
    }
    case FKind::ForallSO:
      fo_free(f.body(), out, bound);
      break;
    default:
      break;
  }
}

inline std::set<std::string> fo_free(const Formula& f) {
  std::set<std::string> out, bound;
  fo_free(f, out, bound);
  return out;
}

inline void so_free(const Formula& f, std::set<SoVar>& out, std::set<SoVar>& bound) {
  switch (f.kind()) {
    case FKind::Atom:
      if (!f.is_symbol() && !bound.count({f.name(), f.var_kind()})) out.insert({f.name(), f.var_kind()});
      break;
    case FKind::Arrow:
      so_free(f.left(), out, bound);
      so_free(f.right(), out, bound);
      break;
    case FKind::ForallFO:
      so_free(f.body(), out, bound);
      break;
    case FKind::ForallSO: {
      SoVar X{f.name(), f.var_kind()};
      bool fresh = bound.insert(X).second;
      so_free(f.body(), out, bound);
      if (fresh) bound.erase(X);
      break;
    }
    default:
      break;
  }
}

inline std::set<SoVar> so_free(const Formula& f) {
  std::set<SoVar> out, bound;
  so_free(f, out, bound);
  return out;
}

inline bool has_free_fo(const Formula& f, const std::string& x) { return fo_free(f).count(x) > 0; }
inline bool has_free_so(const Formula& f, const SoVar& X) { return so_free(f).count(X) > 0; }

/// Every variable name used anywhere (bound or free, both orders).
inline void formula_names(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FKind::Atom:
      out.insert(f.name());
      for (const auto& a : f.args()) a.vars(out);
      break;
    case FKind::Arrow:
      formula_names(f.left(), out);
      formula_names(f.right(), out);
      break;
    case FKind::ForallFO:
    case FKind::ForallSO:
      out.insert(f.name());
      formula_names(f.body(), out);
      break;
    default:
      break;
  }
}

// ---------------------------------------------------------------------------
// Substitution

/// A[u/x], renaming bound first-order variables that would capture u.
inline Formula substitute_fo(const Formula& f, const std::map<std::string, FoTerm>& s) {
  if (s.empty()) return f;
  switch (f.kind()) {
    case FKind::Atom: {
      if (f.is_symbol() && f.args().empty()) return f;
      std::vector<FoTerm> args;
      for (const auto& a : f.args()) args.push_back(fo_substitute(a, s));
      return f.is_symbol() ? Formula::symbol(f.name(), std::move(args))
                           : Formula::atom(f.name(), f.var_kind(), std::move(args));
    }
    case FKind::Arrow:
      return Formula::arrow(substitute_fo(f.left(), s), substitute_fo(f.right(), s));
    case FKind::ForallFO: {
      std::map<std::string, FoTerm> inner = s;
      inner.erase(f.name());
      if (inner.empty()) return f;
      std::set<std::string> incoming;
      for (const auto& [x, t] : inner)
        if (has_free_fo(f.body(), x)) t.vars(incoming);
      std::string y = f.name();
      if (incoming.count(y)) {
        std::set<std::string> body_free = fo_free(f.body());
        y = fresh_name(y, [&](const std::string& c) { return incoming.count(c) || body_free.count(c) || inner.count(c); });
        inner[f.name()] = FoTerm::var(y);
      }
      return Formula::forall_fo(y, substitute_fo(f.body(), inner));
    }
    case FKind::ForallSO:
      return Formula::forall_so(f.name(), f.var_kind(), f.arity(), substitute_fo(f.body(), s));
    default:
      return f;
  }
}

inline Formula substitute_fo(const Formula& f, const std::string& x, const FoTerm& u) {
  return substitute_fo(f, std::map<std::string, FoTerm>{{x, u}});
}

/// A formula abstracted over first-order parameters: the G of A[G/X].
struct Template {
  std::vector<std::string> params;
  Formula body;
};

inline Formula instantiate_template(const Template& g, const std::vector<FoTerm>& args) {
  if (args.size() != g.params.size())
    throw std::invalid_argument("template expects " + std::to_string(g.params.size()) + " arguments");
  std::map<std::string, FoTerm> s;
  for (std::size_t i = 0; i < args.size(); ++i) s[g.params[i]] = args[i];
  return substitute_fo(g.body, s);
}

/// A[G/X]: each X(t̄) becomes G[t̄/x̄]; bound variables of A are renamed away from G.
inline Formula substitute_so(const Formula& f, const SoVar& X, const Template& g) {
  if (!has_free_so(f, X)) return f;
  switch (f.kind()) {
    case FKind::Atom:
      if (!f.is_symbol() && f.name() == X.first && f.var_kind() == X.second) return instantiate_template(g, f.args());
      return f;
    case FKind::Arrow:
      return Formula::arrow(substitute_so(f.left(), X, g), substitute_so(f.right(), X, g));
    case FKind::ForallFO: {
      std::set<std::string> gfree = fo_free(g.body);
      for (const auto& p : g.params) gfree.erase(p);
      if (!gfree.count(f.name())) return Formula::forall_fo(f.name(), substitute_so(f.body(), X, g));
      std::set<std::string> names;
      formula_names(f, names);
      std::string y = fresh_name(f.name(), [&](const std::string& c) { return names.count(c) || gfree.count(c); });
      Formula body = substitute_fo(f.body(), f.name(), FoTerm::var(y));
      return Formula::forall_fo(y, substitute_so(body, X, g));
    }
    case FKind::ForallSO: {
      SoVar Y{f.name(), f.var_kind()};
      std::set<SoVar> gfree = so_free(g.body);
      if (!gfree.count(Y)) return Formula::forall_so(f.name(), f.var_kind(), f.arity(), substitute_so(f.body(), X, g));
      std::set<std::string> names;
      formula_names(f, names);
      formula_names(g.body, names);
      std::string z = fresh_name(f.name(), [&](const std::string& c) { return names.count(c) > 0; });
      std::vector<std::string> ps;
      std::vector<FoTerm> vars;
      for (std::size_t i = 0; i < f.arity(); ++i) {
        ps.push_back("_p" + std::to_string(i));
        vars.push_back(FoTerm::var(ps.back()));
      }
      Formula body = substitute_so(f.body(), Y, Template{ps, Formula::atom(z, f.var_kind(), vars)});
      return Formula::forall_so(z, f.var_kind(), f.arity(), substitute_so(body, X, g));
    }
    default:
      return f;
  }
}

// ---------------------------------------------------------------------------
// α-equivalence

namespace detail {

struct FEnv {
  std::vector<std::string> fo;
  std::vector<SoVar> so;
};

inline std::ptrdiff_t fo_index(const FEnv& e, const std::string& x) {
  for (std::size_t i = e.fo.size(); i-- > 0;)
    if (e.fo[i] == x) return static_cast<std::ptrdiff_t>(e.fo.size() - 1 - i);
  return -1;
}

inline std::ptrdiff_t so_index(const FEnv& e, const SoVar& X) {
  for (std::size_t i = e.so.size(); i-- > 0;)
    if (e.so[i] == X) return static_cast<std::ptrdiff_t>(e.so.size() - 1 - i);
  return -1;
}

inline bool fo_alpha(const FoTerm& a, const FoTerm& b, const FEnv& ea, const FEnv& eb) {
  if (a.variable != b.variable) return false;
  if (a.variable) {
    auto ia = fo_index(ea, a.name), ib = fo_index(eb, b.name);
    if (ia != ib) return false;
    return ia >= 0 || a.name == b.name;
  }
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!fo_alpha(a.args[i], b.args[i], ea, eb)) return false;
  return true;
}

inline bool formula_alpha(const Formula& a, const Formula& b, FEnv& ea, FEnv& eb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FKind::Bot:
      return true;
    case FKind::Atom: {
      if (a.is_symbol() != b.is_symbol() || a.args().size() != b.args().size()) return false;
      if (a.is_symbol()) {
        if (a.name() != b.name()) return false;
      } else {
        if (a.var_kind() != b.var_kind()) return false;
        auto ia = so_index(ea, {a.name(), a.var_kind()}), ib = so_index(eb, {b.name(), b.var_kind()});
        if (ia != ib || (ia < 0 && a.name() != b.name())) return false;
      }
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!fo_alpha(a.args()[i], b.args()[i], ea, eb)) return false;
      return true;
    }
    case FKind::Arrow:
      return formula_alpha(a.left(), b.left(), ea, eb) && formula_alpha(a.right(), b.right(), ea, eb);
    case FKind::ForallFO: {
      ea.fo.push_back(a.name());
      eb.fo.push_back(b.name());
      bool r = formula_alpha(a.body(), b.body(), ea, eb);
      ea.fo.pop_back();
      eb.fo.pop_back();
      return r;
    }
    case FKind::ForallSO: {
      if (a.var_kind() != b.var_kind() || a.arity() != b.arity()) return false;
      ea.so.push_back({a.name(), a.var_kind()});
      eb.so.push_back({b.name(), b.var_kind()});
      bool r = formula_alpha(a.body(), b.body(), ea, eb);
      ea.so.pop_back();
      eb.so.pop_back();
      return r;
    }
  }
  return false;
}

}  // namespace detail

inline bool alpha_equal(const Formula& a, const Formula& b) {
  detail::FEnv ea, eb;
  return detail::formula_alpha(a, b, ea, eb);
}

inline bool has_kind(const Formula& f, VarKind k) {
  switch (f.kind()) {
    case FKind::Atom:
      return !f.is_symbol() && f.var_kind() == k;
    case FKind::Arrow:
      return has_kind(f.left(), k) || has_kind(f.right(), k);
    case FKind::ForallFO:
      return has_kind(f.body(), k);
    case FKind::ForallSO:
      return f.var_kind() == k || has_kind(f.body(), k);
    default:
      return false;
  }
}

inline bool contains_bot(const Formula& f) {
  switch (f.kind()) {
    case FKind::Bot:
      return true;
    case FKind::Arrow:
      return contains_bot(f.left()) || contains_bot(f.right());
    case FKind::ForallFO:
    case FKind::ForallSO:
      return contains_bot(f.body());
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Parsing
//
//   formula := item ("," item)* "->" formula | item
//   item    := "~" item | "forall" binder+ ("." formula | "(" formula ")" | "{" formula "}")
//            | "bot" | atom | "(" formula ")" | "{" formula "}"
//   binder  := x | X (":" ("b"|"c"|"s"))?
//   atom    := X(":"k)? ("(" term,* ")")? | p "(" term,* ")" | p | term "=" term

struct FormulaError : std::runtime_error {
  std::size_t column;
  FormulaError(std::size_t col, const std::string& msg)
      : std::runtime_error("column " + std::to_string(col) + ": " + msg), column(col) {}
};

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view s) : src_(s) {}

  Formula parse_all() {
    Formula f = formula();
    skip();
    if (pos_ < src_.size()) fail("unexpected input");
    return f;
  }

  FoTerm parse_term_all() {
    FoTerm t = term();
    skip();
    if (pos_ < src_.size()) fail("unexpected input after term");
    return t;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<SoVar> so_scope_;

  [[noreturn]] void fail(const std::string& msg) const { throw FormulaError(pos_ + 1, msg); }

  void skip() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      } else if (src_.substr(pos_, 2) == "--" && src_.substr(pos_, 3) != "-->" && src_.substr(pos_, 2) != "->") {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool eat(std::string_view tok) {
    skip();
    if (src_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  bool peek(std::string_view tok) {
    skip();
    return src_.substr(pos_, tok.size()) == tok;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

  std::optional<std::string> ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    if (pos_ == start) return std::nullopt;
    return std::string(src_.substr(start, pos_ - start));
  }

  bool keyword(std::string_view kw) {
    skip();
    if (src_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    if (end < src_.size() && ident_char(src_[end])) return false;
    pos_ = end;
    return true;
  }

  static bool upper(const std::string& s) { return std::isupper(static_cast<unsigned char>(s[0])); }

  VarKind kind_annotation() {
    if (!peek(":")) return VarKind::Ordinary;
    std::size_t save = pos_;
    eat(":");
    auto k = ident();
    if (k == "b") return VarKind::Bot;
    if (k == "c") return VarKind::Classical;
    if (k == "s") return VarKind::Bullet;
    pos_ = save;
    fail("unknown variable kind (expected :b, :c or :s)");
  }

  Formula formula() {
    std::vector<Formula> items{item()};
    while (eat(",")) items.push_back(item());
    if (eat("->") || eat("→")) {
      Formula rhs = formula();
      return arrows(items, rhs);
    }
    if (items.size() > 1) fail("a comma list must be followed by '->'");
    return items[0];
  }

  Formula item() {
    skip();
    if (eat("~") || eat("¬")) return neg(item());
    if (keyword("forall") || eat("∀")) return quantified();
    if (keyword("bot") || eat("⊥")) return Formula::bot();
    if (eat("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (eat("{")) {
      Formula f = formula();
      expect("}");
      return f;
    }
    return atom();
  }

  Formula quantified() {
    struct B {
      std::string name;
      bool so;
      VarKind kind;
    };
    std::vector<B> binders;
    for (;;) {
      skip();
      std::size_t save = pos_;
      auto n = ident();
      if (!n) break;
      if (*n == "bot") {
        pos_ = save;
        break;
      }
      bool so = upper(*n);
      VarKind k = so ? kind_annotation() : VarKind::Ordinary;
      binders.push_back({*n, so, k});
    }
    if (binders.empty()) fail("expected a bound variable after forall");
    // ∀x. A extends to the right; ∀x(A) and ∀x{A} scope over the bracket only.
    bool dotted = eat(".");
    if (!dotted && !peek("{") && !peek("(")) fail("expected '.' after the bound variables");
    for (const auto& b : binders)
      if (b.so) so_scope_.push_back({b.name, b.kind});
    Formula body = dotted ? formula() : item();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      if (it->so) {
        so_scope_.pop_back();
        body = Formula::forall_so(it->name, it->kind, body);
      } else {
        body = Formula::forall_fo(it->name, body);
      }
    }
    return body;
  }

  std::vector<FoTerm> term_list() {
    std::vector<FoTerm> args;
    if (eat(")")) return args;
    args.push_back(term());
    while (eat(",")) args.push_back(term());
    expect(")");
    return args;
  }

  FoTerm term() {
    skip();
    auto n = ident();
    if (!n) fail("expected a first-order term");
    if (upper(*n)) fail("first-order terms start with a lowercase letter or digit");
    if (eat("(")) return FoTerm::fun(*n, term_list());
    if (std::isdigit(static_cast<unsigned char>((*n)[0]))) return FoTerm::fun(*n);
    return FoTerm::var(*n);
  }

  Formula atom() {
    skip();
    std::size_t start = pos_;
    auto n = ident();
    if (!n) fail("expected a formula");
    if (upper(*n)) {
      VarKind k = kind_annotation();
      bool annotated = src_.substr(start, pos_ - start).find(':') != std::string_view::npos;
      // Unannotated occurrences take the kind of the nearest binder with that name.
      if (!annotated) {
        for (auto it = so_scope_.rbegin(); it != so_scope_.rend(); ++it)
          if (it->first == *n) {
            k = it->second;
            break;
          }
      } else {
        for (auto it = so_scope_.rbegin(); it != so_scope_.rend(); ++it)
          if (it->first == *n) {
            if (it->second != k) fail("kind mismatch for " + *n);
            break;
          }
      }
      std::vector<FoTerm> args;
      if (eat("(")) args = term_list();
      return Formula::atom(*n, k, std::move(args));
    }
    pos_ = start;
    FoTerm t = term();
    if (eat("=")) {
      FoTerm v = term();
      // u = v is ∀Y(Y(u) → Y(v)).
      return Formula::forall_so("Y", VarKind::Ordinary, 1,
                                Formula::arrow(Formula::atom("Y", VarKind::Ordinary, {t}),
                                               Formula::atom("Y", VarKind::Ordinary, {v})));
    }
    if (!t.variable || !t.args.empty()) {
      if (t.args.empty() && std::isdigit(static_cast<unsigned char>(t.name[0]))) fail("a term is not a formula");
      return Formula::symbol(t.name, t.args);
    }
    return Formula::symbol(t.name);
  }
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse_all(); }
inline FoTerm parse_fo_term(std::string_view text) { return detail::FormulaParser(text).parse_term_all(); }

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline std::string render_atom(const Formula& f) {
  std::string s = f.name();
  if (!f.is_symbol()) s += kind_suffix(f.var_kind());
  if (!f.args().empty()) {
    s += "(";
    for (std::size_t i = 0; i < f.args().size(); ++i) s += (i ? ", " : "") + render_fo(f.args()[i]);
    s += ")";
  }
  return s;
}

inline std::string render_formula_rec(const Formula& f, bool tight) {
  switch (f.kind()) {
    case FKind::Bot:
      return "bot";
    case FKind::Atom:
      return render_atom(f);
    case FKind::Arrow: {
      std::string s;
      if (f.right().is(FKind::Bot)) {
        s = "~" + render_formula_rec(f.left(), true);
        return s;
      }
      s = render_formula_rec(f.left(), true) + " -> " + render_formula_rec(f.right(), false);
      return tight ? "(" + s + ")" : s;
    }
    case FKind::ForallFO:
    case FKind::ForallSO: {
      std::string s = "forall " + f.name();
      if (f.is(FKind::ForallSO)) s += kind_suffix(f.var_kind());
      s += ". " + render_formula_rec(f.body(), false);
      return tight ? "(" + s + ")" : s;
    }
  }
  return "?";
}

}  // namespace detail

inline std::string render_formula(const Formula& f) { return detail::render_formula_rec(f, false); }

}  // namespace lamlab
