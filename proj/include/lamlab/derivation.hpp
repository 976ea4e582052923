#pragma once

// Typing derivations for AF2, AF2⊥, C2, M2, FD2 and M2μ, a node-local
// checker, an S-expression file format and constructors that build
// conclusions from premises.

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "equations.hpp"
#include "syntax.hpp"
#include "translate.hpp"

namespace lamlab {

enum class System { AF2, AF2Bot, C2, M2, FD2, M2Mu };

inline const char* system_name(System s) {
  switch (s) {
    case System::AF2: return "AF2";
    case System::AF2Bot: return "AF2bot";
    case System::C2: return "C2";
    case System::M2: return "M2";
    case System::FD2: return "FD2";
    case System::M2Mu: return "M2mu";
  }
  return "?";
}

inline System parse_system(const std::string& s) {
  for (System x : {System::AF2, System::AF2Bot, System::C2, System::M2, System::FD2, System::M2Mu})
    if (s == system_name(x)) return x;
  throw std::invalid_argument("unknown system: " + s + " (expected AF2, AF2bot, C2, M2, FD2 or M2mu)");
}

inline Calculus system_calculus(System s) {
  switch (s) {
    case System::C2:
    case System::M2: return Calculus::LambdaC;
    case System::FD2:
    case System::M2Mu: return Calculus::LambdaMu;
    default: return Calculus::Lambda;
  }
}

struct Labeled {
  std::string label;
  Formula type;
};

using Context = std::vector<Labeled>;

struct Sequent {
  Context context;
  Term subject;
  Formula type;
  /// μ-labeled formulas; empty outside FD2 and M2μ.
  Context delta;
};

struct Witness {
  std::optional<FoTerm> term;       // rule 5
  std::optional<Template> formula;  // rules 7, 7′, 7″; rule 8 (one parameter)
  std::optional<FoTerm> u, v;       // rule 8
};

struct Derivation {
  std::string rule;
  Witness witness;
  std::vector<Derivation> premises;
  Sequent conclusion;
};

struct CheckResult {
  bool ok = true;
  std::string node;  // "root", "root.0.1", …
  std::string rule;
  std::string reason;
  std::size_t nodes = 0;
};

// ---------------------------------------------------------------------------
// Contexts

inline const Labeled* find_label(const Context& c, const std::string& x) {
  for (const auto& l : c)
    if (l.label == x) return &l;
  return nullptr;
}

inline Context without_label(const Context& c, const std::string& x) {
  Context out;
  for (const auto& l : c)
    if (l.label != x) out.push_back(l);
  return out;
}

/// a ⊆ b as labeled sets.
inline bool context_subset(const Context& a, const Context& b) {
  for (const auto& l : a) {
    const Labeled* m = find_label(b, l.label);
    if (!m || !alpha_equal(m->type, l.type)) return false;
  }
  return true;
}

inline bool context_equal(const Context& a, const Context& b) { return context_subset(a, b) && context_subset(b, a); }

inline bool so_free_in(const Context& c, const SoVar& X) {
  for (const auto& l : c)
    if (has_free_so(l.type, X)) return true;
  return false;
}

inline bool fo_free_in(const Context& c, const std::string& x) {
  for (const auto& l : c)
    if (has_free_fo(l.type, x)) return true;
  return false;
}

/// ∀X{¬¬X → X} with X of the given kind.
inline Formula peirce_type(VarKind k) {
  Formula X = Formula::atom("X", k);
  return Formula::forall_so("X", k, 0, Formula::arrow(neg(neg(X)), X));
}

// ---------------------------------------------------------------------------
// Checker

namespace detail {

struct DerivationError {
  std::string reason;
};

inline bool rule_admitted(System s, const std::string& r) {
  static const std::vector<std::string> base{"1", "2", "3", "4", "5", "6", "7", "8"};
  if (std::find(base.begin(), base.end(), r) != base.end()) return true;
  switch (s) {
    case System::AF2Bot: return r == "6'" || r == "7'";
    case System::C2: return r == "0";
    case System::M2: return r == "0'" || r == "6''" || r == "7''";
    case System::FD2: return r == "9";
    case System::M2Mu: return r == "9" || r == "6''" || r == "7''";
    default: return false;
  }
}

inline std::vector<VarKind> kinds_of(System s) {
  switch (s) {
    case System::AF2Bot: return {VarKind::Ordinary, VarKind::Bot};
    case System::M2:
    case System::M2Mu: return {VarKind::Ordinary, VarKind::Classical};
    default: return {VarKind::Ordinary};
  }
}

inline void check_kinds(System s, const Formula& f, const char* where) {
  auto allowed = kinds_of(s);
  for (VarKind k : {VarKind::Bot, VarKind::Classical, VarKind::Bullet}) {
    if (std::find(allowed.begin(), allowed.end(), k) != allowed.end()) continue;
    if (has_kind(f, k))
      throw DerivationError{std::string(where) + " uses a variable kind (" + kind_suffix(k) + ") not available in " +
                            system_name(s)};
  }
}

inline void check_context(System s, const Context& c, const char* which) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    check_kinds(s, c[i].type, which);
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (c[i].label == c[j].label && !alpha_equal(c[i].type, c[j].type))
        throw DerivationError{std::string(which) + ": label " + c[i].label + " carries two formulas"};
  }
}

inline void need(bool cond, const std::string& reason) {
  if (!cond) throw DerivationError{reason};
}

inline bool has_delta(System s) { return s == System::FD2 || s == System::M2Mu; }

inline void check_node(const Derivation& d, System sys, const EquationSet& E) {
  const Sequent& c = d.conclusion;
  need(rule_admitted(sys, d.rule), "rule " + d.rule + " is not a rule of " + system_name(sys));
  need(c.subject && c.type, "incomplete conclusion");
  check_context(sys, c.context, "context");
  check_context(sys, c.delta, "mu-context");
  check_kinds(sys, c.type, "type");
  if (d.witness.formula) check_kinds(sys, d.witness.formula->body, "witness formula");
  need(has_delta(sys) || c.delta.empty(), std::string("mu-contexts are empty in ") + system_name(sys));
  std::string bad = calculus_violation(c.subject, system_calculus(sys));
  need(bad.empty(), "subject: " + bad);

  auto premises = [&](std::size_t n) {
    need(d.premises.size() == n, "rule " + d.rule + " takes " + std::to_string(n) + " premise(s), got " +
                                     std::to_string(d.premises.size()));
  };
  auto same_contexts = [&](const Sequent& p) {
    need(context_equal(p.context, c.context), "premise context differs from the conclusion's");
    need(context_equal(p.delta, c.delta), "premise mu-context differs from the conclusion's");
  };
  auto same_subject = [&](const Sequent& p) {
    need(alpha_equal(p.subject, c.subject), "premise subject differs from the conclusion's");
  };

  const std::string& r = d.rule;
  if (r == "1") {
    premises(0);
    need(c.subject.is(Kind::Var), "rule 1 needs a variable subject");
    const Labeled* l = find_label(c.context, c.subject.name());
    need(l != nullptr, c.subject.name() + " is not declared in the context");
    need(alpha_equal(l->type, c.type), "the type of " + c.subject.name() + " in the context differs");
  } else if (r == "2") {
    premises(1);
    const Sequent& p = d.premises[0].conclusion;
    need(c.subject.is(Kind::Lam), "rule 2 needs an abstraction");
    need(c.type.is(FKind::Arrow), "rule 2 needs an arrow type");
    const std::string& x = c.subject.name();
    need(alpha_equal(p.subject, c.subject.body()), "premise subject is not the body of the abstraction");
    need(alpha_equal(p.type, c.type.right()), "premise type is not the target of the arrow");
    need(find_label(c.context, x) == nullptr, "the bound variable " + x + " is already declared");
    const Labeled* lx = find_label(p.context, x);
    Context rest = without_label(p.context, x);
    if (has_delta(sys)) {
      // Weakening: the premise may omit x:A and the conclusion may add declarations.
      need(!lx || alpha_equal(lx->type, c.type.left()), "premise declares " + x + " with another type");
      need(lx || !p.subject.has_free(x), x + " occurs in the body but is not declared");
      need(context_subset(rest, c.context), "premise context is not contained in the conclusion's");
      need(context_equal(p.delta, c.delta), "premise mu-context differs from the conclusion's");
    } else {
      need(lx && alpha_equal(lx->type, c.type.left()), "premise context must declare " + x + " with the source type");
      need(context_equal(rest, c.context), "premise context differs from the conclusion's");
      need(context_equal(p.delta, c.delta), "premise mu-context differs from the conclusion's");
    }
  } else if (r == "3") {
    premises(2);
    const Sequent& p = d.premises[0].conclusion;
    const Sequent& q = d.premises[1].conclusion;
    need(c.subject.is(Kind::App), "rule 3 needs an application");
    need(alpha_equal(p.subject, c.subject.fun()), "first premise subject is not the function");
    need(alpha_equal(q.subject, c.subject.arg()), "second premise subject is not the argument");
    need(p.type.is(FKind::Arrow), "first premise type is not an arrow");
    need(alpha_equal(p.type.right(), c.type), "arrow target differs from the conclusion type");
    need(alpha_equal(p.type.left(), q.type), "argument type differs from the arrow source");
    same_contexts(p);
    same_contexts(q);
  } else if (r == "4") {
    premises(1);
    const Sequent& p = d.premises[0].conclusion;
    same_subject(p);
    same_contexts(p);
    need(c.type.is(FKind::ForallFO), "rule 4 needs a first-order quantifier");
    need(alpha_equal(p.type, c.type.body()), "premise type is not the quantified body");
    const std::string& x = c.type.name();
    need(!fo_free_in(c.context, x) && !fo_free_in(c.delta, x), x + " occurs free in the context");
  } else if (r == "5") {
    premises(1);
    const Sequent& p = d.premises[0].conclusion;
    same_subject(p);
    same_contexts(p);
    need(d.witness.term.has_value(), "rule 5 needs a witness term");
    need(p.type.is(FKind::ForallFO), "premise type is not first-order quantified");
    need(alpha_equal(substitute_fo(p.type.body(), p.type.name(), *d.witness.term), c.type),
         "conclusion is not the instance at " + render_fo(*d.witness.term));
  } else if (r == "6" || r == "6'" || r == "6''") {
    premises(1);
    const Sequent& p = d.premises[0].conclusion;
    same_subject(p);
    same_contexts(p);
    VarKind k = r == "6" ? VarKind::Ordinary : r == "6'" ? VarKind::Bot : VarKind::Classical;
    need(c.type.is(FKind::ForallSO) && c.type.var_kind() == k,
         "rule " + r + " needs a second-order quantifier of kind '" + kind_suffix(k) + "'");
    need(alpha_equal(p.type, c.type.body()), "premise type is not the quantified body");
    SoVar X{c.type.name(), k};
    need(!so_free_in(c.context, X) && !so_free_in(c.delta, X), X.first + " occurs free in the context");
  } else if (r == "7" || r == "7'" || r == "7''") {
    premises(1);
    const Sequent& p = d.premises[0].conclusion;
    same_subject(p);
    same_contexts(p);
    VarKind k = r == "7" ? VarKind::Ordinary : r == "7'" ? VarKind::Bot : VarKind::Classical;
    need(d.witness.formula.has_value(), "rule " + r + " needs a witness formula");
    need(p.type.is(FKind::ForallSO) && p.type.var_kind() == k,
         "premise type is not quantified over a variable of kind '" + std::string(kind_suffix(k)) + "'");
    const Template& G = *d.witness.formula;
    need(G.params.size() == p.type.arity(), "witness formula has " + std::to_string(G.params.size()) +
                                                " parameter(s), the variable has arity " + std::to_string(p.type.arity()));
    if (k == VarKind::Bot) need(classify_shape(G.body).is_bot_type, "witness formula is not a bot-type");
    if (k == VarKind::Classical) need(classify_shape(G.body).is_classical_type, "witness formula is not a classical type");
    Formula expect = substitute_so(p.type.body(), {p.type.name(), k}, G);
    need(alpha_equal(expect, c.type), "conclusion is not the instance of the premise");
  } else if (r == "8") {
    premises(1);
    const Sequent& p = d.premises[0].conclusion;
    same_subject(p);
    same_contexts(p);
    need(d.witness.formula && d.witness.formula->params.size() == 1 && d.witness.u && d.witness.v,
         "rule 8 needs A with one parameter and the terms u, v");
    const Template& A = *d.witness.formula;
    need(alpha_equal(instantiate_template(A, {*d.witness.u}), p.type), "premise type is not A[u/x]");
    need(alpha_equal(instantiate_template(A, {*d.witness.v}), c.type), "conclusion type is not A[v/x]");
    need(eq_equiv(*d.witness.u, *d.witness.v, E).verdict == EqVerdict::Yes, "equation not certified");
  } else if (r == "0" || r == "0'") {
    premises(0);
    need(c.subject.is(Kind::ConstC), "rule " + r + " types the constant C");
    need(alpha_equal(c.type, peirce_type(r == "0" ? VarKind::Ordinary : VarKind::Classical)),
         "C has the type forall X. ~~X -> X" + std::string(r == "0" ? "" : " over a classical X"));
  } else if (r == "9") {
    premises(1);
    const Sequent& p = d.premises[0].conclusion;
    need(c.subject.is(Kind::Mu), "rule 9 needs a mu-abstraction");
    const std::string& beta = c.subject.name();
    const std::string& alpha = c.subject.named();
    need(alpha_equal(p.subject, c.subject.body()), "premise subject is not the named term");
    need(context_equal(p.context, c.context), "premise context differs from the conclusion's");
    const Formula& A = p.type;
    const Formula& B = c.type;
    const Labeled* lb = find_label(p.delta, beta);
    if (lb) need(alpha_equal(lb->type, B), "premise declares " + beta + " with another type");
    else need(B.is(FKind::Bot) || !p.subject.has_free_mu(beta), beta + " is named in the body but not declared");
    Context expect = without_label(p.delta, beta);
    if (!A.is(FKind::Bot)) {
      const Labeled* la = find_label(expect, alpha);
      if (la) need(alpha_equal(la->type, A), alpha + " already carries another formula");
      else expect.push_back({alpha, A});
    }
    // Weakening: the conclusion may declare more.
    need(context_subset(expect, c.delta), "conclusion mu-context misses a declaration");
    need(find_label(c.delta, beta) == nullptr || beta == alpha, beta + " is bound and cannot stay declared");
  } else {
    throw DerivationError{"unknown rule " + r};
  }
}

inline void check_rec(const Derivation& d, System sys, const EquationSet& E, const std::string& path, CheckResult& res) {
  ++res.nodes;
  try {
    check_node(d, sys, E);
  } catch (const DerivationError& e) {
    res = CheckResult{false, path, d.rule, e.reason, res.nodes};
    return;
  } catch (const std::invalid_argument& e) {
    res = CheckResult{false, path, d.rule, e.what(), res.nodes};
    return;
  }
  for (std::size_t i = 0; i < d.premises.size() && res.ok; ++i)
    check_rec(d.premises[i], sys, E, path + "." + std::to_string(i), res);
}

}  // namespace detail

inline CheckResult check_derivation(const Derivation& d, System sys, const EquationSet& E = {}) {
  CheckResult res;
  detail::check_rec(d, sys, E, "root", res);
  return res;
}

// ---------------------------------------------------------------------------
// Constructors: the conclusion is computed from the premises.

namespace build {

inline Derivation axiom(const Context& g, const std::string& x, const Context& delta = {}) {
  const Labeled* l = find_label(g, x);
  if (!l) throw std::invalid_argument(x + " is not declared");
  return Derivation{"1", {}, {}, Sequent{g, Term::var(x), l->type, delta}};
}

inline Derivation constant_c(const Context& g, VarKind k = VarKind::Ordinary) {
  return Derivation{k == VarKind::Ordinary ? "0" : "0'", {}, {}, Sequent{g, Term::constant_c(), peirce_type(k), {}}};
}

inline Derivation lambda(const Derivation& p, const std::string& x) {
  const Sequent& s = p.conclusion;
  const Labeled* l = find_label(s.context, x);
  if (!l) throw std::invalid_argument(x + " is not declared");
  return Derivation{"2", {}, {p}, Sequent{without_label(s.context, x), Term::lam(x, s.subject), Formula::arrow(l->type, s.type), s.delta}};
}

inline Derivation apply(const Derivation& p, const Derivation& q) {
  const Sequent& s = p.conclusion;
  if (!s.type.is(FKind::Arrow)) throw std::invalid_argument("not an arrow");
  return Derivation{"3", {}, {p, q}, Sequent{s.context, Term::app(s.subject, q.conclusion.subject), s.type.right(), s.delta}};
}

inline Derivation gen_fo(const Derivation& p, const std::string& x) {
  const Sequent& s = p.conclusion;
  return Derivation{"4", {}, {p}, Sequent{s.context, s.subject, Formula::forall_fo(x, s.type), s.delta}};
}

inline Derivation inst_fo(const Derivation& p, const FoTerm& u) {
  const Sequent& s = p.conclusion;
  if (!s.type.is(FKind::ForallFO)) throw std::invalid_argument("not first-order quantified");
  Witness w;
  w.term = u;
  return Derivation{"5", w, {p}, Sequent{s.context, s.subject, substitute_fo(s.type.body(), s.type.name(), u), s.delta}};
}

inline const char* so_rule(bool intro, VarKind k) {
  switch (k) {
    case VarKind::Bot: return intro ? "6'" : "7'";
    case VarKind::Classical: return intro ? "6''" : "7''";
    default: return intro ? "6" : "7";
  }
}

inline Derivation gen_so(const Derivation& p, const std::string& X, VarKind k = VarKind::Ordinary) {
  const Sequent& s = p.conclusion;
  return Derivation{so_rule(true, k), {}, {p}, Sequent{s.context, s.subject, Formula::forall_so(X, k, s.type), s.delta}};
}

inline Derivation inst_so(const Derivation& p, const Template& G) {
  const Sequent& s = p.conclusion;
  if (!s.type.is(FKind::ForallSO)) throw std::invalid_argument("not second-order quantified");
  Witness w;
  w.formula = G;
  Formula t = substitute_so(s.type.body(), {s.type.name(), s.type.var_kind()}, G);
  return Derivation{so_rule(false, s.type.var_kind()), w, {p}, Sequent{s.context, s.subject, t, s.delta}};
}

/// Rule 8 from Γ ⊢ t : A[u/x] to Γ ⊢ t : A[v/x].
inline Derivation rewrite(const Derivation& p, const Template& A, const FoTerm& u, const FoTerm& v) {
  const Sequent& s = p.conclusion;
  Witness w;
  w.formula = A;
  w.u = u;
  w.v = v;
  return Derivation{"8", w, {p}, Sequent{s.context, s.subject, instantiate_template(A, {v}), s.delta}};
}

/// Rule 9: from t : A, β:B, Δ to μβ[α]t : B, α:A, Δ. B is read from Δ, or ⊥ when β is undeclared.
inline Derivation name(const Derivation& p, const std::string& beta, const std::string& alpha) {
  const Sequent& s = p.conclusion;
  const Labeled* lb = find_label(s.delta, beta);
  Formula B = lb ? lb->type : Formula::bot();
  Context delta = without_label(s.delta, beta);
  if (!s.type.is(FKind::Bot) && !find_label(delta, alpha)) delta.push_back({alpha, s.type});
  return Derivation{"9", {}, {p}, Sequent{s.context, Term::mu(beta, alpha, s.subject), B, delta}};
}

}  // namespace build

// ---------------------------------------------------------------------------
// File format
//
//   (rule <name> <witness>* (premises <node>*) (conclusion <sequent>))
//   witness  := (term "u") | (formula (x …) "G") | (eq "u" "v")
//   sequent  := (context (x "A")*) (subject "t") (type "A") (delta (a "B")*)?
//
// Formulas and terms are quoted strings in the usual concrete syntax.

struct DerivationSyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SExpr {
  bool list = false;
  bool quoted = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
};

namespace detail {

class SExprReader {
 public:
  explicit SExprReader(std::string_view s) : s_(s) {}

  SExpr read_one() {
    SExpr e = read();
    skip();
    if (pos_ < s_.size()) fail("trailing input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;

  [[noreturn]] void fail(const std::string& m) const {
    throw DerivationSyntaxError("line " + std::to_string(line_) + ": " + m);
  }

  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '\n') ++line_;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    SExpr e;
    e.line = line_;
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      e.list = true;
      for (;;) {
        skip();
        if (pos_ >= s_.size()) fail("unclosed parenthesis");
        if (s_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '"') {
      ++pos_;
      e.quoted = true;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        if (s_[pos_] == '\n') ++line_;
        e.atom += s_[pos_++];
      }
      if (pos_ >= s_.size()) fail("unclosed string");
      ++pos_;
      return e;
    }
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' && s_[pos_] != ')')
      e.atom += s_[pos_++];
    return e;
  }
};

inline std::string at(const SExpr& e) { return "line " + std::to_string(e.line) + ": "; }

inline const std::string& head(const SExpr& e) {
  static const std::string none;
  return e.list && !e.items.empty() && !e.items[0].list ? e.items[0].atom : none;
}

inline const std::string& text_of(const SExpr& e, const char* what) {
  if (e.list) throw DerivationSyntaxError(at(e) + "expected " + what);
  return e.atom;
}

template <class F>
auto wrap(const SExpr& e, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FormulaError& x) {
    throw DerivationSyntaxError(at(e) + x.what());
  } catch (const ParseError& x) {
    throw DerivationSyntaxError(at(e) + x.what());
  }
}

inline Context read_context(const SExpr& e) {
  Context c;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const SExpr& item = e.items[i];
    if (!item.list || item.items.size() != 2) throw DerivationSyntaxError(at(item) + "expected (label \"formula\")");
    c.push_back({text_of(item.items[0], "a label"),
                 wrap(item, [&] { return parse_formula(text_of(item.items[1], "a formula")); })});
  }
  return c;
}

inline Sequent read_sequent(const SExpr& e, Calculus calc) {
  Sequent s;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const SExpr& part = e.items[i];
    const std::string& h = head(part);
    if (h == "context") s.context = read_context(part);
    else if (h == "delta") s.delta = read_context(part);
    else if (h == "subject" && part.items.size() == 2)
      s.subject = wrap(part, [&] { return parse_term(text_of(part.items[1], "a term"), calc); });
    else if (h == "type" && part.items.size() == 2)
      s.type = wrap(part, [&] { return parse_formula(text_of(part.items[1], "a formula")); });
    else throw DerivationSyntaxError(at(part) + "unknown sequent part '" + h + "'");
  }
  if (!s.subject || !s.type) throw DerivationSyntaxError(at(e) + "a sequent needs a subject and a type");
  return s;
}

inline Derivation read_node(const SExpr& e, Calculus calc) {
  if (head(e) != "rule" || e.items.size() < 2) throw DerivationSyntaxError(at(e) + "expected (rule <name> …)");
  Derivation d;
  d.rule = text_of(e.items[1], "a rule name");
  bool have_conclusion = false;
  for (std::size_t i = 2; i < e.items.size(); ++i) {
    const SExpr& part = e.items[i];
    const std::string& h = head(part);
    if (h == "premises") {
      for (std::size_t k = 1; k < part.items.size(); ++k) d.premises.push_back(read_node(part.items[k], calc));
    } else if (h == "conclusion") {
      d.conclusion = read_sequent(part, calc);
      have_conclusion = true;
    } else if (h == "term" && part.items.size() == 2) {
      d.witness.term = wrap(part, [&] { return parse_fo_term(text_of(part.items[1], "a term")); });
    } else if (h == "eq" && part.items.size() == 3) {
      d.witness.u = wrap(part, [&] { return parse_fo_term(text_of(part.items[1], "a term")); });
      d.witness.v = wrap(part, [&] { return parse_fo_term(text_of(part.items[2], "a term")); });
    } else if (h == "formula" && part.items.size() == 3 && part.items[1].list) {
      Template t;
      for (const auto& p : part.items[1].items) t.params.push_back(text_of(p, "a parameter"));
      t.body = wrap(part, [&] { return parse_formula(text_of(part.items[2], "a formula")); });
      d.witness.formula = t;
    } else {
      throw DerivationSyntaxError(at(part) + "unknown node part '" + h + "'");
    }
  }
  if (!have_conclusion) throw DerivationSyntaxError(at(e) + "node without a conclusion");
  return d;
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void write_context(std::ostream& os, const char* tag, const Context& c) {
  os << "(" << tag;
  for (const auto& l : c) os << " (" << l.label << " " << quote(render_formula(l.type)) << ")";
  os << ")";
}

inline void write_node(std::ostream& os, const Derivation& d, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  os << pad << "(rule " << d.rule;
  if (d.witness.term) os << " (term " << quote(render_fo(*d.witness.term)) << ")";
  if (d.witness.formula) {
    os << " (formula (";
    for (std::size_t i = 0; i < d.witness.formula->params.size(); ++i) os << (i ? " " : "") << d.witness.formula->params[i];
    os << ") " << quote(render_formula(d.witness.formula->body)) << ")";
  }
  if (d.witness.u && d.witness.v) os << " (eq " << quote(render_fo(*d.witness.u)) << " " << quote(render_fo(*d.witness.v)) << ")";
  os << "\n" << pad << "  (premises";
  for (const auto& p : d.premises) {
    os << "\n";
    write_node(os, p, indent + 4);
  }
  os << ")\n" << pad << "  (conclusion ";
  write_context(os, "context", d.conclusion.context);
  os << "\n" << pad << "    (subject " << quote(render_term(d.conclusion.subject)) << ")";
  os << "\n" << pad << "    (type " << quote(render_formula(d.conclusion.type)) << ")";
  if (!d.conclusion.delta.empty()) {
    os << "\n" << pad << "    ";
    write_context(os, "delta", d.conclusion.delta);
  }
  os << "))";
}

}  // namespace detail

inline Derivation parse_derivation(std::string_view text, Calculus calc = Calculus::Lambda) {
  SExpr e = detail::SExprReader(text).read_one();
  return detail::read_node(e, calc);
}

inline std::string render_derivation(const Derivation& d) {
  std::ostringstream os;
  detail::write_node(os, d, 0);
  os << "\n";
  return os.str();
}

inline std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += derivation_size(p);
  return n;
}

}  // namespace lamlab
