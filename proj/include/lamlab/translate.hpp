#pragma once

// Formula translations (g, e, G, ⊥, *, C), the Ω+/Ω− classifier, the
// ⊥-type / classical-type shape predicates and the named formulas.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "formula.hpp"

namespace lamlab {

struct KindViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Translation { G, E, Bot, Star, C, General };

inline const char* translation_name(Translation t) {
  switch (t) {
    case Translation::G: return "g";
    case Translation::E: return "e";
    case Translation::Bot: return "bot";
    case Translation::Star: return "star";
    case Translation::C: return "c";
    case Translation::General: return "G";
  }
  return "?";
}

inline Translation parse_translation(const std::string& s) {
  if (s == "g") return Translation::G;
  if (s == "e") return Translation::E;
  if (s == "bot") return Translation::Bot;
  if (s == "star") return Translation::Star;
  if (s == "c") return Translation::C;
  if (s == "G") return Translation::General;
  throw std::invalid_argument("unknown translation: " + s);
}

struct TranslateParams {
  /// e: arity r per variable name; default_r for the others.
  std::map<std::string, std::size_t> r;
  std::size_t default_r = 2;
  /// G: per-variable formulas ending with ⊥.
  std::map<std::string, Template> templates;
};

namespace detail {

inline void require_only(const Formula& f, std::initializer_list<VarKind> allowed, const char* mode) {
  for (VarKind k : {VarKind::Ordinary, VarKind::Bot, VarKind::Classical, VarKind::Bullet}) {
    if (std::find(allowed.begin(), allowed.end(), k) != allowed.end()) continue;
    if (has_kind(f, k))
      throw KindViolation(std::string("translation ") + mode + " does not accept " +
                          (k == VarKind::Bot ? "bot" : k == VarKind::Classical ? "classical" : k == VarKind::Bullet ? "bullet" : "ordinary") +
                          " variables");
  }
}

/// Rebuild f bottom-up, rewriting atoms with `on_atom` and second-order binders with `on_binder`.
template <class OnAtom, class OnBinder>
Formula rewrite(const Formula& f, OnAtom&& on_atom, OnBinder&& on_binder) {
  switch (f.kind()) {
    case FKind::Bot:
    case FKind::Atom:
      return on_atom(f);
    case FKind::Arrow:
      return Formula::arrow(rewrite(f.left(), on_atom, on_binder), rewrite(f.right(), on_atom, on_binder));
    case FKind::ForallFO:
      return Formula::forall_fo(f.name(), rewrite(f.body(), on_atom, on_binder));
    case FKind::ForallSO:
      return on_binder(f, rewrite(f.body(), on_atom, on_binder));
  }
  return f;
}

inline std::string indexed(const std::string& X, std::size_t i) { return X + "_" + std::to_string(i); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Shape predicates

struct ShapeReport {
  bool is_bot_type = false;
  bool is_classical_type = false;
  /// "bot", or the head variable with its kind suffix ("X:c"), or a predicate symbol.
  std::string ends_with;
};

inline Formula final_atom(const Formula& f) {
  const Formula* cur = &f;
  for (;;) {
    if (cur->is(FKind::Arrow)) cur = &cur->right();
    else if (cur->is(FKind::ForallFO) || cur->is(FKind::ForallSO)) cur = &cur->body();
    else return *cur;
  }
}

inline ShapeReport classify_shape(const Formula& f) {
  ShapeReport r;
  Formula a = final_atom(f);
  if (a.is(FKind::Bot)) {
    r.ends_with = "bot";
    r.is_bot_type = r.is_classical_type = true;
    return r;
  }
  r.ends_with = a.name() + (a.is_symbol() ? "" : kind_suffix(a.var_kind()));
  bool var = !a.is_symbol();
  r.is_bot_type = var && a.var_kind() == VarKind::Bot;
  r.is_classical_type = var && a.var_kind() == VarKind::Classical;
  return r;
}

// ---------------------------------------------------------------------------
// Translations

/// g: ¬ in front of every atomic formula, ⊥ included.
inline Formula translate_g(const Formula& f) {
  detail::require_only(f, {VarKind::Ordinary}, "g");
  return detail::rewrite(
      f, [](const Formula& a) { return neg(a); },
      [](const Formula& q, Formula body) { return Formula::forall_so(q.name(), q.var_kind(), q.arity(), body); });
}

/// G: X(t̄) becomes G_X[t̄/x̄]; ∀X becomes ∀ over the free second-order variables of G_X.
inline Formula translate_general(const Formula& f, const std::map<std::string, Template>& templates) {
  detail::require_only(f, {VarKind::Ordinary}, "G");
  for (const auto& [X, g] : templates)
    if (classify_shape(g.body).ends_with != "bot")
      throw KindViolation("the formula for " + X + " does not end with bot");
  return detail::rewrite(
      f,
      [&](const Formula& a) {
        if (a.is(FKind::Atom) && !a.is_symbol()) {
          auto it = templates.find(a.name());
          if (it != templates.end()) return instantiate_template(it->second, a.args());
        }
        return a;
      },
      [&](const Formula& q, Formula body) {
        auto it = templates.find(q.name());
        if (it == templates.end()) return Formula::forall_so(q.name(), q.var_kind(), q.arity(), body);
        std::set<SoVar> vs = so_free(it->second.body);
        for (auto v = vs.rbegin(); v != vs.rend(); ++v) body = Formula::forall_so(v->first, v->second, body);
        return body;
      });
}

/// e(r): X(t̄) becomes X_1(t̄), …, X_r(t̄) → ⊥.
inline Formula translate_e(const Formula& f, const std::map<std::string, std::size_t>& r, std::size_t default_r) {
  detail::require_only(f, {VarKind::Ordinary}, "e");
  std::set<std::string> names;
  formula_names(f, names);
  std::map<std::string, Template> templates;
  auto add = [&](const std::string& X, std::size_t arity) {
    if (templates.count(X)) return;
    auto it = r.find(X);
    std::size_t k = it == r.end() ? default_r : it->second;
    std::vector<std::string> ps;
    std::vector<FoTerm> args;
    for (std::size_t i = 0; i < arity; ++i) {
      ps.push_back("_x" + std::to_string(i));
      args.push_back(FoTerm::var(ps.back()));
    }
    std::vector<Formula> premises;
    for (std::size_t i = 1; i <= k; ++i) premises.push_back(Formula::atom(detail::indexed(X, i), VarKind::Ordinary, args));
    templates[X] = Template{ps, arrows(premises, Formula::bot())};
  };
  // Collect arities of every second-order variable, bound or free.
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    switch (g.kind()) {
      case FKind::Atom:
        if (!g.is_symbol()) add(g.name(), g.args().size());
        break;
      case FKind::Arrow:
        walk(g.left());
        walk(g.right());
        break;
      case FKind::ForallFO:
        walk(g.body());
        break;
      case FKind::ForallSO:
        add(g.name(), g.arity());
        walk(g.body());
        break;
      default:
        break;
    }
  };
  walk(f);
  for (const auto& [X, t] : templates)
    for (std::size_t i = 1; i <= 64; ++i)
      if (names.count(detail::indexed(X, i)))
        throw KindViolation("e translation: the name " + detail::indexed(X, i) + " is already used");
  // A variable of r = 0 maps to ⊥ alone; its binder then binds nothing.
  Formula out = detail::rewrite(
      f,
      [&](const Formula& a) {
        if (a.is(FKind::Atom) && !a.is_symbol()) return instantiate_template(templates.at(a.name()), a.args());
        return a;
      },
      [&](const Formula& q, Formula body) {
        auto it = r.find(q.name());
        std::size_t k = it == r.end() ? default_r : it->second;
        for (std::size_t i = k; i >= 1; --i) body = Formula::forall_so(detail::indexed(q.name(), i), VarKind::Ordinary, q.arity(), body);
        return body;
      });
  return out;
}

/// ⊥: X becomes X_⊥, ∀X becomes ∀X_⊥; predicate symbols and ⊥ stay.
inline Formula translate_bot(const Formula& f) {
  detail::require_only(f, {VarKind::Ordinary}, "bot");
  return detail::rewrite(
      f,
      [](const Formula& a) {
        if (a.is(FKind::Atom) && !a.is_symbol()) return Formula::atom(a.name(), VarKind::Bot, a.args());
        return a;
      },
      [](const Formula& q, Formula body) { return Formula::forall_so(q.name(), VarKind::Bot, q.arity(), body); });
}

/// *: X_C(t̄) becomes ¬X•(t̄), ∀X_C becomes ∀X•.
inline Formula translate_star(const Formula& f) {
  detail::require_only(f, {VarKind::Ordinary, VarKind::Classical}, "star");
  return detail::rewrite(
      f,
      [](const Formula& a) {
        if (a.is(FKind::Atom) && !a.is_symbol() && a.var_kind() == VarKind::Classical)
          return neg(Formula::atom(a.name(), VarKind::Bullet, a.args()));
        return a;
      },
      [](const Formula& q, Formula body) {
        VarKind k = q.var_kind() == VarKind::Classical ? VarKind::Bullet : q.var_kind();
        return Formula::forall_so(q.name(), k, q.arity(), body);
      });
}

/// C: X becomes X_C, ∀X becomes ∀X_C.
inline Formula translate_c(const Formula& f) {
  detail::require_only(f, {VarKind::Ordinary}, "c");
  return detail::rewrite(
      f,
      [](const Formula& a) {
        if (a.is(FKind::Atom) && !a.is_symbol()) return Formula::atom(a.name(), VarKind::Classical, a.args());
        return a;
      },
      [](const Formula& q, Formula body) { return Formula::forall_so(q.name(), VarKind::Classical, q.arity(), body); });
}

inline Formula translate(const Formula& f, Translation mode, const TranslateParams& params = {}) {
  switch (mode) {
    case Translation::G: return translate_g(f);
    case Translation::E: return translate_e(f, params.r, params.default_r);
    case Translation::Bot: return translate_bot(f);
    case Translation::Star: return translate_star(f);
    case Translation::C: return translate_c(f);
    case Translation::General: return translate_general(f, params.templates);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Ω+ / Ω−

enum class Positivity { Positive, Negative, Both, Neither };

inline const char* positivity_name(Positivity p) {
  switch (p) {
    case Positivity::Positive: return "positive";
    case Positivity::Negative: return "negative";
    case Positivity::Both: return "both";
    case Positivity::Neither: return "neither";
  }
  return "?";
}

namespace detail {

struct Omega {
  bool pos, neg;
};

inline Omega omega(const Formula& f) {
  switch (f.kind()) {
    case FKind::Bot:
    case FKind::Atom:
      return {true, true};
    case FKind::Arrow: {
      Omega a = omega(f.left()), b = omega(f.right());
      return {a.neg && b.pos, a.pos && b.neg};
    }
    case FKind::ForallFO:
      return omega(f.body());
    case FKind::ForallSO: {
      Omega b = omega(f.body());
      return {b.pos, b.neg && !has_free_so(f.body(), {f.name(), f.var_kind()})};
    }
  }
  return {false, false};
}

}  // namespace detail

inline Positivity classify_positivity(const Formula& f) {
  detail::Omega o = detail::omega(f);
  if (o.pos && o.neg) return Positivity::Both;
  if (o.pos) return Positivity::Positive;
  if (o.neg) return Positivity::Negative;
  return Positivity::Neither;
}

// ---------------------------------------------------------------------------
// Named formulas

inline Formula builtin_formula(const std::string& name) {
  if (name == "N[x]") return parse_formula("forall X. X(0), (forall y. X(y) -> X(s(y))) -> X(x)");
  if (name == "N^g[x]") return parse_formula("forall X. ~X(0), (forall y. ~X(y) -> ~X(s(y))) -> ~X(x)");
  if (name == "N^C[x]") return translate_c(builtin_formula("N[x]"));
  if (name == "N_prop") return parse_formula("forall X. X, (X -> X) -> X");
  if (name == "N_prop^C") return translate_c(builtin_formula("N_prop"));
  if (name == "D_counterexample") return parse_formula("forall X. (forall Y. Y -> X) -> X");
  if (name == "storage_type")
    return Formula::forall_fo("x", Formula::arrow(builtin_formula("N^g[x]"), neg(neg(builtin_formula("N[x]")))));
  if (name == "storage_type_M2")
    return Formula::forall_fo("x", Formula::arrow(builtin_formula("N^C[x]"), neg(neg(builtin_formula("N[x]")))));
  throw std::invalid_argument("unknown builtin formula: " + name);
}

inline std::vector<std::string> builtin_formula_names() {
  return {"N[x]", "N^g[x]", "N^C[x]", "N_prop", "N_prop^C", "D_counterexample", "storage_type", "storage_type_M2"};
}

/// N[u]: the integer type at a first-order term.
inline Formula nat_type(const FoTerm& u) { return substitute_fo(builtin_formula("N[x]"), "x", u); }

}  // namespace lamlab
