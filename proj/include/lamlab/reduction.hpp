#pragma once

// Head reduction, leftmost-outermost normalization and fuel-bounded
// β-equivalence.  One engine serves the pure, directed and λC calculi; the
// RuleSet picks which head redexes are contracted.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "syntax.hpp"
#include "term.hpp"

namespace lamlab {

enum class Outcome { HeadNormalForm, NormalForm, FuelExhausted };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::HeadNormalForm: return "HeadNormalForm";
    case Outcome::NormalForm: return "NormalForm";
    case Outcome::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

/// Position path: 'l' enters a λ body, 'f' a function, 'a' an argument, 'm' a μ body.
struct Step {
  std::string position;
  std::string rule;
};

inline std::string position_text(const std::string& p) { return p.empty() ? "root" : p; }

struct ReductionTrace {
  std::vector<Step> steps;
  std::size_t count = 0;
  Outcome outcome = Outcome::HeadNormalForm;
  /// Term after each step, filled only when recording was requested.
  std::vector<Term> terms;

  void add(std::string position, std::string rule) {
    steps.push_back(Step{std::move(position), std::move(rule)});
    ++count;
  }
};

struct Reduction {
  Term term;
  ReductionTrace trace;
  bool exhausted() const { return trace.outcome == Outcome::FuelExhausted; }
};

struct RuleSet {
  bool beta = true;
  bool box = false;      // [□]-redexes of the directed calculus
  bool control = false;  // rule (2) for C
};

inline constexpr std::size_t default_fuel = 100000;

// ---------------------------------------------------------------------------
// Box contraction

/// One [□]-step on a box, by cases on its director.
inline Term contract_box(const Term& b) {
  if (!b.is(Kind::Box)) throw std::invalid_argument("contract_box: not a box");
  const Term& t = b.director();
  const auto& s = b.substitution();
  switch (t.kind()) {
    case Kind::Var:
      for (const auto& [x, a] : s)
        if (x == t.name()) return a;
      return t;
    case Kind::Lam: {
      const std::string& x = t.name();
      bool clash = std::any_of(s.begin(), s.end(), [&](const BoxBinding& e) { return e.second.has_free(x); });
      std::string y = x;
      if (clash) y = fresh_name(x, [&](const std::string& c) { return b.has_free(c) || c == x; });
      std::vector<BoxBinding> inner;
      for (const auto& e : s)
        if (e.first != x) inner.push_back(e);
      inner.emplace_back(x, Term::var(y));
      return Term::lam(y, Term::box(t.body(), std::move(inner)));
    }
    case Kind::App:
      return Term::app(Term::box(t.fun(), s), Term::box(t.arg(), s));
    default:
      throw std::invalid_argument("contract_box: director is not a pure term");
  }
}

// ---------------------------------------------------------------------------
// Head reduction: a spine machine keeping the λ-prefix and the argument stack.

namespace detail {

struct Machine {
  std::vector<std::string> binders;
  Term head;
  std::vector<Term> stack;  // back() is the first argument

  explicit Machine(const Term& t) : head(t) {}

  Term rebuild() const {
    Term t = head;
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) t = Term::app(t, *it);
    return lams(binders, t);
  }

  std::string prefix() const { return std::string(binders.size(), 'l'); }
};

}  // namespace detail

inline Reduction head_reduce_with(const Term& t, std::size_t fuel, RuleSet rules, bool record = false) {
  detail::Machine m(t);
  ReductionTrace trace;
  auto step = [&](std::string position, const char* rule) {
    trace.add(std::move(position), rule);
    if (record) trace.terms.push_back(m.rebuild());
  };
  for (;;) {
    const Term& h = m.head;
    if (h.is(Kind::App)) {
      m.stack.push_back(h.arg());
      Term f = h.fun();
      m.head = f;
      continue;
    }
    if (h.is(Kind::Lam) && m.stack.empty()) {
      m.binders.push_back(h.name());
      Term body = h.body();
      m.head = body;
      continue;
    }
    bool redex = (rules.beta && h.is(Kind::Lam)) || (rules.box && h.is(Kind::Box)) ||
                 (rules.control && h.is(Kind::ConstC) && !m.stack.empty());
    if (!redex) break;
    if (trace.count >= fuel) {
      trace.outcome = Outcome::FuelExhausted;
      return {m.rebuild(), std::move(trace)};
    }
    if (h.is(Kind::Lam)) {
      std::string pos = m.prefix() + std::string(m.stack.size() - 1, 'f');
      Term arg = m.stack.back();
      m.stack.pop_back();
      m.head = substitute(h.body(), h.name(), arg);
      step(std::move(pos), "beta");
    } else if (h.is(Kind::Box)) {
      std::string pos = m.prefix() + std::string(m.stack.size(), 'f');
      m.head = contract_box(h);
      step(std::move(pos), "box");
    } else {
      // (C) t t1...tn -> (t) λx.(x) t1...tn
      std::string pos = m.prefix();
      Term target = m.stack.back();
      m.stack.pop_back();
      std::vector<Term> rest(m.stack.rbegin(), m.stack.rend());
      m.stack.clear();
      std::string x = fresh_name("x", [&](const std::string& c) {
        for (const auto& r : rest)
          if (r.has_free(c)) return true;
        return false;
      });
      m.head = target;
      m.stack.push_back(Term::lam(x, apply_args(Term::var(x), rest)));
      step(std::move(pos), "C");
    }
  }
  trace.outcome = Outcome::HeadNormalForm;
  return {m.rebuild(), std::move(trace)};
}

/// Pure head reduction: contracts (λx u)v in λx̄.(λx u)v v̄ until head normal form.
inline Reduction head_reduce(const Term& t, std::size_t fuel = default_fuel, bool record = false) {
  return head_reduce_with(t, fuel, RuleSet{}, record);
}

/// n(u,v) for the first k head steps: the term reached after at most k steps.
inline Reduction head_reduce_steps(const Term& t, std::size_t k, RuleSet rules = {}) {
  return head_reduce_with(t, k, rules);
}

// ---------------------------------------------------------------------------
// Normalization (leftmost-outermost)

namespace detail {

inline Term normalize_rec(const Term& t, std::size_t fuel, RuleSet rules, const std::string& path,
                          ReductionTrace& trace, bool& exhausted) {
  std::size_t left = fuel > trace.count ? fuel - trace.count : 0;
  Reduction r = head_reduce_with(t, left, rules);
  for (auto& s : r.trace.steps) trace.add(path + s.position, s.rule);
  if (r.exhausted()) {
    exhausted = true;
    return r.term;
  }
  // r.term = λx̄.(h) ā with h inert under `rules`.
  std::vector<std::string> binders;
  Term body = r.term;
  while (body.is(Kind::Lam)) {
    binders.push_back(body.name());
    body = body.body();
  }
  auto [head, args] = spine(body);
  std::string prefix = path + std::string(binders.size(), 'l');
  if (head.is(Kind::Mu)) {
    head = Term::mu(head.name(), head.named(),
                    normalize_rec(head.body(), fuel, rules, prefix + std::string(args.size(), 'f') + "m", trace,
                                  exhausted));
  } else if (head.is(Kind::Lam) || head.is(Kind::Box)) {
    // Inert redex under the chosen rules: normalize inside the box arguments only.
    if (head.is(Kind::Box)) {
      std::vector<BoxBinding> s;
      for (const auto& [x, a] : head.substitution())
        s.emplace_back(x, exhausted ? a : normalize_rec(a, fuel, rules, prefix, trace, exhausted));
      head = Term::box(head.director(), std::move(s));
    } else {
      head = Term::lam(head.name(),
                       normalize_rec(head.body(), fuel, rules, prefix + std::string(args.size(), 'f') + "l",
                                     trace, exhausted));
    }
  }
  for (std::size_t i = 0; i < args.size() && !exhausted; ++i) {
    std::string p = prefix + std::string(args.size() - 1 - i, 'f') + "a";
    if (args[i].is(Kind::Stack)) continue;
    args[i] = normalize_rec(args[i], fuel, rules, p, trace, exhausted);
  }
  return lams(binders, apply_args(head, args));
}

}  // namespace detail

namespace detail {

/// One leftmost-outermost step, in the same order as normalize_rec.
inline std::optional<Term> lo_step(const Term& t, RuleSet rules, const std::string& path, ReductionTrace& trace) {
  Reduction r = head_reduce_with(t, 1, rules);
  if (r.trace.count == 1) {
    trace.add(path + r.trace.steps[0].position, r.trace.steps[0].rule);
    return r.term;
  }
  std::vector<std::string> binders;
  Term body = t;
  while (body.is(Kind::Lam)) {
    binders.push_back(body.name());
    body = body.body();
  }
  auto [head, args] = spine(body);
  std::string prefix = path + std::string(binders.size(), 'l');
  std::string head_path = prefix + std::string(args.size(), 'f');
  if (head.is(Kind::Mu)) {
    if (auto inner = lo_step(head.body(), rules, head_path + "m", trace))
      return lams(binders, apply_args(Term::mu(head.name(), head.named(), *inner), args));
  } else if (head.is(Kind::Box)) {
    auto s = head.substitution();
    for (auto& e : s) {
      if (auto inner = lo_step(e.second, rules, prefix, trace)) {
        e.second = *inner;
        return lams(binders, apply_args(Term::box(head.director(), s), args));
      }
    }
  } else if (head.is(Kind::Lam)) {
    if (auto inner = lo_step(head.body(), rules, head_path + "l", trace))
      return lams(binders, apply_args(Term::lam(head.name(), *inner), args));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].is(Kind::Stack)) continue;
    if (auto inner = lo_step(args[i], rules, prefix + std::string(args.size() - 1 - i, 'f') + "a", trace)) {
      args[i] = *inner;
      return lams(binders, apply_args(head, args));
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Normalization that keeps the whole term after every step (for printed traces).
inline Reduction normalize_recorded(const Term& t, std::size_t fuel, RuleSet rules = {}) {
  ReductionTrace trace;
  Term cur = t;
  for (;;) {
    if (trace.count >= fuel) {
      // Only exhausted if a step remains.
      ReductionTrace probe;
      if (detail::lo_step(cur, rules, "", probe)) {
        trace.outcome = Outcome::FuelExhausted;
        return {cur, std::move(trace)};
      }
      break;
    }
    auto next = detail::lo_step(cur, rules, "", trace);
    if (!next) break;
    cur = *next;
    trace.terms.push_back(cur);
  }
  trace.outcome = Outcome::NormalForm;
  return {cur, std::move(trace)};
}

inline Reduction normalize_with(const Term& t, std::size_t fuel, RuleSet rules) {
  ReductionTrace trace;
  bool exhausted = false;
  Term nf = detail::normalize_rec(t, fuel, rules, "", trace, exhausted);
  trace.outcome = exhausted ? Outcome::FuelExhausted : Outcome::NormalForm;
  return {nf, std::move(trace)};
}

/// β-normal form by the leftmost-outermost strategy; trace.count is N(t).
inline Reduction normalize(const Term& t, std::size_t fuel = default_fuel) {
  return normalize_with(t, fuel, RuleSet{});
}

inline bool is_beta_normal(const Term& t) {
  switch (t.kind()) {
    case Kind::Lam:
      return is_beta_normal(t.body());
    case Kind::App:
      return !t.fun().is(Kind::Lam) && is_beta_normal(t.fun()) && is_beta_normal(t.arg());
    case Kind::Mu:
      return is_beta_normal(t.body());
    case Kind::Box:
      for (const auto& e : t.substitution())
        if (!is_beta_normal(e.second)) return false;
      return is_beta_normal(t.director());
    default:
      return true;
  }
}

enum class Equivalence { Equal, Distinct, Unknown };

inline const char* equivalence_name(Equivalence e) {
  switch (e) {
    case Equivalence::Equal: return "Equal";
    case Equivalence::Distinct: return "Distinct";
    case Equivalence::Unknown: return "Unknown";
  }
  return "?";
}

/// Equal/Distinct when both sides normalize within fuel, Unknown otherwise.
inline Equivalence beta_equiv(const Term& u, const Term& v, std::size_t fuel = default_fuel) {
  if (alpha_equal(u, v)) return Equivalence::Equal;
  Reduction a = normalize(u, fuel);
  if (a.exhausted()) return Equivalence::Unknown;
  Reduction b = normalize(v, fuel);
  if (b.exhausted()) return Equivalence::Unknown;
  return alpha_equal(a.term, b.term) ? Equivalence::Equal : Equivalence::Distinct;
}

/// `step <k>: <rule> at <position>: <term>` lines; needs a recorded trace.
inline std::vector<std::string> trace_lines(const ReductionTrace& trace) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    std::string line = "step " + std::to_string(k + 1) + ": " + trace.steps[k].rule + " at " +
                       position_text(trace.steps[k].position);
    if (k < trace.terms.size()) line += ": " + render_term(trace.terms[k]);
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace lamlab
