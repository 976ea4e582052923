#pragma once

// λμ: rules C1, C2, S1, S2, S3, a head strategy, bounded joinability, the
// N_{x,f} grammar with rep/val, and value extraction of λμ integers.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "encodings.hpp"
#include "reduction.hpp"
#include "storage.hpp"

namespace lamlab {

struct PatternMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MuRule { C1, C2, S1, S2, S3 };

inline const char* mu_rule_name(MuRule r) {
  switch (r) {
    case MuRule::C1: return "C1";
    case MuRule::C2: return "C2";
    case MuRule::S1: return "S1";
    case MuRule::S2: return "S2";
    case MuRule::S3: return "S3";
  }
  return "?";
}

inline MuRule parse_mu_rule(const std::string& s) {
  for (MuRule r : {MuRule::C1, MuRule::C2, MuRule::S1, MuRule::S2, MuRule::S3})
    if (s == mu_rule_name(r)) return r;
  throw std::invalid_argument("unknown lambda-mu rule: " + s);
}

// ---------------------------------------------------------------------------
// Structural substitution u[v/*α]: every [α]w becomes [α](w)v.

namespace detail {

inline Term struct_subst(const Term& t, const std::string& alpha, const Term& v) {
  if (!t.has_free_mu(alpha)) return t;
  switch (t.kind()) {
    case Kind::Lam: {
      std::string y = t.name();
      Term body = t.body();
      if (v.has_free(y)) {
        std::string fresh = fresh_name(y, [&](const std::string& c) { return v.has_free(c) || body.has_free(c); });
        body = substitute(body, y, Term::var(fresh));
        y = fresh;
      }
      return Term::lam(y, struct_subst(body, alpha, v));
    }
    case Kind::App:
      return Term::app(struct_subst(t.fun(), alpha, v), struct_subst(t.arg(), alpha, v));
    case Kind::Mu: {
      // t.name() != alpha, else alpha would not be free here.
      std::string bound = t.name();
      std::string named = t.named();
      Term body = t.body();
      if (v.has_free_mu(bound)) {
        std::string fresh = fresh_name(bound, [&](const std::string& c) {
          return v.has_free_mu(c) || body.has_free_mu(c) || c == named || c == alpha;
        });
        body = rename_free_mu(body, bound, fresh);
        if (named == bound) named = fresh;
        bound = fresh;
      }
      body = struct_subst(body, alpha, v);
      if (named == alpha) body = Term::app(body, v);
      return Term::mu(bound, named, body);
    }
    default:
      return t;
  }
}

/// μα[β]u applied to v: μα[β]u[v/*α], with α renamed away from v first.
inline Term push_argument(const Term& mu, const Term& v) {
  std::string alpha = mu.name();
  std::string named = mu.named();
  Term body = mu.body();
  if (v.has_free_mu(alpha)) {
    std::string fresh = fresh_name(alpha, [&](const std::string& c) {
      return v.has_free_mu(c) || body.has_free_mu(c) || c == named;
    });
    body = rename_free_mu(body, alpha, fresh);
    if (named == alpha) named = fresh;
    alpha = fresh;
  }
  body = struct_subst(body, alpha, v);
  if (named == alpha) body = Term::app(body, v);
  return Term::mu(alpha, named, body);
}

/// Does [α]λy.w occur in u with α free, or at the top when β = α?
inline bool named_lambda(const Term& u, const std::string& alpha) {
  if (!u.has_free_mu(alpha)) return false;
  switch (u.kind()) {
    case Kind::Lam:
      return named_lambda(u.body(), alpha);
    case Kind::App:
      return named_lambda(u.fun(), alpha) || named_lambda(u.arg(), alpha);
    case Kind::Mu:
      if (u.named() == alpha && u.body().is(Kind::Lam)) return true;
      return named_lambda(u.body(), alpha);
    default:
      return false;
  }
}

}  // namespace detail

/// The contractum of `rule` at the root of t, if its pattern matches.
inline std::optional<Term> contract_mu(const Term& t, MuRule rule) {
  switch (rule) {
    case MuRule::C1:
      if (t.is(Kind::App) && t.fun().is(Kind::Lam)) return substitute(t.fun().body(), t.fun().name(), t.arg());
      return std::nullopt;
    case MuRule::C2:
      if (t.is(Kind::App) && t.fun().is(Kind::Mu)) return detail::push_argument(t.fun(), t.arg());
      return std::nullopt;
    case MuRule::S1: {
      // μγ[α]μβ.[δ]w → μγ[δ'] w[α/β]
      if (!t.is(Kind::Mu) || !t.body().is(Kind::Mu)) return std::nullopt;
      const Term& inner = t.body();
      const std::string& alpha = t.named();
      const std::string& beta = inner.name();
      std::string named = inner.named() == beta ? alpha : inner.named();
      Term w = rename_free_mu(inner.body(), beta, alpha);
      return Term::mu(t.name(), named, w);
    }
    case MuRule::S2:
      if (t.is(Kind::Mu) && t.named() == t.name() && !t.body().has_free_mu(t.name())) return t.body();
      return std::nullopt;
    case MuRule::S3: {
      if (!t.is(Kind::Mu)) return std::nullopt;
      const std::string& alpha = t.name();
      bool top = t.named() == alpha && t.body().is(Kind::Lam);
      if (!top && !detail::named_lambda(t.body(), alpha)) return std::nullopt;
      std::string x = fresh_name("x", [&](const std::string& c) { return t.has_free(c); });
      // [x/*α] over the named body, including the top [β]u when β = α.
      Term body = detail::struct_subst(t.body(), alpha, Term::var(x));
      if (t.named() == alpha) body = Term::app(body, Term::var(x));
      return Term::lam(x, Term::mu(alpha, t.named(), body));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Positions and redexes

namespace detail {

inline const Term& subterm_at(const Term& t, const std::string& path, std::size_t i = 0) {
  if (i == path.size()) return t;
  char c = path[i];
  if (c == 'l' && t.is(Kind::Lam)) return subterm_at(t.body(), path, i + 1);
  if (c == 'm' && t.is(Kind::Mu)) return subterm_at(t.body(), path, i + 1);
  if (c == 'f' && t.is(Kind::App)) return subterm_at(t.fun(), path, i + 1);
  if (c == 'a' && t.is(Kind::App)) return subterm_at(t.arg(), path, i + 1);
  throw PatternMismatch("no subterm at position " + position_text(path));
}

inline Term replace_at(const Term& t, const std::string& path, const Term& with, std::size_t i = 0) {
  if (i == path.size()) return with;
  switch (path[i]) {
    case 'l': return Term::lam(t.name(), replace_at(t.body(), path, with, i + 1));
    case 'm': return Term::mu(t.name(), t.named(), replace_at(t.body(), path, with, i + 1));
    case 'f': return Term::app(replace_at(t.fun(), path, with, i + 1), t.arg());
    default: return Term::app(t.fun(), replace_at(t.arg(), path, with, i + 1));
  }
}

inline void collect_redexes(const Term& t, const std::string& path, std::vector<Step>& out) {
  static const MuRule app_rules[] = {MuRule::C1, MuRule::C2};
  static const MuRule mu_rules[] = {MuRule::S1, MuRule::S2, MuRule::S3};
  if (t.is(Kind::App)) {
    for (MuRule r : app_rules)
      if (contract_mu(t, r)) out.push_back(Step{path, mu_rule_name(r)});
    collect_redexes(t.fun(), path + "f", out);
    collect_redexes(t.arg(), path + "a", out);
  } else if (t.is(Kind::Mu)) {
    for (MuRule r : mu_rules)
      if (contract_mu(t, r)) out.push_back(Step{path, mu_rule_name(r)});
    collect_redexes(t.body(), path + "m", out);
  } else if (t.is(Kind::Lam)) {
    collect_redexes(t.body(), path + "l", out);
  }
}

}  // namespace detail

/// Contract `rule` at `position`; PatternMismatch if the redex is not there.
inline Term reduce_mu_step(const Term& t, const std::string& position, MuRule rule) {
  const Term& sub = detail::subterm_at(t, position);
  auto r = contract_mu(sub, rule);
  if (!r)
    throw PatternMismatch(std::string("no ") + mu_rule_name(rule) + " redex at " + position_text(position));
  return detail::replace_at(t, position, *r);
}

/// Every redex of t in pre-order (outermost, left to right).
inline std::vector<Step> mu_redexes(const Term& t) {
  std::vector<Step> out;
  detail::collect_redexes(t, "", out);
  return out;
}

namespace detail {

/// One step of the head strategy: C1/C2 at the head of the spine, then
/// S1, S2, S3 at a μ-head with no arguments, then inside that μ.
inline std::optional<std::pair<Term, Step>> mu_head_step(const Term& t, const std::string& path) {
  if (t.is(Kind::Lam)) {
    auto r = mu_head_step(t.body(), path + "l");
    if (!r) return std::nullopt;
    return std::make_pair(Term::lam(t.name(), r->first), r->second);
  }
  auto [h, args] = spine(t);
  if (!args.empty()) {
    if (!h.is(Kind::Lam) && !h.is(Kind::Mu)) return std::nullopt;
    std::string pos = path + std::string(args.size() - 1, 'f');
    MuRule rule = h.is(Kind::Lam) ? MuRule::C1 : MuRule::C2;
    Term redex = Term::app(h, args[0]);
    std::vector<Term> rest(args.begin() + 1, args.end());
    return std::make_pair(apply_args(*contract_mu(redex, rule), rest), Step{pos, mu_rule_name(rule)});
  }
  if (!h.is(Kind::Mu)) return std::nullopt;
  for (MuRule rule : {MuRule::S1, MuRule::S2, MuRule::S3})
    if (auto r = contract_mu(h, rule)) return std::make_pair(*r, Step{path, mu_rule_name(rule)});
  auto r = mu_head_step(h.body(), path + "m");
  if (!r) return std::nullopt;
  return std::make_pair(Term::mu(h.name(), h.named(), r->first), r->second);
}

}  // namespace detail

inline Reduction head_reduce_mu(const Term& t, std::size_t fuel = default_fuel, bool record = false) {
  ReductionTrace trace;
  Term cur = t;
  for (;;) {
    auto next = detail::mu_head_step(cur, "");
    if (!next) break;
    if (trace.count >= fuel) {
      trace.outcome = Outcome::FuelExhausted;
      return {cur, std::move(trace)};
    }
    cur = next->first;
    trace.add(next->second.position, next->second.rule);
    if (record) trace.terms.push_back(cur);
  }
  trace.outcome = Outcome::HeadNormalForm;
  return {cur, std::move(trace)};
}

/// Normal form by always contracting the first (or last) redex in pre-order.
inline Reduction normalize_mu(const Term& t, std::size_t fuel = default_fuel, bool innermost = false,
                              bool record = false) {
  ReductionTrace trace;
  Term cur = t;
  for (;;) {
    auto rs = mu_redexes(cur);
    if (rs.empty()) break;
    if (trace.count >= fuel) {
      trace.outcome = Outcome::FuelExhausted;
      return {cur, std::move(trace)};
    }
    const Step& s = innermost ? rs.back() : rs.front();
    cur = reduce_mu_step(cur, s.position, parse_mu_rule(s.rule));
    trace.add(s.position, s.rule);
    if (record) trace.terms.push_back(cur);
  }
  trace.outcome = Outcome::NormalForm;
  return {cur, std::move(trace)};
}

enum class Joinable { Yes, Unknown };

inline const char* joinable_name(Joinable j) { return j == Joinable::Yes ? "Yes" : "Unknown"; }

inline constexpr std::size_t default_join_budget = 4000;

/// Bidirectional breadth-first search for a common reduct; `budget` bounds
/// the number of expanded terms.
inline Joinable mu_joinable(const Term& u, const Term& v, std::size_t budget = default_join_budget) {
  if (alpha_equal(u, v)) return Joinable::Yes;
  const std::size_t cap = 3 * std::max(u.size(), v.size()) + 48;
  std::unordered_set<std::string> seen[2];
  std::deque<Term> frontier[2];
  seen[0].insert(canonical_key(u));
  seen[1].insert(canonical_key(v));
  frontier[0].push_back(u);
  frontier[1].push_back(v);
  std::size_t expanded = 0;
  for (int side = 0; expanded < budget && (!frontier[0].empty() || !frontier[1].empty()); side ^= 1) {
    if (frontier[side].empty()) continue;
    Term t = frontier[side].front();
    frontier[side].pop_front();
    ++expanded;
    for (const auto& s : mu_redexes(t)) {
      Term r = reduce_mu_step(t, s.position, parse_mu_rule(s.rule));
      std::string k = canonical_key(r);
      if (seen[side ^ 1].count(k)) return Joinable::Yes;
      if (!seen[side].insert(k).second) continue;
      if (r.size() <= cap) frontier[side].push_back(r);
    }
  }
  return Joinable::Unknown;
}

// ---------------------------------------------------------------------------
// N_{x,f}, rep and val

/// A finite set of integers, or all of ℕ.
struct IntSet {
  bool top = false;
  std::set<std::size_t> values;

  static IntSet all() { return IntSet{true, {}}; }
  static IntSet of(std::initializer_list<std::size_t> v) { return IntSet{false, v}; }

  bool operator==(const IntSet& o) const { return top == o.top && values == o.values; }
  bool operator!=(const IntSet& o) const { return !(*this == o); }

  bool empty() const { return !top && values.empty(); }

  bool subset_of(const IntSet& o) const {
    if (o.top) return true;
    if (top) return false;
    return std::includes(o.values.begin(), o.values.end(), values.begin(), values.end());
  }

  IntSet intersect(const IntSet& o) const {
    if (top) return o;
    if (o.top) return *this;
    IntSet r;
    std::set_intersection(values.begin(), values.end(), o.values.begin(), o.values.end(),
                          std::inserter(r.values, r.values.end()));
    return r;
  }

  IntSet unite(const IntSet& o) const {
    if (top || o.top) return all();
    IntSet r = *this;
    r.values.insert(o.values.begin(), o.values.end());
    return r;
  }

  /// Image under n ↦ n+1; ℕ maps to ℕ.
  IntSet successor() const {
    if (top) return *this;
    IntSet r;
    for (auto v : values) r.values.insert(v + 1);
    return r;
  }

  std::string text() const {
    if (top) return "N";
    std::string s = "{";
    bool first = true;
    for (auto v : values) {
      if (!first) s += ", ";
      s += std::to_string(v);
      first = false;
    }
    return s + "}";
  }
};

struct NotInGrammar : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// u ::= x | (f)u | μα[β]u
inline bool in_Nxf(const Term& u, const std::string& x = "x", const std::string& f = "f") {
  const Term* cur = &u;
  for (;;) {
    if (cur->is(Kind::Var)) return cur->name() == x;
    if (cur->is(Kind::App)) {
      if (!cur->fun().is(Kind::Var) || cur->fun().name() != f) return false;
      cur = &cur->arg();
      continue;
    }
    if (cur->is(Kind::Mu)) {
      cur = &cur->body();
      continue;
    }
    return false;
  }
}

namespace detail {

/// The v of every [α]v in [β]u for the μ-node μα[β]u, α not shadowed.
inline void named_by(const Term& t, const std::string& alpha, std::vector<Term>& out) {
  switch (t.kind()) {
    case Kind::App:
      named_by(t.fun(), alpha, out);
      named_by(t.arg(), alpha, out);
      break;
    case Kind::Lam:
      named_by(t.body(), alpha, out);
      break;
    case Kind::Mu:
      if (t.name() == alpha) break;
      if (t.named() == alpha) out.push_back(t.body());
      named_by(t.body(), alpha, out);
      break;
    default:
      break;
  }
}

inline std::vector<Term> named_subterms(const Term& mu) {
  std::vector<Term> out;
  if (mu.named() == mu.name()) out.push_back(mu.body());
  named_by(mu.body(), mu.name(), out);
  return out;
}

struct RepVal {
  bool is_val;
  std::string x, f;
  std::unordered_map<std::string, IntSet> memo;

  IntSet run(const Term& u) {
    if (u.is(Kind::Var)) return IntSet::of({0});
    if (u.is(Kind::App)) return run(u.arg()).successor();
    std::string key = canonical_key(u);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    IntSet acc = is_val ? IntSet{} : IntSet::all();
    for (const auto& v : named_subterms(u)) acc = is_val ? acc.unite(run(v)) : acc.intersect(run(v));
    memo.emplace(key, acc);
    return acc;
  }
};

}  // namespace detail

inline IntSet rep(const Term& u, const std::string& x = "x", const std::string& f = "f") {
  if (!in_Nxf(u, x, f)) throw NotInGrammar("term is not in N_{" + x + "," + f + "}");
  detail::RepVal rv{false, x, f, {}};
  return rv.run(u);
}

inline IntSet val(const Term& u, const std::string& x = "x", const std::string& f = "f") {
  if (!in_Nxf(u, x, f)) throw NotInGrammar("term is not in N_{" + x + "," + f + "}");
  detail::RepVal rv{true, x, f, {}};
  return rv.run(u);
}

// ---------------------------------------------------------------------------
// Value extraction

struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MuDecomposition {
  std::size_t value = 0;
  std::vector<std::string> alphas;  // α_1 … α_n
  std::vector<std::size_t> counts;  // i_1 … i_{n+1}
  IntSet val_set;
  IntSet rep_set;
  /// Every other subterm of each u_j has an empty val.
  bool side_subterms_empty = true;
};

/// θ = λx.λf.u with u = (f)^{i_{n+1}} μα_n u_n and [α_j](f)^{i_j} μα_{j-1}u_{j-1}
/// a subterm of u_j; the value is Σ i_k.
inline MuDecomposition extract_value_mu(const Term& theta) {
  if (!theta.is(Kind::Lam) || !theta.body().is(Kind::Lam))
    throw ShapeMismatch("expected a term of the form \\x.\\f. u");
  const std::string x = theta.name();
  const std::string f = theta.body().name();
  if (x == f) throw ShapeMismatch("the two binders coincide");
  const Term& u = theta.body().body();
  if (!theta.closed()) throw ShapeMismatch("term has free variables");
  if (!in_Nxf(u, x, f)) throw ShapeMismatch("body is not in N_{x,f}");

  std::vector<Term> chain;  // chain[k] is the k-th suffix; chain.back() is x
  for (Term cur = u;;) {
    chain.push_back(cur);
    if (cur.is(Kind::Var)) break;
    cur = cur.is(Kind::App) ? cur.arg() : cur.body();
  }
  MuDecomposition out;
  std::vector<std::size_t> binders;  // index of t_j = μα_j u_j, j ≥ 1
  std::size_t pos = chain.size() - 1;
  for (;;) {
    std::size_t count = 0;
    std::size_t k = pos;
    while (k > 0 && chain[k - 1].is(Kind::App)) {
      ++count;
      --k;
    }
    out.counts.push_back(count);
    if (k == 0) break;
    const Term& named = chain[k - 1];
    const std::string alpha = named.named();
    std::optional<std::size_t> b;
    for (std::size_t i = k; i-- > 0;) {
      if (chain[i].is(Kind::Mu) && chain[i].name() == alpha) {
        b = i;
        break;
      }
    }
    if (!b) throw ShapeMismatch("named variable " + alpha + " has no binder");
    out.alphas.push_back(alpha);
    binders.push_back(*b);
    pos = *b;
  }
  for (auto c : out.counts) out.value += c;

  out.val_set = val(u, x, f);
  out.rep_set = rep(u, x, f);
  if (out.val_set != IntSet::of({out.value}))
    throw ShapeMismatch("val(u) = " + out.val_set.text() + " disagrees with the decomposition");

  // t_0 = x, t_j = chain[binders[j-1]].
  std::vector<std::size_t> anchors{chain.size() - 1};
  anchors.insert(anchors.end(), binders.begin(), binders.end());
  auto is_tower_over = [&](std::size_t m, std::size_t j) {
    for (std::size_t k = 0; k < j; ++k) {
      std::size_t a = anchors[k];
      if (m > a) continue;
      bool all_f = true;
      for (std::size_t i = m; i < a; ++i) all_f = all_f && chain[i].is(Kind::App);
      if (all_f) return true;
    }
    return false;
  };
  for (std::size_t j = 1; j < anchors.size(); ++j) {
    for (std::size_t m = anchors[j] + 1; m < chain.size(); ++m) {
      if (is_tower_over(m, j)) continue;
      if (!val(chain[m], x, f).empty()) out.side_subterms_empty = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Storage for λμ integers

namespace detail {

/// Replace maximal μ-subterms by inert variables so the pure β-engine can compare.
struct MuEraser {
  std::set<std::string> taken;
  std::vector<std::pair<std::string, std::string>> names;
  std::vector<std::pair<std::string, Term>> erased;

  Term erase(const Term& t) {
    if (!t.contains_mu()) return t;
    switch (t.kind()) {
      case Kind::Lam:
        return Term::lam(t.name(), erase(t.body()));
      case Kind::App:
        return Term::app(erase(t.fun()), erase(t.arg()));
      case Kind::Mu: {
        std::string key = canonical_key(t);
        for (const auto& [k, y] : names)
          if (k == key) return Term::var(y);
        std::string y = fresh_name("M", [&](const std::string& c) { return taken.count(c) > 0; });
        taken.insert(y);
        names.emplace_back(key, y);
        erased.emplace_back(y, t);
        return Term::var(y);
      }
      default:
        return t;
    }
  }
};

}  // namespace detail

/// Head-reduce (T)θ f; accept (f)w or μα[α](f)w with w ≃β n̲ once its μ-subterms are made inert.
inline StorageReport check_storage_mu(const Term& T, const Term& theta, std::size_t n,
                                      std::size_t fuel = default_fuel) {
  if (!T.closed() || !T.pure()) throw std::invalid_argument("check_storage_mu: T must be a closed pure term");
  if (!theta.closed()) throw std::invalid_argument("check_storage_mu: theta must be closed");
  StorageReport report;
  report.test_variable = detail::test_variable_for({T, theta});
  Reduction r = head_reduce_mu(apps(T, theta, Term::var(report.test_variable)), fuel);
  VariantRun run{theta, r.term, r.trace.count, r.trace.outcome, std::nullopt};
  if (r.exhausted()) {
    report.runs.push_back(run);
    report.verdict = Verdict::Unknown;
    report.note = "head reduction ran out of fuel";
    return report;
  }
  Term hnf = r.term;
  if (hnf.is(Kind::Mu) && hnf.named() == hnf.name()) hnf = hnf.body();
  run.result = detail::result_of(hnf, report.test_variable);
  report.runs.push_back(run);
  if (!run.result) {
    report.verdict = Verdict::Fail;
    report.note = "head normal form is not (" + report.test_variable + ")w up to a leading mu";
    return report;
  }
  detail::MuEraser eraser;
  for (const auto& nm : all_names(*run.result)) eraser.taken.insert(nm);
  eraser.taken.insert(report.test_variable);
  Term tau = eraser.erase(*run.result);
  report.tau = tau;
  Substitution sigma;
  for (const auto& [y, m] : eraser.erased) {
    report.generalization_vars.push_back(y);
    sigma.emplace_back(y, m);
  }
  report.substitutions.push_back(sigma);
  report.degraded = tau.is(Kind::Var) && !eraser.erased.empty();
  const Term target = encode(n, Encoding::Church);
  Decoded d = decode(tau, Encoding::Church, fuel);
  if (d.status == Decoded::Value) report.decoded = d.value;
  switch (beta_equiv(tau, target, fuel)) {
    case Equivalence::Equal:
      report.verdict = Verdict::Pass;
      report.note = "consistent with storage operator";
      break;
    case Equivalence::Distinct:
      report.verdict = Verdict::Fail;
      report.note = eraser.erased.empty() ? "result is not beta-equivalent to the integer"
                                          : "result keeps mu-subterms and is not a pure integer";
      break;
    case Equivalence::Unknown:
      report.verdict = Verdict::Unknown;
      report.note = "normalization of the result ran out of fuel";
      break;
  }
  report.strong = report.verdict == Verdict::Pass && alpha_equal(*run.result, target);
  return report;
}

}  // namespace lamlab
