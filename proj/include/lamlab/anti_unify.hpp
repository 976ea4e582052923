#pragma once

// Syntactic anti-unification up to α: the least general pattern τ with one
// substitution σ_i per input such that σ_i(τ) = t_i.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "term.hpp"

namespace lamlab {

struct AntiUnification {
  Term pattern;
  std::vector<Substitution> substitutions;  // one per input
  std::vector<std::string> generalization_vars;
  /// The inputs differ and share no structure: the pattern is a bare variable.
  bool degraded = false;
};

namespace detail {

struct AntiUnifier {
  const std::vector<Term>& inputs;
  std::set<std::string> taken;
  std::vector<std::pair<std::string, std::string>> seen;  // tuple key -> variable
  AntiUnification result;

  explicit AntiUnifier(const std::vector<Term>& in) : inputs(in) {
    for (const auto& t : inputs)
      for (auto& n : all_names(t)) taken.insert(n);
    result.substitutions.resize(inputs.size());
  }

  std::string fresh_var() {
    std::string y = fresh_name("Y", [&](const std::string& c) { return taken.count(c) > 0; });
    taken.insert(y);
    return y;
  }

  static bool locally_closed(const Term& t, const std::vector<std::string>& env) {
    for (const auto& x : env)
      if (t.has_free(x)) return false;
    return true;
  }

  std::optional<Term> generalize(const std::vector<Term>& here, const std::vector<std::vector<std::string>>& envs) {
    for (std::size_t i = 0; i < here.size(); ++i)
      if (!locally_closed(here[i], envs[i])) return std::nullopt;
    std::string key;
    for (const auto& t : here) key += canonical_key(t) + "|";
    for (const auto& [k, y] : seen)
      if (k == key) return Term::var(y);
    std::string y = fresh_var();
    seen.emplace_back(key, y);
    result.generalization_vars.push_back(y);
    for (std::size_t i = 0; i < here.size(); ++i) result.substitutions[i].emplace_back(y, here[i]);
    return Term::var(y);
  }

  bool all_alpha_equal(const std::vector<Term>& here, std::vector<std::vector<std::string>>& envs) {
    for (std::size_t i = 1; i < here.size(); ++i) {
      Scope a{envs[0], {}}, b{envs[i], {}};
      if (!alpha_rec(here[0], here[i], a, b)) return false;
    }
    return true;
  }

  std::optional<Term> descend(const std::vector<Term>& here, std::vector<std::vector<std::string>>& envs) {
    Kind k = here[0].kind();
    bool same_kind = std::all_of(here.begin(), here.end(), [&](const Term& t) { return t.kind() == k; });
    if (same_kind && k == Kind::App) {
      std::vector<Term> fs, as;
      for (const auto& t : here) {
        fs.push_back(t.fun());
        as.push_back(t.arg());
      }
      auto f = walk(fs, envs);
      if (!f) return std::nullopt;
      auto a = walk(as, envs);
      if (!a) return std::nullopt;
      return Term::app(*f, *a);
    }
    if (same_kind && k == Kind::Lam) {
      std::vector<Term> bodies;
      for (std::size_t i = 0; i < here.size(); ++i) {
        bodies.push_back(here[i].body());
        envs[i].push_back(here[i].name());
      }
      // The pattern reuses input 0's binder; other inputs' binders are tracked positionally.
      auto b = walk(bodies, envs);
      for (auto& env : envs) env.pop_back();
      if (!b) return std::nullopt;
      return Term::lam(here[0].name(), *b);
    }
    return std::nullopt;
  }

  /// Least general pattern; where descending would have to abstract a bound
  /// variable, the enclosing closed position is generalized instead.
  std::optional<Term> walk(const std::vector<Term>& here, std::vector<std::vector<std::string>>& envs) {
    if (all_alpha_equal(here, envs)) return here[0];
    auto saved_seen = seen;
    auto saved_result = result;
    auto saved_taken = taken;
    if (auto t = descend(here, envs)) return t;
    seen = std::move(saved_seen);
    result = std::move(saved_result);
    taken = std::move(saved_taken);
    return generalize(here, envs);
  }
};

}  // namespace detail

/// Generalization variables go only where every differing subterm is free of
/// variables bound above it.
inline AntiUnification anti_unify(const std::vector<Term>& terms) {
  if (terms.empty()) throw std::invalid_argument("anti_unify: empty input");
  detail::AntiUnifier au(terms);
  std::vector<std::vector<std::string>> envs(terms.size());
  auto pattern = au.walk(terms, envs);
  if (!pattern) {
    AntiUnification degraded;
    std::string y = fresh_name("Y", [&](const std::string& c) { return au.taken.count(c) > 0; });
    degraded.pattern = Term::var(y);
    degraded.generalization_vars = {y};
    degraded.degraded = true;
    for (const auto& t : terms) degraded.substitutions.push_back(Substitution{{y, t}});
    return degraded;
  }
  au.result.pattern = *pattern;
  au.result.degraded = pattern->is(Kind::Var) && !au.result.generalization_vars.empty() &&
                       pattern->name() == au.result.generalization_vars.front();
  return std::move(au.result);
}

}  // namespace lamlab
