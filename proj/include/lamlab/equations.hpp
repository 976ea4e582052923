#pragma once

// First-order equations and a bounded search for a ≈ b.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "formula.hpp"

namespace lamlab {

struct Equation {
  FoTerm lhs, rhs;
};

struct EquationSet {
  std::vector<Equation> equations;
  /// Asserted by the user, never checked: s(a) ≉ 0 and injectivity of s.
  bool adequate = false;
};

/// One `lhs = rhs` per line; `#` or `--` start comments; a line `adequate` sets the flag.
inline EquationSet parse_equations(const std::string& text) {
  EquationSet out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (const char* c : {"#", "--"}) {
      auto p = line.find(c);
      if (p != std::string::npos) line.erase(p);
    }
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line == "adequate") {
      out.adequate = true;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw FormulaError(1, "line " + std::to_string(lineno) + ": expected lhs = rhs");
    try {
      out.equations.push_back({parse_fo_term(line.substr(0, eq)), parse_fo_term(line.substr(eq + 1))});
    } catch (const FormulaError& e) {
      throw FormulaError(e.column, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

enum class EqVerdict { Yes, Unknown };

inline const char* eq_verdict_name(EqVerdict v) { return v == EqVerdict::Yes ? "Yes" : "Unknown"; }

struct EqResult {
  EqVerdict verdict = EqVerdict::Unknown;
  /// Rewrite chain from a to b when found.
  std::vector<FoTerm> chain;
  std::size_t explored = 0;
};

namespace detail {

inline bool fo_match(const FoTerm& pat, const FoTerm& t, std::map<std::string, FoTerm>& s) {
  if (pat.variable) {
    auto [it, fresh] = s.emplace(pat.name, t);
    return fresh || it->second == t;
  }
  if (t.variable || pat.name != t.name || pat.args.size() != t.args.size()) return false;
  for (std::size_t i = 0; i < pat.args.size(); ++i)
    if (!fo_match(pat.args[i], t.args[i], s)) return false;
  return true;
}

struct Orientation {
  FoTerm from, to;
};

inline std::vector<Orientation> orientations(const EquationSet& E) {
  std::vector<Orientation> out;
  for (const auto& e : E.equations) {
    std::set<std::string> l, r;
    e.lhs.vars(l);
    e.rhs.vars(r);
    // A direction that invents variables cannot be instantiated finitely.
    if (std::includes(l.begin(), l.end(), r.begin(), r.end())) out.push_back({e.lhs, e.rhs});
    if (std::includes(r.begin(), r.end(), l.begin(), l.end())) out.push_back({e.rhs, e.lhs});
  }
  return out;
}

inline void one_step(const FoTerm& t, const std::vector<Orientation>& rules, std::vector<FoTerm>& out) {
  for (const auto& r : rules) {
    std::map<std::string, FoTerm> s;
    if (fo_match(r.from, t, s)) out.push_back(fo_substitute(r.to, s));
  }
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    std::vector<FoTerm> inner;
    one_step(t.args[i], rules, inner);
    for (auto& u : inner) {
      FoTerm c = t;
      c.args[i] = std::move(u);
      out.push_back(std::move(c));
    }
  }
}

}  // namespace detail

constexpr std::size_t default_eq_budget = 5000;

/// Bidirectional breadth-first search over single rewrites with instantiated equations.
inline EqResult eq_equiv(const FoTerm& a, const FoTerm& b, const EquationSet& E, std::size_t budget = default_eq_budget) {
  EqResult res;
  if (a == b) {
    res.verdict = EqVerdict::Yes;
    res.chain = {a};
    return res;
  }
  auto rules = detail::orientations(E);
  std::size_t cap = 2 * std::max(a.size(), b.size()) + 8;
  std::map<FoTerm, std::optional<FoTerm>> seen[2];
  std::deque<FoTerm> queue[2];
  seen[0][a] = std::nullopt;
  seen[1][b] = std::nullopt;
  queue[0].push_back(a);
  queue[1].push_back(b);
  auto path = [&](int side, FoTerm t) {
    std::vector<FoTerm> p{t};
    while (auto prev = seen[side].at(t)) {
      t = *prev;
      p.push_back(t);
    }
    return p;
  };
  while ((!queue[0].empty() || !queue[1].empty()) && res.explored < budget) {
    int side = queue[0].empty() ? 1 : queue[1].empty() ? 0 : (queue[0].size() <= queue[1].size() ? 0 : 1);
    FoTerm t = queue[side].front();
    queue[side].pop_front();
    ++res.explored;
    std::vector<FoTerm> next;
    detail::one_step(t, rules, next);
    for (auto& u : next) {
      if (u.size() > cap || seen[side].count(u)) continue;
      seen[side][u] = t;
      if (seen[1 - side].count(u)) {
        auto p0 = path(side, u), p1 = path(1 - side, u);
        std::vector<FoTerm> from_a = side == 0 ? p0 : p1, from_b = side == 0 ? p1 : p0;
        res.chain.assign(from_a.rbegin(), from_a.rend());
        res.chain.insert(res.chain.end(), from_b.begin() + 1, from_b.end());
        res.verdict = EqVerdict::Yes;
        return res;
      }
      queue[side].push_back(u);
    }
  }
  return res;
}

}  // namespace lamlab
