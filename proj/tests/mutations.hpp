#pragma once

// Single-node mutations of a derivation: one changed type, subject, context,
// rule name or witness per copy.

#include <string>
#include <vector>

#include "lamlab/derivation.hpp"

namespace mutation {

struct Mutant {
  std::string what;
  lamlab::Derivation derivation;
};

inline void nodes(lamlab::Derivation& d, std::vector<lamlab::Derivation*>& out) {
  out.push_back(&d);
  for (auto& p : d.premises) nodes(p, out);
}

inline std::size_t node_count(const lamlab::Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += node_count(p);
  return n;
}

template <class Mutate>
void each_node(const lamlab::Derivation& d, const std::string& tag, Mutate&& mutate, std::vector<Mutant>& out) {
  std::size_t n = node_count(d);
  for (std::size_t i = 0; i < n; ++i) {
    lamlab::Derivation copy = d;
    std::vector<lamlab::Derivation*> ptrs;
    nodes(copy, ptrs);
    if (mutate(*ptrs[i])) out.push_back({tag + " at node " + std::to_string(i), copy});
  }
}

inline std::vector<Mutant> single_node_mutations(const lamlab::Derivation& d) {
  using namespace lamlab;
  std::vector<Mutant> out;
  each_node(d, "type", [](Derivation& n) {
    Formula& t = n.conclusion.type;
    t = t.is(FKind::Bot) ? Formula::symbol("q") : Formula::bot();
    return true;
  }, out);
  each_node(d, "subject", [](Derivation& n) {
    n.conclusion.subject = Term::var("zz");
    return true;
  }, out);
  each_node(d, "weakened type", [](Derivation& n) {
    n.conclusion.type = Formula::arrow(Formula::symbol("q"), n.conclusion.type);
    return true;
  }, out);
  each_node(d, "applied subject", [](Derivation& n) {
    n.conclusion.subject = Term::app(n.conclusion.subject, Term::var("zz"));
    return true;
  }, out);
  each_node(d, "extra hypothesis", [](Derivation& n) {
    n.conclusion.context.push_back({"zz", Formula::symbol("q")});
    return true;
  }, out);
  each_node(d, "rule", [](Derivation& n) {
    static const char* cycle[] = {"1", "2", "3", "4", "5", "6", "7", "8"};
    for (std::size_t i = 0; i < 8; ++i)
      if (n.rule == cycle[i]) {
        n.rule = cycle[(i + 1) % 8];
        return true;
      }
    return false;
  }, out);
  each_node(d, "witness", [](Derivation& n) {
    Witness& w = n.witness;
    if (w.term) {
      w.term = fo_succ(*w.term);
      return true;
    }
    if (w.v) {
      w.v = fo_succ(*w.v);
      return true;
    }
    if (w.formula) {
      w.formula->body = Formula::arrow(Formula::symbol("q"), w.formula->body);
      return true;
    }
    return false;
  }, out);
  return out;
}

}  // namespace mutation
