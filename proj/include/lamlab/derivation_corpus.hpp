#pragma once

// Hand-built derivations: integers and successor in AF2, plus one small
// example per extended system.

#include <string>
#include <vector>

#include "derivation.hpp"
#include "encodings.hpp"

namespace lamlab {

struct GoldenDerivation {
  std::string name;
  System system;
  EquationSet equations;
  Derivation derivation;
};

namespace corpus {

inline Formula X_at(const FoTerm& t) { return Formula::atom("X", VarKind::Ordinary, {t}); }

/// ∀y(X(y) → X(sy))
inline Formula step_hyp() {
  return Formula::forall_fo("y", Formula::arrow(X_at(FoTerm::var("y")), X_at(fo_succ(FoTerm::var("y")))));
}

/// Γ ⊢ (f)^k x : X(s^k(base)) for Γ holding x : X(base) and f : ∀y(X(y) → X(sy)).
inline Derivation iterate(const Context& g, std::size_t k, const FoTerm& base) {
  Derivation d = build::axiom(g, "x");
  FoTerm cur = base;
  for (std::size_t i = 0; i < k; ++i) {
    d = build::apply(build::inst_fo(build::axiom(g, "f"), cur), d);
    cur = fo_succ(cur);
  }
  return d;
}

/// ⊢ n̲ : N[s^n(0)]
inline Derivation church(std::size_t n) {
  Context g{{"x", X_at(fo_zero())}, {"f", step_hyp()}};
  Derivation d = build::lambda(build::lambda(iterate(g, n, fo_zero()), "f"), "x");
  return build::gen_so(d, "X");
}

/// ⊢ λnλxλf((n)(f)x)f : ∀y(N[y] → N[sy])
inline Derivation successor() {
  FoTerm y = FoTerm::var("y");
  Context g{{"n", nat_type(y)}, {"x", X_at(fo_zero())}, {"f", step_hyp()}};
  // n : X(s0), ∀y1(X(sy1) → X(ssy1)) → X(sy)
  Template shifted{{"z"}, X_at(fo_succ(FoTerm::var("z")))};
  Derivation n = build::inst_so(build::axiom(g, "n"), shifted);
  Derivation fx = build::apply(build::inst_fo(build::axiom(g, "f"), fo_zero()), build::axiom(g, "x"));
  // f : ∀w(X(sw) → X(ssw))
  Derivation f = build::gen_fo(build::inst_fo(build::axiom(g, "f"), fo_succ(FoTerm::var("w"))), "w");
  Derivation body = build::apply(build::apply(n, fx), f);
  Derivation d = build::gen_so(build::lambda(build::lambda(body, "f"), "x"), "X");
  return build::gen_fo(build::lambda(d, "n"), "y");
}

inline EquationSet predecessor_equations() { return parse_equations("p(0) = 0\np(s(x)) = x\n"); }

/// ⊢ n̲ : N[v] from ⊢ n̲ : N[s^n(0)] by one rule-8 step.
inline Derivation church_as(std::size_t n, const FoTerm& v) {
  Template A{{"u"}, nat_type(FoTerm::var("u"))};
  return build::rewrite(church(n), A, fo_numeral(n), v);
}

/// ⊢ λx.x : ∀X⊥(X⊥ → X⊥), then instantiated at a ⊥-type.
inline Derivation bot_identity(bool instantiate) {
  Formula X = Formula::atom("X", VarKind::Bot);
  Context g{{"x", X}};
  Derivation d = build::gen_so(build::lambda(build::axiom(g, "x"), "x"), "X", VarKind::Bot);
  if (!instantiate) return d;
  return build::inst_so(d, Template{{}, neg(Formula::atom("Z", VarKind::Ordinary))});
}

/// ⊢ λy.(C)y : ∀X(¬¬X → X) in C2 (or over a classical X in M2).
inline Derivation classical_c(VarKind k) {
  Formula X = Formula::atom("X", k);
  Context g{{"y", neg(neg(X))}};
  Derivation c = build::inst_so(build::constant_c(g, k), Template{{}, X});
  Derivation d = build::lambda(build::apply(c, build::axiom(g, "y")), "y");
  return build::gen_so(d, "X", k);
}

/// ⊢ λy.μa[d](y)λx.μb[a]x : ∀X(¬¬X → X) by rule 9.
inline Derivation classical_mu(VarKind k) {
  Formula X = Formula::atom("X", k);
  Context g{{"y", neg(neg(X))}, {"x", X}};
  Derivation inner = build::lambda(build::name(build::axiom(g, "x"), "b", "a"), "x");
  Context gy{{"y", neg(neg(X))}};
  Derivation y = build::axiom(gy, "y", inner.conclusion.delta);
  Derivation body = build::name(build::apply(y, inner), "a", "d");
  return build::gen_so(build::lambda(body, "y"), "X", k);
}

}  // namespace corpus

inline std::vector<GoldenDerivation> golden_derivations() {
  std::vector<GoldenDerivation> out;
  for (std::size_t n = 0; n <= 3; ++n) out.push_back({"church" + std::to_string(n), System::AF2, {}, corpus::church(n)});
  out.push_back({"successor", System::AF2, {}, corpus::successor()});
  EquationSet E = corpus::predecessor_equations();
  out.push_back({"church0_pred", System::AF2, E, corpus::church_as(0, FoTerm::fun("p", {fo_zero()}))});
  out.push_back({"church1_pred", System::AF2, E, corpus::church_as(1, FoTerm::fun("p", {fo_numeral(2)}))});
  out.push_back({"bot_identity", System::AF2Bot, {}, corpus::bot_identity(true)});
  out.push_back({"c_axiom", System::C2, {}, corpus::classical_c(VarKind::Ordinary)});
  out.push_back({"c_axiom_M2", System::M2, {}, corpus::classical_c(VarKind::Classical)});
  out.push_back({"mu_axiom", System::FD2, {}, corpus::classical_mu(VarKind::Ordinary)});
  out.push_back({"mu_axiom_M2mu", System::M2Mu, {}, corpus::classical_mu(VarKind::Classical)});
  return out;
}

}  // namespace lamlab
