#pragma once

// The directed calculus Λ[□]: boxes [t]⟨a/x⟩ over β-normal directors are only
// unfolded during head reduction, never created.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "encodings.hpp"
#include "reduction.hpp"
#include "storage.hpp"

namespace lamlab {

inline constexpr RuleSet directed_rules{true, true, false};

inline Reduction head_reduce_directed(const Term& t, std::size_t fuel = default_fuel, bool record = false) {
  return head_reduce_with(t, fuel, directed_rules, record);
}

/// Directors are pure β-normal terms whose free variables lie in the box domain.
inline bool box_well_formed(const Term& t) {
  switch (t.kind()) {
    case Kind::Lam:
      return box_well_formed(t.body());
    case Kind::App:
      return box_well_formed(t.fun()) && box_well_formed(t.arg());
    case Kind::Box: {
      const Term& d = t.director();
      if (!d.pure() || !is_beta_normal(d)) return false;
      for (const auto& z : d.free_vars()) {
        bool in_domain = std::any_of(t.substitution().begin(), t.substitution().end(),
                                     [&](const BoxBinding& e) { return e.first == z; });
        if (!in_domain) return false;
      }
      for (const auto& e : t.substitution())
        if (!box_well_formed(e.second)) return false;
      return true;
    }
    case Kind::Var:
      return true;
    default:
      return false;
  }
}

/// Collects every box of t (outermost first, left to right).
inline void collect_boxes(const Term& t, std::vector<Term>& out) {
  switch (t.kind()) {
    case Kind::Lam:
      collect_boxes(t.body(), out);
      break;
    case Kind::App:
      collect_boxes(t.fun(), out);
      collect_boxes(t.arg(), out);
      break;
    case Kind::Box:
      out.push_back(t);
      for (const auto& e : t.substitution()) collect_boxes(e.second, out);
      break;
    default:
      break;
  }
}

struct UnrealizedBox : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Realization of a box whose substitution is already box-free.
using BoxRealizer = std::function<std::optional<Term>(const Term& box)>;

/// [t]⟨a/x⟩ ↦ t[a/x], the intended reading of a box.
inline std::optional<Term> realize_by_substitution(const Term& box) {
  Substitution s(box.substitution().begin(), box.substitution().end());
  return substitute(box.director(), s);
}

/// Replace each box by its realization, innermost substitutions first.
inline Term instantiate(const Term& t, const BoxRealizer& realize = realize_by_substitution) {
  if (!t.contains_box()) return t;
  switch (t.kind()) {
    case Kind::Lam:
      return Term::lam(t.name(), instantiate(t.body(), realize));
    case Kind::App:
      return Term::app(instantiate(t.fun(), realize), instantiate(t.arg(), realize));
    case Kind::Box: {
      std::vector<BoxBinding> s;
      for (const auto& [x, a] : t.substitution()) s.emplace_back(x, instantiate(a, realize));
      Term inner = Term::box(t.director(), std::move(s));
      auto r = realize(inner);
      if (!r) throw UnrealizedBox("no realization for box " + render_term(inner));
      return *r;
    }
    default:
      return t;
  }
}

struct DirectedReport : StorageReport {
  std::optional<Term> directed_result;  // w before erasure, boxes included
  std::vector<std::pair<std::string, Term>> erased_boxes;
};

namespace detail {

struct BoxEraser {
  std::vector<std::pair<std::string, std::string>> names;  // (director key + domain) -> variable
  std::vector<std::pair<std::string, Term>> erased;
  std::set<std::string> taken;

  Term erase(const Term& t) {
    if (!t.contains_box()) return t;
    switch (t.kind()) {
      case Kind::Lam:
        return Term::lam(t.name(), erase(t.body()));
      case Kind::App:
        return Term::app(erase(t.fun()), erase(t.arg()));
      case Kind::Box: {
        std::string key = canonical_key(t.director()) + "/";
        for (const auto& e : t.substitution()) key += e.first + ",";
        for (const auto& [k, y] : names)
          if (k == key) return Term::var(y);
        std::string y = fresh_name("B", [&](const std::string& c) { return taken.count(c) > 0; });
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

/// Head-reduce (T)[t]⟨⟩ f in Λ[□]; Pass iff the result is (f)w and w with its
/// boxes erased to variables is β-equivalent to t.
inline DirectedReport check_storage_directed(const Term& T, const Term& t, std::size_t fuel = default_fuel) {
  if (!T.closed() || !T.pure()) throw std::invalid_argument("check_storage_directed: T must be a closed pure term");
  if (!t.closed() || !t.pure() || !is_beta_normal(t))
    throw std::invalid_argument("check_storage_directed: t must be a closed beta-normal term");
  DirectedReport report;
  report.test_variable = detail::test_variable_for({T, t});
  Term start = apps(T, Term::box(t, {}), Term::var(report.test_variable));
  Reduction r = head_reduce_directed(start, fuel);
  VariantRun run{Term::box(t, {}), r.term, r.trace.count, r.trace.outcome, std::nullopt};
  if (r.exhausted()) {
    report.runs.push_back(run);
    report.verdict = Verdict::Unknown;
    report.note = "head reduction ran out of fuel";
    return report;
  }
  run.result = detail::result_of(r.term, report.test_variable);
  report.runs.push_back(run);
  if (!run.result) {
    report.verdict = Verdict::Fail;
    report.note = "head normal form is not (" + report.test_variable + ")w";
    return report;
  }
  report.directed_result = *run.result;
  detail::BoxEraser eraser;
  for (const auto& n : all_names(*run.result)) eraser.taken.insert(n);
  eraser.taken.insert(report.test_variable);
  Term tau = eraser.erase(*run.result);
  report.tau = tau;
  report.erased_boxes = eraser.erased;
  Substitution sigma;
  for (const auto& [y, box] : eraser.erased) {
    report.generalization_vars.push_back(y);
    sigma.emplace_back(y, box);
  }
  report.substitutions.push_back(sigma);
  report.degraded = tau.is(Kind::Var) && !eraser.erased.empty();
  Decoded d = decode(tau, Encoding::Church, fuel);
  if (d.status == Decoded::Value) report.decoded = d.value;
  switch (beta_equiv(tau, t, fuel)) {
    case Equivalence::Equal:
      report.verdict = Verdict::Pass;
      report.note = "consistent with storage operator";
      break;
    case Equivalence::Distinct:
      report.verdict = Verdict::Fail;
      report.note = "erased result is not beta-equivalent to the director";
      break;
    case Equivalence::Unknown:
      report.verdict = Verdict::Unknown;
      report.note = "normalization of the erased result ran out of fuel";
      break;
  }
  report.strong = report.verdict == Verdict::Pass && alpha_equal(*run.result, t);
  return report;
}

}  // namespace lamlab
