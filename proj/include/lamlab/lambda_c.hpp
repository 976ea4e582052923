#pragma once

// λC: head C-reduction, value extraction of classical integers through stack
// constants, and the oracle dialogue of a storage operator run on ν.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "encodings.hpp"
#include "reduction.hpp"
#include "storage.hpp"

namespace lamlab {

inline constexpr RuleSet control_rules{true, false, true};

inline Reduction head_reduce_c(const Term& t, std::size_t fuel = default_fuel, bool record = false) {
  return head_reduce_with(t, fuel, control_rules, record);
}

enum class Solvability { Yes, No, Unknown };

inline const char* solvability_name(Solvability s) {
  switch (s) {
    case Solvability::Yes: return "Yes";
    case Solvability::No: return "No";
    case Solvability::Unknown: return "Unknown";
  }
  return "?";
}

struct CSolvable {
  Solvability status = Solvability::Unknown;
  std::string head;
  std::vector<Term> args;
  Reduction reduction;
};

/// Yes when t ≻_C (f)t̄ with f a variable; No when the head normal form has
/// another shape (λ-prefix, or C without argument).
inline CSolvable c_solvable(const Term& t, std::size_t fuel = default_fuel) {
  CSolvable out;
  out.reduction = head_reduce_c(t, fuel);
  if (out.reduction.exhausted()) return out;
  auto [h, args] = spine(out.reduction.term);
  if (h.is(Kind::Var)) {
    out.status = Solvability::Yes;
    out.head = h.name();
    out.args = std::move(args);
  } else {
    out.status = Solvability::No;
  }
  return out;
}

enum class RunStatus { Ok, MalformedBehavior, FuelExhausted };

inline const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "Ok";
    case RunStatus::MalformedBehavior: return "MalformedBehavior";
    case RunStatus::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

struct ClassicalSegment {
  Term input;
  Term head_normal_form;
  std::string tag;  // "g-step" or "x-step"
  std::size_t r = 0;
  std::size_t steps = 0;
};

struct ClassicalValueTrace {
  RunStatus status = RunStatus::Ok;
  std::vector<ClassicalSegment> segments;
  std::vector<std::size_t> J;          // J[i] for stack constant p_i
  std::vector<long long> I;            // reconstructed from the value
  std::size_t value = 0;
  std::string note;
};

inline std::string stack_name(std::size_t i) { return "p" + std::to_string(i); }

/// Runs (θ)x g p0; each head normal form must be (g)t p_r or the terminal (x)p_r.
inline ClassicalValueTrace extract_value_classical(const Term& theta, std::size_t fuel = default_fuel) {
  ClassicalValueTrace tr;
  if (!theta.closed()) throw std::invalid_argument("extract_value_classical: theta must be closed");
  const std::string x = "x", g = "g";
  tr.J.push_back(0);
  Term cur = apps(theta, Term::var(x), Term::var(g), Term::stack(stack_name(0)));
  std::size_t used = 0;
  auto stack_index = [&](const Term& p) -> std::optional<std::size_t> {
    if (!p.is(Kind::Stack)) return std::nullopt;
    for (std::size_t i = 0; i < tr.J.size(); ++i)
      if (p.name() == stack_name(i)) return i;
    return std::nullopt;
  };
  for (;;) {
    Reduction r = head_reduce_c(cur, fuel - used);
    used += r.trace.count;
    if (r.exhausted()) {
      tr.status = RunStatus::FuelExhausted;
      tr.note = "head reduction ran out of fuel";
      return tr;
    }
    auto [h, args] = spine(r.term);
    ClassicalSegment seg{cur, r.term, "", 0, r.trace.count};
    if (h.is(Kind::Var) && h.name() == x && args.size() == 1) {
      if (auto i = stack_index(args[0])) {
        seg.tag = "x-step";
        seg.r = *i;
        tr.segments.push_back(seg);
        tr.value = tr.J[*i];
        for (std::size_t k = 0; k < tr.J.size(); ++k)
          tr.I.push_back(static_cast<long long>(tr.value) - static_cast<long long>(tr.J[k]));
        return tr;
      }
    }
    if (h.is(Kind::Var) && h.name() == g && args.size() == 2) {
      if (auto i = stack_index(args[1])) {
        seg.tag = "g-step";
        seg.r = *i;
        tr.segments.push_back(seg);
        tr.J.push_back(tr.J[*i] + 1);
        cur = Term::app(args[0], Term::stack(stack_name(tr.J.size() - 1)));
        continue;
      }
    }
    tr.segments.push_back(seg);
    tr.status = RunStatus::MalformedBehavior;
    tr.note = "head normal form is neither (" + g + ")t p or (" + x + ")p";
    return tr;
  }
}

// ---------------------------------------------------------------------------
// Oracle dialogue

struct OracleVariable {
  std::string name;
  std::size_t level = 0;
  Term a, b;
};

struct DialogueStep {
  Term term;             // the head normal form reached
  std::string head;      // ν, an oracle variable, or f
  std::size_t steps = 0;
};

struct SymbolicRun {
  RunStatus status = RunStatus::Ok;
  std::optional<Term> tau;
  std::optional<std::size_t> m;
  std::vector<DialogueStep> dialogue;
  std::vector<OracleVariable> oracles;
  std::size_t total_steps = 0;
  std::string note;
};

/// Head-reduces (T)ν f, answering ν and the oracle variables x_{l,a,b} as an
/// integer n would, until the head is f.
inline SymbolicRun symbolic_run_classical(const Term& T, std::size_t n, std::size_t fuel = default_fuel) {
  SymbolicRun run;
  if (!T.closed()) throw std::invalid_argument("symbolic_run_classical: T must be closed");
  const std::string nu = "nu", f = "f";
  Term cur = apps(T, Term::var(nu), Term::var(f));
  std::set<std::string> taken{nu, f};
  auto oracle = [&](std::size_t level, const Term& a, const Term& b) {
    std::string name = fresh_name("o", [&](const std::string& c) {
      return taken.count(c) > 0 || a.has_free(c) || b.has_free(c);
    });
    taken.insert(name);
    run.oracles.push_back(OracleVariable{name, level, a, b});
    return Term::var(name);
  };
  // n = 0 answers (a)c̄, otherwise ((b)x_{n-1,a,b})c̄.
  auto answer = [&](std::size_t level, const Term& a, const Term& b, const std::vector<Term>& rest) {
    if (level == 0) return apply_args(a, rest);
    return apply_args(Term::app(b, oracle(level - 1, a, b)), rest);
  };
  for (;;) {
    Reduction r = head_reduce_c(cur, fuel - run.total_steps);
    run.total_steps += r.trace.count;
    if (r.exhausted()) {
      run.status = RunStatus::FuelExhausted;
      run.note = "head reduction ran out of fuel";
      return run;
    }
    auto [h, args] = spine(r.term);
    std::string head = h.is(Kind::Var) ? h.name() : "";
    run.dialogue.push_back(DialogueStep{r.term, head, r.trace.count});
    if (head == f && args.size() == 1) {
      run.tau = args[0];
      Decoded d = decode(args[0], Encoding::Church, fuel);
      if (d.status == Decoded::Value) run.m = d.value;
      return run;
    }
    if (head == nu && args.size() >= 2) {
      std::vector<Term> rest(args.begin() + 2, args.end());
      cur = answer(n, args[0], args[1], rest);
      continue;
    }
    auto it = std::find_if(run.oracles.begin(), run.oracles.end(),
                           [&](const OracleVariable& o) { return o.name == head; });
    if (it != run.oracles.end()) {
      OracleVariable o = *it;
      cur = answer(o.level, o.a, o.b, args);
      continue;
    }
    run.status = RunStatus::MalformedBehavior;
    run.note = "unexpected head in the dialogue";
    return run;
  }
}

// ---------------------------------------------------------------------------
// Storage for classical integers

struct ClassicalStorageReport : StorageReport {
  std::optional<Term> replay;  // normal form of (T)θ(λx.x)
};

/// (T)θ f ≻_C (f)w with w ≃β n̲ (C inert), and (T)θ(λx.x) normalizes to n̲.
inline ClassicalStorageReport check_storage_classical(const Term& T, const Term& theta, std::size_t n,
                                                      std::size_t fuel = default_fuel) {
  if (!T.closed()) throw std::invalid_argument("check_storage_classical: T must be closed");
  if (!theta.closed()) throw std::invalid_argument("check_storage_classical: theta must be closed");
  ClassicalStorageReport report;
  report.test_variable = detail::test_variable_for({T, theta});
  Reduction r = head_reduce_c(apps(T, theta, Term::var(report.test_variable)), fuel);
  VariantRun run{theta, r.term, r.trace.count, r.trace.outcome, std::nullopt};
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
  report.tau = *run.result;
  report.substitutions.push_back({});
  const Term target = encode(n, Encoding::Church);
  Decoded d = decode(*run.result, Encoding::Church, fuel);
  if (d.status == Decoded::Value) report.decoded = d.value;
  Equivalence eq = beta_equiv(*run.result, target, fuel);
  if (eq == Equivalence::Unknown) {
    report.verdict = Verdict::Unknown;
    report.note = "normalization of the result ran out of fuel";
    return report;
  }
  if (eq == Equivalence::Distinct) {
    report.verdict = Verdict::Fail;
    report.note = run.result->contains_c() ? "result still contains C; it is not a pure integer"
                                           : "result is not beta-equivalent to the integer";
    return report;
  }
  Reduction replay = normalize_with(apps(T, theta, Term::lam("x", Term::var("x"))), fuel, control_rules);
  if (replay.exhausted()) {
    report.verdict = Verdict::Unknown;
    report.note = "replay with the identity ran out of fuel";
    return report;
  }
  report.replay = replay.term;
  if (!alpha_equal(replay.term, target)) {
    report.verdict = Verdict::Fail;
    report.note = "replay with the identity does not normalize to the integer";
    return report;
  }
  report.verdict = Verdict::Pass;
  report.note = "consistent with storage operator";
  report.strong = alpha_equal(*run.result, target);
  return report;
}

}  // namespace lamlab
