#pragma once

// Operational storage-operator checks: (T)θ f is head-reduced for a sample of
// θ ≃β n, the results (f)w_i are factored as σ_i(τ) and τ is compared with the
// integer.  A Pass is evidence over the sample, not a proof.

#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "anti_unify.hpp"
#include "encodings.hpp"
#include "reduction.hpp"

namespace lamlab {

enum class Verdict { Pass, Fail, Unknown };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

struct VariantRun {
  Term theta;
  Term head_normal_form;
  std::size_t steps = 0;
  Outcome outcome = Outcome::HeadNormalForm;
  std::optional<Term> result;  // w of (f)w
};

struct StorageReport {
  Verdict verdict = Verdict::Unknown;
  std::string test_variable = "f";
  std::vector<VariantRun> runs;
  std::optional<Term> tau;
  std::vector<Substitution> substitutions;
  std::vector<std::string> generalization_vars;
  bool degraded = false;
  std::optional<std::size_t> decoded;
  bool strong = false;
  std::string note;
};

namespace detail {

inline std::string test_variable_for(const std::vector<Term>& terms) {
  auto taken = [&](const std::string& c) {
    for (const auto& t : terms)
      if (t.has_free(c)) return true;
    return false;
  };
  return taken("f") ? fresh_name("f", taken) : "f";
}

/// (f)w with f the test variable and no λ-prefix.
inline std::optional<Term> result_of(const Term& hnf, const std::string& f) {
  if (hnf.is(Kind::App) && hnf.fun().is(Kind::Var) && hnf.fun().name() == f) return hnf.arg();
  return std::nullopt;
}

/// Factor the observed results and compare τ with the target.
inline void factor_results(StorageReport& report, const Term& target, Encoding e, std::size_t fuel) {
  std::vector<Term> ws;
  for (const auto& r : report.runs) ws.push_back(*r.result);
  AntiUnification au = anti_unify(ws);
  report.tau = au.pattern;
  report.substitutions = au.substitutions;
  report.generalization_vars = au.generalization_vars;
  report.degraded = au.degraded;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (!alpha_equal(substitute(au.pattern, au.substitutions[i]), ws[i])) {
      report.verdict = Verdict::Fail;
      report.note = "internal: substitution does not reproduce a result";
      return;
    }
  }
  // Generalization variables stay free and inert during normalization.
  Decoded d = decode(au.pattern, e, fuel);
  if (d.status == Decoded::Value) report.decoded = d.value;
  switch (beta_equiv(au.pattern, target, fuel)) {
    case Equivalence::Equal:
      report.verdict = Verdict::Pass;
      report.note = "consistent with storage operator";
      break;
    case Equivalence::Distinct:
      report.verdict = Verdict::Fail;
      report.note = au.degraded ? "results only factor through a bare generalization variable"
                                : "common pattern is not beta-equivalent to the integer";
      break;
    case Equivalence::Unknown:
      report.verdict = Verdict::Unknown;
      report.note = "normalization of the pattern ran out of fuel";
      break;
  }
}

}  // namespace detail

inline constexpr std::size_t default_variant_count = 6;

/// Sampling check of "(T)θ f ≻ (f)σ(τ) with τ ≃β n" over the given variants.
inline StorageReport check_storage(const Term& T, std::size_t n, Encoding e, const std::vector<Term>& variants,
                                   std::size_t fuel = default_fuel) {
  StorageReport report;
  if (variants.empty()) throw std::invalid_argument("check_storage: no variants");
  std::vector<Term> all = variants;
  all.push_back(T);
  report.test_variable = detail::test_variable_for(all);
  const Term f = Term::var(report.test_variable);
  for (const auto& theta : variants) {
    Reduction r = head_reduce(apps(T, theta, f), fuel);
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
  }
  const Term target = encode(n, e);
  detail::factor_results(report, target, e, fuel);
  report.strong = report.verdict == Verdict::Pass;
  for (const auto& r : report.runs) report.strong = report.strong && alpha_equal(*r.result, target);
  return report;
}

inline StorageReport check_storage(const Term& T, std::size_t n, Encoding e,
                                   std::size_t variant_count = default_variant_count,
                                   std::size_t fuel = default_fuel) {
  return check_storage(T, n, e, theta_variants(n, e, variant_count, fuel), fuel);
}

/// As check_storage; `strong` additionally demands every result be the normal encoding itself.
inline StorageReport check_strong_storage(const Term& T, std::size_t n, Encoding e,
                                          std::size_t variant_count = default_variant_count,
                                          std::size_t fuel = default_fuel) {
  return check_storage(T, n, e, variant_count, fuel);
}

inline StorageReport check_strong_storage(const Term& T, std::size_t n, Encoding e,
                                          const std::vector<Term>& variants, std::size_t fuel = default_fuel) {
  return check_storage(T, n, e, variants, fuel);
}

// ---------------------------------------------------------------------------
// Time bound n((T)θ f) ≤ A·N(θ) + B

using Rational = boost::rational<long long>;

struct FitPoint {
  Term theta;
  std::size_t normal_steps = 0;  // N(θ)
  std::size_t head_steps = 0;    // n((T)θ f)
};

struct TimeFit {
  bool unknown = false;
  Rational A{0};
  Rational B{0};
  std::vector<FitPoint> training;
  std::vector<FitPoint> held_out;
  std::vector<FitPoint> violations;
};

/// Even-indexed θ train, odd-indexed θ are held out.  A is the steepest
/// non-negative slope between training points; B the least intercept that
/// bounds every training point under that A.
inline TimeFit fit_time_bound(const Term& T, const std::vector<Term>& family, std::size_t fuel = default_fuel) {
  TimeFit fit;
  std::vector<Term> all = family;
  all.push_back(T);
  const Term f = Term::var(detail::test_variable_for(all));
  for (std::size_t i = 0; i < family.size(); ++i) {
    Reduction nf = normalize(family[i], fuel);
    Reduction hr = head_reduce(apps(T, family[i], f), fuel);
    if (nf.exhausted() || hr.exhausted()) {
      fit.unknown = true;
      return fit;
    }
    FitPoint p{family[i], nf.trace.count, hr.trace.count};
    (i % 2 == 0 ? fit.training : fit.held_out).push_back(p);
  }
  Rational a{0};
  for (std::size_t i = 0; i < fit.training.size(); ++i)
    for (std::size_t j = 0; j < fit.training.size(); ++j) {
      const auto& p = fit.training[i];
      const auto& q = fit.training[j];
      if (q.normal_steps <= p.normal_steps) continue;
      Rational slope(static_cast<long long>(q.head_steps) - static_cast<long long>(p.head_steps),
                     static_cast<long long>(q.normal_steps) - static_cast<long long>(p.normal_steps));
      if (slope > a) a = slope;
    }
  fit.A = a;
  bool first = true;
  for (const auto& p : fit.training) {
    Rational need = Rational(static_cast<long long>(p.head_steps)) - a * static_cast<long long>(p.normal_steps);
    if (first || need > fit.B) fit.B = need;
    first = false;
  }
  for (const auto& p : fit.held_out) {
    Rational bound = fit.A * static_cast<long long>(p.normal_steps) + fit.B;
    if (Rational(static_cast<long long>(p.head_steps)) > bound) fit.violations.push_back(p);
  }
  return fit;
}

inline std::string rational_text(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace lamlab
