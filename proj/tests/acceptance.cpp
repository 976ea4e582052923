// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance                    exit 0 iff every criterion passes
//   acceptance --known-fail 10,11 exit 0 iff exactly the listed criteria fail

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "lamlab/derivation_corpus.hpp"
#include "lamlab/directed.hpp"
#include "lamlab/lambda_c.hpp"
#include "lamlab/lambda_mu.hpp"
#include "lamlab/storage.hpp"
#include "lamlab/translate.hpp"
#include "lemma.hpp"
#include "mutations.hpp"
#include "oracle.hpp"

using namespace lamlab;

namespace {

// Pinned thresholds.
constexpr std::size_t kMaxN = 8;                 // criteria 1, 2, 7
constexpr std::size_t kStorageVariants = 6;      // ≥ 5
constexpr std::size_t kNaiveVariants = 2;        // ≥ 2
constexpr std::size_t kLemmaTriples = 200;
constexpr int kLemmaDepth = 6;
constexpr std::size_t kDirectedMaxN = 5;
constexpr std::size_t kMinAgreements = 15;
constexpr std::size_t kFitVariants = 12;         // ≥ 10
constexpr std::size_t kDialogueMaxN = 6;
constexpr std::size_t kMuTerms = 300;
constexpr std::size_t kMuMaxSize = 12;
constexpr std::size_t kMuFuel = 60;
constexpr std::size_t kMinMutants = 20;
constexpr std::size_t kExampleMuValue = 4;

struct Check {
  bool pass = true;
  std::string detail;
};

// Hand-written literals, independent of the builtin table.
const char* kSucc = "\\n.\\x.\\f. n (f x) f";

Term church_literal(std::size_t n) {
  std::string body = "x";
  for (std::size_t i = 0; i < n; ++i) body = "f (" + body + ")";
  return parse_term("\\x.\\f. " + body);
}

Term recursive_literal(std::size_t n) {
  std::string t = "\\f.\\x. x";
  for (std::size_t i = 0; i < n; ++i) t = "\\f.\\x. f (" + t + ")";
  return parse_term(t);
}

Term tower_literal(std::size_t n) {
  std::string t = "\\x.\\f. x";
  for (std::size_t i = 0; i < n; ++i) t = "(" + std::string(kSucc) + ") (" + t + ")";
  return parse_term(t);
}

/// β-equal to n̲ by the de Bruijn reference normalizer.
bool oracle_is_church(const Term& t, std::size_t n) {
  auto r = oracle::normalize(oracle::from_term(t), 100000);
  return r.done && oracle::equal(r.term, oracle::church(static_cast<int>(n)));
}

Check storage() {
  std::size_t ok = 0, total = 0;
  std::string first;
  for (const char* op : {"T1", "T2"}) {
    for (std::size_t n = 0; n <= kMaxN; ++n) {
      ++total;
      StorageReport r = check_storage(builtin_term(op), n, Encoding::Church, kStorageVariants);
      bool good = r.verdict == lamlab::Verdict::Pass && r.runs.size() == kStorageVariants && r.tau &&
                  alpha_equal(*r.tau, tower_literal(n)) && oracle_is_church(*r.tau, n) && r.decoded == n;
      if (good) ++ok;
      else if (first.empty()) first = std::string(op) + " n=" + std::to_string(n) + ": " + r.note;
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " pass with tau = s^n 0" +
                           (first.empty() ? "" : "; first miss " + first)};
}

Check strong_storage() {
  std::size_t ok = 0, total = 0;
  for (std::size_t n = 0; n <= kMaxN; ++n) {
    ++total;
    StorageReport r = check_strong_storage(builtin_term("T'"), n, Encoding::Recursive, kStorageVariants);
    bool literal = !r.runs.empty();
    for (const auto& run : r.runs) literal = literal && run.result && alpha_equal(*run.result, recursive_literal(n));
    if (r.verdict == lamlab::Verdict::Pass && r.strong && literal) ++ok;
  }
  std::size_t weak = 0, weak_total = 0;
  for (const char* op : {"T1", "T2"})
    for (std::size_t n = 1; n <= kMaxN; ++n) {
      ++weak_total;
      StorageReport r = check_strong_storage(builtin_term(op), n, Encoding::Church, kStorageVariants);
      if (r.verdict == lamlab::Verdict::Pass && !r.strong) ++weak;
    }
  return {ok == total && weak == weak_total, "T' strong " + std::to_string(ok) + "/" + std::to_string(total) +
                                                 ", T1/T2 not strong " + std::to_string(weak) + "/" +
                                                 std::to_string(weak_total)};
}

Check negative_control() {
  Term naive = parse_term("\\v.\\f. f v");
  std::size_t ok = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    StorageReport r = check_storage(naive, n, Encoding::Church, kNaiveVariants);
    if (r.verdict == lamlab::Verdict::Fail && r.tau && r.tau->is(Kind::Var)) ++ok;
  }
  return {ok == 5, std::to_string(ok) + "/5 fail with a bare generalization variable"};
}

Check step_laws() {
  std::size_t subst = 0, appl = 0, nf = 0;
  auto triples = lemma::random_triples(kLemmaTriples, 2024, kLemmaDepth);
  for (const auto& t : triples) {
    lemma::Outcome o = lemma::check(t);
    subst += o.substitution_law;
    appl += o.application_law;
    nf += o.normal_forms_agree;
  }
  std::size_t n = triples.size();
  return {subst == n && appl == n && nf == n,
          "substitution " + std::to_string(subst) + "/" + std::to_string(n) + ", application " +
              std::to_string(appl) + "/" + std::to_string(n) + ", normal forms " + std::to_string(nf) + "/" +
              std::to_string(n)};
}

Check directed_agreement() {
  std::size_t agree = 0, disagree = 0;
  for (const char* op : {"T1", "T2", "naive"})
    for (std::size_t n = 0; n <= kDirectedMaxN; ++n) {
      auto d = check_storage_directed(builtin_term(op), church_literal(n)).verdict;
      auto s = check_storage(builtin_term(op), n, Encoding::Church).verdict;
      (d == s ? agree : disagree)++;
    }
  return {disagree == 0 && agree >= kMinAgreements,
          std::to_string(agree) + " agreements, " + std::to_string(disagree) + " disagreements"};
}

Check time_bound() {
  auto family = theta_variants(4, Encoding::Church, kFitVariants);
  TimeFit fit = fit_time_bound(builtin_term("T1"), family);
  bool ok = !fit.unknown && fit.held_out.size() * 2 >= family.size() && fit.violations.empty();
  return {ok, "A = " + rational_text(fit.A) + ", B = " + rational_text(fit.B) + ", " +
                  std::to_string(fit.held_out.size()) + " held out, " + std::to_string(fit.violations.size()) +
                  " violations"};
}

Check classical_trace() {
  ClassicalValueTrace tr = extract_value_classical(builtin_term("theta1"));
  bool first = false;
  if (!tr.segments.empty()) {
    auto [h, args] = spine(tr.segments[0].head_normal_form);
    first = h.is(Kind::Var) && h.name() == "g" && args.size() == 2 && args[1].is(Kind::Stack) &&
            args[1].name() == "p0";
  }
  std::size_t church_ok = 0;
  for (std::size_t n = 0; n <= kMaxN; ++n) {
    ClassicalValueTrace c = extract_value_classical(church_literal(n));
    if (c.status == RunStatus::Ok && c.value == n) ++church_ok;
  }
  bool ok = tr.status == RunStatus::Ok && tr.value == 1 && first && church_ok == kMaxN + 1;
  return {ok, "theta1 value " + std::to_string(tr.value) + (first ? ", first segment (g) t1 p0" : ", first segment off") +
                  ", church " + std::to_string(church_ok) + "/" + std::to_string(kMaxN + 1)};
}

Check dialogue() {
  std::size_t ok = 0, total = 0;
  for (const char* op : {"T1", "T2"})
    for (std::size_t n = 0; n <= kDialogueMaxN; ++n) {
      ++total;
      SymbolicRun r = symbolic_run_classical(builtin_term(op), n);
      if (r.status == RunStatus::Ok && r.m == n && r.tau && oracle_is_church(*r.tau, n)) ++ok;
    }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " runs give m = n and tau = n"};
}

Check classical_storage() {
  ClassicalStorageReport r = check_storage_classical(builtin_term("T1"), builtin_term("theta1"), 1);
  bool replay = r.replay && alpha_equal(*r.replay, church_literal(1));
  return {r.verdict == lamlab::Verdict::Pass && replay,
          std::string(verdict_name(r.verdict)) + ", replay " + (r.replay ? render_term(*r.replay) : "none")};
}

Check mu_values() {
  // The example body as printed.
  Term theta = parse_term(
      "\\x.\\f. f (mu alpha [alpha] f (mu phi [alpha] f (mu psi [alpha] f (mu beta [phi] f "
      "(mu delta [beta] f (mu gamma [alpha] f (mu rho [beta] f x)))))))",
      Calculus::LambdaMu);
  const Term& u = theta.body().body();
  IntSet r = rep(u), v = val(u);
  MuDecomposition d = extract_value_mu(theta);
  IntSet want = IntSet::of({kExampleMuValue});
  bool ok = r == want && v == want && d.value == kExampleMuValue && rep(Term::var("x")) == IntSet::of({0});
  return {ok, "rep(u) = " + r.text() + ", val(u) = " + v.text() + ", extract_value_mu = " + std::to_string(d.value) +
                  ", rep(x) = " + rep(Term::var("x")).text() + " (expected " + want.text() + ")"};
}

/// Random redex choices until a normal form or the fuel runs out.
Reduction random_walk(const Term& t, std::mt19937_64& rng, std::size_t fuel) {
  Reduction r{t, {}};
  while (r.trace.count < fuel) {
    auto rs = mu_redexes(r.term);
    if (rs.empty()) return r;
    const Step& s = rs[std::uniform_int_distribution<std::size_t>(0, rs.size() - 1)(rng)];
    r.term = reduce_mu_step(r.term, s.position, parse_mu_rule(s.rule));
    r.trace.add(s.position, s.rule);
  }
  if (!mu_redexes(r.term).empty()) r.trace.outcome = Outcome::FuelExhausted;
  return r;
}

Check confluence() {
  oracle::MuGen gen(7);
  std::mt19937_64 rng(11);
  std::size_t terms = 0, pairs = 0, violations = 0, unknown = 0;
  std::string witness;
  while (terms < kMuTerms) {
    Term t = gen.term(static_cast<int>(kMuMaxSize));
    if (t.size() > kMuMaxSize) continue;
    ++terms;
    std::vector<std::pair<Term, Term>> todo;
    todo.push_back({normalize_mu(t, kMuFuel, false).term, normalize_mu(t, kMuFuel, true).term});
    todo.push_back({random_walk(t, rng, kMuFuel / 4).term, random_walk(t, rng, kMuFuel / 4).term});
    for (const auto& [a, b] : todo) {
      ++pairs;
      if (alpha_equal(a, b)) continue;
      bool na = mu_redexes(a).empty(), nb = mu_redexes(b).empty();
      if (na && nb) {
        // two distinct normal forms
        if (violations++ == 0) witness = render_term(t) + " => " + render_term(a) + " | " + render_term(b);
        continue;
      }
      if (mu_joinable(a, b) != Joinable::Yes) ++unknown;
    }
  }
  return {violations == 0 && unknown == 0,
          std::to_string(pairs) + " pairs from " + std::to_string(terms) + " terms, " + std::to_string(violations) +
              " violations, " + std::to_string(unknown) + " not rejoined within budget" +
              (witness.empty() ? "" : "; e.g. " + witness)};
}

Check derivation_corpus() {
  std::size_t accepted = 0, normal = 0, mutants = 0, rejected = 0;
  std::size_t fewest = SIZE_MAX;
  std::vector<std::pair<Derivation, std::optional<std::size_t>>> items;
  for (std::size_t n = 0; n <= 3; ++n) items.push_back({corpus::church(n), n});
  items.push_back({corpus::successor(), std::nullopt});
  for (const auto& [d, n] : items) {
    if (check_derivation(d, System::AF2).ok) {
      ++accepted;
      if (n && alpha_equal(normalize(d.conclusion.subject).term, church_literal(*n))) ++normal;
    }
    auto ms = mutation::single_node_mutations(d);
    fewest = std::min(fewest, ms.size());
    for (const auto& m : ms) {
      ++mutants;
      rejected += !check_derivation(m.derivation, System::AF2).ok;
    }
  }
  bool ok = accepted == items.size() && normal == 4 && fewest >= kMinMutants && rejected == mutants;
  return {ok, std::to_string(accepted) + "/" + std::to_string(items.size()) + " accepted, " + std::to_string(normal) +
                  "/4 normalize to n, " + std::to_string(rejected) + "/" + std::to_string(mutants) +
                  " mutants rejected (fewest per derivation " + std::to_string(fewest) + ")"};
}

Check translation_goldens() {
  Formula ng = parse_formula("forall X{~X(0), forall y(~X(y) -> ~X(s(y))) -> ~X(x)}");
  bool g = alpha_equal(translate(builtin_formula("N[x]"), Translation::G), ng);
  bool pos = classify_positivity(builtin_formula("N[x]")) == Positivity::Positive;
  bool d = classify_positivity(parse_formula("forall X. (forall Y. Y -> X) -> X")) != Positivity::Positive;
  // Shape clauses: ⊥-types and classical types.
  std::size_t shapes = 0, shape_total = 0;
  auto check = [&](const char* f, bool bot, bool classical, const char* ends) {
    ++shape_total;
    ShapeReport s = classify_shape(parse_formula(f));
    shapes += s.is_bot_type == bot && s.is_classical_type == classical && s.ends_with == ends;
  };
  check("bot", true, true, "bot");
  check("X:b(t)", true, false, "X:b");
  check("A -> X:b(t)", true, false, "X:b");
  check("(forall X. X) -> A -> bot", true, true, "bot");
  check("forall y. forall Z. X:b(y)", true, false, "X:b");
  check("bot -> X(t)", false, false, "X");
  check("X:c(t)", false, true, "X:c");
  check("forall x. B -> X:c(t)", false, true, "X:c");
  check("A -> Y(x)", false, false, "Y");
  check("~~X -> X", false, false, "X");
  check("forall X:c. ~~X:c -> X:c", false, true, "X:c");
  bool ok = g && pos && d && shapes == shape_total;
  return {ok, std::string("N^g ") + (g ? "matches" : "differs") + ", N[x] " + (pos ? "positive" : "not positive") +
                  ", D " + (d ? "not positive" : "positive") + ", shapes " + std::to_string(shapes) + "/" +
                  std::to_string(shape_total)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--known-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string x; std::getline(ss, x, ',');) known.insert(std::stoi(x));
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-fail N[,N...]]\n");
      return 3;
    }
  }

  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"storage T1/T2, n = 0..8", storage},
      {"strong storage", strong_storage},
      {"negative control", negative_control},
      {"head step laws", step_laws},
      {"directed vs sampling", directed_agreement},
      {"time bound held out", time_bound},
      {"classical value trace", classical_trace},
      {"oracle dialogue", dialogue},
      {"classical storage", classical_storage},
      {"lambda-mu values", mu_values},
      {"lambda-mu confluence probe", confluence},
      {"derivation corpus", derivation_corpus},
      {"translation goldens", translation_goldens},
  };

  std::set<int> failed;
  int k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    auto t0 = std::chrono::steady_clock::now();
    Check v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) failed.insert(k);
    std::printf("%s %2d %s: %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", k, name, v.detail.c_str(), secs);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  if (known.empty()) return failed.empty() ? 0 : 1;
  if (failed != known) {
    std::printf("failures differ from the expected set\n");
    return 1;
  }
  return 0;
}
