#include <gtest/gtest.h>

#include "lamlab/lambda_c.hpp"

using namespace lamlab;

namespace {

Term c(const char* s) { return parse_term(s, Calculus::LambdaC); }
Term church(std::size_t n) { return encode(n, Encoding::Church); }

std::vector<Term> classical_corpus() {
  std::vector<Term> out;
  for (std::size_t n = 0; n <= 4; ++n)
    for (const auto& t : theta_variants(n, Encoding::Church, 4)) out.push_back(t);
  Term theta1 = builtin_term("theta1");
  out.push_back(theta1);
  out.push_back(Term::app(c("\\z. z"), theta1));
  out.push_back(c("\\x.\\f. (\\k. C (\\y. y (f (C (\\z. y (k x)))))) f"));
  return out;
}

}  // namespace

TEST(HeadReduceC, RuleTwo) {
  Reduction r = head_reduce_c(c("C t u v"), 1);
  EXPECT_TRUE(alpha_equal(r.term, c("t (\\x. x u v)")));
  EXPECT_EQ(r.trace.steps[0].rule, "C");
  EXPECT_EQ(r.trace.steps[0].position, "");

  EXPECT_TRUE(alpha_equal(head_reduce_c(c("C t")).term, c("t (\\x. x)")));
  EXPECT_TRUE(alpha_equal(head_reduce_c(c("(\\x. x) a #p")).term, c("a #p")));
}

TEST(HeadReduceC, BinderIsFreshForArguments) {
  Reduction r = head_reduce_c(c("C t x1 x"), 1);
  ASSERT_TRUE(r.term.arg().is(Kind::Lam));
  const std::string& k = r.term.arg().name();
  EXPECT_NE(k, "x");
  EXPECT_NE(k, "x1");
}

TEST(HeadReduceC, RuleTwoFreshnessOnTraces) {
  for (const auto& theta : classical_corpus()) {
    Term start = apps(theta, Term::var("x"), Term::var("g"), Term::stack("p0"));
    Reduction r = head_reduce_c(start, 10000, true);
    for (std::size_t k = 0; k < r.trace.count; ++k) {
      if (r.trace.steps[k].rule != "C") continue;
      Term after = r.trace.terms[k];
      while (after.is(Kind::Lam)) after = after.body();
      auto [h, args] = spine(after);
      ASSERT_FALSE(args.empty());
      const Term& cont = args[0];
      ASSERT_TRUE(cont.is(Kind::Lam));
      auto [xh, captured] = spine(cont.body());
      EXPECT_TRUE(xh.is(Kind::Var) && xh.name() == cont.name());
      for (const auto& t : captured) EXPECT_FALSE(t.has_free(cont.name()));
    }
  }
}

TEST(HeadReduceC, Deterministic) {
  for (const auto& theta : classical_corpus()) {
    Term start = apps(theta, Term::var("x"), Term::var("g"), Term::stack("p0"));
    Reduction a = head_reduce_c(start, 10000, true);
    Reduction b = head_reduce_c(start, 10000, true);
    ASSERT_EQ(a.trace.count, b.trace.count);
    for (std::size_t k = 0; k < a.trace.count; ++k) {
      EXPECT_EQ(a.trace.steps[k].position, b.trace.steps[k].position);
      EXPECT_EQ(render_term(a.trace.terms[k]), render_term(b.trace.terms[k]));
    }
  }
}

TEST(CSolvable, Examples) {
  CSolvable a = c_solvable(c("(\\x. x) f"));
  EXPECT_EQ(a.status, Solvability::Yes);
  EXPECT_EQ(a.head, "f");
  EXPECT_TRUE(a.args.empty());

  EXPECT_EQ(c_solvable(c("(\\x. x x) (\\x. x x)"), 100).status, Solvability::Unknown);

  // (C)λk.(k)y → (λk.(k)y)λx.x → (λx.x)y → y
  CSolvable b = c_solvable(c("C (\\k. k y)"));
  EXPECT_EQ(b.status, Solvability::Yes);
  EXPECT_EQ(b.head, "y");
  EXPECT_EQ(b.reduction.trace.count, 3u);

  EXPECT_EQ(c_solvable(c("\\x. x")).status, Solvability::No);
}

TEST(ExtractValueClassical, ThetaOne) {
  ClassicalValueTrace tr = extract_value_classical(builtin_term("theta1"));
  ASSERT_EQ(tr.status, RunStatus::Ok) << tr.note;
  EXPECT_EQ(tr.value, 1u);
  ASSERT_EQ(tr.segments.size(), 3u);
  // (θ1) x g p0 ▷ (g) t1 p0
  auto [h, args] = spine(tr.segments[0].head_normal_form);
  ASSERT_TRUE(h.is(Kind::Var));
  EXPECT_EQ(h.name(), "g");
  ASSERT_EQ(args.size(), 2u);
  EXPECT_TRUE(args[1].is(Kind::Stack));
  EXPECT_EQ(args[1].name(), "p0");
  // (t1) p1 ▷ (g) t2 p0 and (t2) p2 ▷ (x) p2
  EXPECT_EQ(tr.segments[1].r, 0u);
  EXPECT_EQ(tr.segments[2].tag, "x-step");
  EXPECT_EQ(tr.segments[2].r, 2u);
  EXPECT_EQ(tr.J, (std::vector<std::size_t>{0, 1, 1}));
}

TEST(ExtractValueClassical, ChurchTwoByHand) {
  ClassicalValueTrace tr = extract_value_classical(church(2));
  ASSERT_EQ(tr.status, RunStatus::Ok);
  ASSERT_EQ(tr.segments.size(), 3u);
  EXPECT_EQ(tr.segments[0].r, 0u);
  EXPECT_EQ(tr.segments[1].r, 1u);
  EXPECT_EQ(tr.segments[2].r, 2u);
  EXPECT_EQ(tr.J[2], 2u);
  EXPECT_EQ(tr.value, 2u);
}

TEST(ExtractValueClassical, ChurchIntegers) {
  for (std::size_t n = 0; n <= 8; ++n) {
    ClassicalValueTrace tr = extract_value_classical(church(n));
    ASSERT_EQ(tr.status, RunStatus::Ok);
    EXPECT_EQ(tr.value, n);
  }
  ClassicalValueTrace zero = extract_value_classical(church(0));
  ASSERT_EQ(zero.segments.size(), 1u);
  EXPECT_EQ(zero.segments[0].tag, "x-step");
}

TEST(ExtractValueClassical, ShapesAndRecurrence) {
  for (const auto& theta : classical_corpus()) {
    ClassicalValueTrace tr = extract_value_classical(theta);
    ASSERT_EQ(tr.status, RunStatus::Ok) << render_term(theta);
    ASSERT_EQ(tr.J.size(), tr.segments.size());
    EXPECT_EQ(tr.J[0], 0u);
    for (std::size_t i = 0; i + 1 < tr.segments.size(); ++i) {
      EXPECT_EQ(tr.segments[i].tag, "g-step");
      EXPECT_EQ(tr.J[i + 1], tr.J[tr.segments[i].r] + 1);
      // I(i+1) = I(r_i) - 1 with I(0) = n
      EXPECT_EQ(tr.I[i + 1], tr.I[tr.segments[i].r] - 1);
    }
    EXPECT_EQ(tr.I[0], static_cast<long long>(tr.value));
    EXPECT_EQ(tr.I[tr.segments.back().r], 0);
  }
}

TEST(ExtractValueClassical, Malformed) {
  EXPECT_EQ(extract_value_classical(c("\\x.\\f. f")).status, RunStatus::MalformedBehavior);
  EXPECT_EQ(extract_value_classical(c("\\x.\\f. (\\y. y y) (\\y. y y)"), 100).status, RunStatus::FuelExhausted);
}

TEST(SymbolicRun, StorageOperators) {
  for (const char* op : {"T1", "T2"}) {
    for (std::size_t n = 0; n <= 6; ++n) {
      SymbolicRun run = symbolic_run_classical(builtin_term(op), n);
      ASSERT_EQ(run.status, RunStatus::Ok) << op << " " << n << ": " << run.note;
      ASSERT_TRUE(run.m);
      EXPECT_EQ(*run.m, n);
      EXPECT_EQ(beta_equiv(*run.tau, church(n)), Equivalence::Equal);
    }
  }
  SymbolicRun t1 = symbolic_run_classical(builtin_term("T1"), 3);
  Term tower = church(0);
  for (int i = 0; i < 3; ++i) tower = Term::app(builtin_term("s_church"), tower);
  EXPECT_TRUE(alpha_equal(*t1.tau, tower));
}

TEST(SymbolicRun, ConstantFunctionIgnoresNu) {
  SymbolicRun run = symbolic_run_classical(c("\\v.\\f. f (\\x.\\f. x)"), 5);
  ASSERT_EQ(run.status, RunStatus::Ok);
  EXPECT_EQ(*run.m, 0u);
  EXPECT_TRUE(run.oracles.empty());
}

TEST(SymbolicRun, Malformed) {
  EXPECT_EQ(symbolic_run_classical(c("\\v.\\f. v"), 2).status, RunStatus::MalformedBehavior);
}

TEST(CheckStorageClassical, Examples) {
  ClassicalStorageReport a = check_storage_classical(builtin_term("T1"), builtin_term("theta1"), 1);
  EXPECT_EQ(a.verdict, Verdict::Pass) << a.note;
  ASSERT_TRUE(a.replay);
  EXPECT_TRUE(alpha_equal(*a.replay, church(1)));

  EXPECT_EQ(check_storage_classical(builtin_term("T2"), church(3), 3).verdict, Verdict::Pass);

  Term bad = c("\\v.\\f. f (C (T v))");
  bad = substitute(bad, "T", builtin_term("T1"));
  ClassicalStorageReport b = check_storage_classical(bad, builtin_term("theta1"), 1);
  EXPECT_NE(b.verdict, Verdict::Pass);
}

TEST(CheckStorageClassical, WrongExpectation) {
  EXPECT_EQ(check_storage_classical(builtin_term("T1"), builtin_term("theta1"), 2).verdict, Verdict::Fail);
}
