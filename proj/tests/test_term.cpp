#include <gtest/gtest.h>

#include "lamlab/reduction.hpp"
#include "lamlab/syntax.hpp"
#include "oracle.hpp"

using namespace lamlab;

namespace {

Term p(const char* s) { return parse_term(s); }

}  // namespace

TEST(Parse, AbstractionsNestAndApplicationAssociatesLeft) {
  Term t = p("\\x.\\f. f (f x)");
  ASSERT_TRUE(t.is(Kind::Lam));
  EXPECT_EQ(t.name(), "x");
  ASSERT_TRUE(t.body().is(Kind::Lam));
  EXPECT_EQ(t.body().name(), "f");
  EXPECT_TRUE(alpha_equal(t.body().body(), Term::app(Term::var("f"), Term::app(Term::var("f"), Term::var("x")))));

  Term u = p("(t) u v");
  EXPECT_TRUE(alpha_equal(u, apps(Term::var("t"), Term::var("u"), Term::var("v"))));
}

TEST(Parse, AbstractionBodyExtendsRight) {
  Term t = p("\\x. x y");
  ASSERT_TRUE(t.is(Kind::Lam));
  EXPECT_TRUE(t.body().is(Kind::App));
}

TEST(Parse, UnicodeLambdaMultipleBindersAndComments) {
  Term a = p("λx f. f x -- trailing comment");
  Term b = p("\\x.\\f.(f) x");
  EXPECT_TRUE(alpha_equal(a, b));
}

TEST(Parse, TrailingAbstractionIsLastArgument) {
  EXPECT_TRUE(alpha_equal(p("f \\x. x"), Term::app(Term::var("f"), p("\\x.x"))));
}

TEST(Parse, ErrorsCarryLineAndColumn) {
  try {
    parse_term("\\x.\n  (x y");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 7u);
  }
  EXPECT_THROW(parse_term("x ?"), ParseError);
  EXPECT_THROW(parse_term("\\. x"), ParseError);
  EXPECT_THROW(parse_term(""), ParseError);
}

TEST(Parse, CalculusSpecificConstructsAreGated) {
  EXPECT_THROW(parse_term("mu a [a] x"), ParseError);
  EXPECT_NO_THROW(parse_term("mu a [a] x", Calculus::LambdaMu));
  EXPECT_THROW(parse_term("f #p"), ParseError);
  EXPECT_NO_THROW(parse_term("f #p", Calculus::LambdaC));
  EXPECT_THROW(parse_term("#p f", Calculus::LambdaC), ParseError);
  EXPECT_TRUE(parse_term("C", Calculus::LambdaC).is(Kind::ConstC));
  EXPECT_TRUE(parse_term("C").is(Kind::Var));
  EXPECT_TRUE(parse_term("[\\x. y]{a/y}", Calculus::Directed).is(Kind::Box));
}

TEST(Render, ChurchZeroAndApplication) {
  EXPECT_EQ(render_term(p("\\x.\\f.x")), "\\x.\\f. x");
  EXPECT_EQ(render_term(Term::app(Term::var("x"), Term::var("y"))), "x y");
  EXPECT_EQ(render_term(p("(\\x.x) (f g) (\\y.y)")), "(\\x. x) (f g) (\\y. y)");
}

TEST(Render, ShadowingBindersAreRenamed) {
  Term t = Term::lam("x", Term::lam("x", Term::var("x")));
  std::string s = render_term(t);
  EXPECT_EQ(s, "\\x.\\x1. x1");
  EXPECT_TRUE(alpha_equal(parse_term(s), t));
}

TEST(Render, RoundTripOnRandomTerms) {
  oracle::Gen gen(7);
  for (int i = 0; i < 500; ++i) {
    Term t = gen.term(6);
    EXPECT_TRUE(alpha_equal(parse_term(render_term(t)), t)) << render_term(t);
  }
}

TEST(Render, RoundTripMuBoxAndStack) {
  Term mu = parse_term("\\x f. f (mu a [a] f (mu b [a] x))", Calculus::LambdaMu);
  EXPECT_TRUE(alpha_equal(parse_term(render_term(mu), Calculus::LambdaMu), mu));
  Term nested = Term::mu("a", "a", Term::mu("a", "a", Term::var("x")));
  EXPECT_TRUE(alpha_equal(parse_term(render_term(nested), Calculus::LambdaMu), nested));
  Term box = parse_term("[\\x. x y]{(\\z.z)/y} w", Calculus::Directed);
  EXPECT_TRUE(alpha_equal(parse_term(render_term(box), Calculus::Directed), box));
  Term c = parse_term("C (\\k. k y) #p0", Calculus::LambdaC);
  EXPECT_EQ(render_term(c), "C (\\k. k y) #p0");
}

TEST(Alpha, BinderNamesDoNotMatterButFreeNamesDo) {
  EXPECT_TRUE(alpha_equal(p("\\x. x"), p("\\y. y")));
  EXPECT_FALSE(alpha_equal(p("\\x. y"), p("\\x. z")));
  EXPECT_FALSE(alpha_equal(p("\\x.\\y. x"), p("\\x.\\y. y")));
  EXPECT_EQ(canonical_key(p("\\x.\\y. x y")), canonical_key(p("\\a.\\b. a b")));
  EXPECT_NE(canonical_key(p("\\x.\\y. x y")), canonical_key(p("\\a.\\b. b a")));
}

TEST(Substitute, Basic) {
  EXPECT_TRUE(alpha_equal(substitute(p("x"), "x", p("\\y.y")), p("\\y.y")));
}

TEST(Substitute, AvoidsCapture) {
  Term r = substitute(p("\\x. x y"), "y", p("x"));
  ASSERT_TRUE(r.is(Kind::Lam));
  EXPECT_NE(r.name(), "x");
  EXPECT_TRUE(alpha_equal(r, p("\\x1. x1 x")));
}

TEST(Substitute, IsSimultaneous) {
  Term r = substitute(p("x y"), Substitution{{"x", p("f")}, {"y", p("f")}});
  EXPECT_TRUE(alpha_equal(r, p("f f")));
  Term swap = substitute(p("x y"), Substitution{{"x", p("y")}, {"y", p("x")}});
  EXPECT_TRUE(alpha_equal(swap, p("y x")));
}

TEST(Substitute, AgreesWithDeBruijnOracle) {
  oracle::Gen gen(11);
  for (int i = 0; i < 300; ++i) {
    Term body = gen.term(5);
    Term arg = gen.term(3);
    Term redex = Term::app(Term::lam("x", body), arg);
    Term ours = substitute(body, "x", arg);
    auto ref = oracle::step(oracle::from_term(redex));
    ASSERT_TRUE(ref.has_value());
    EXPECT_TRUE(oracle::equal(*ref, oracle::from_term(ours))) << render_term(redex);
  }
}

TEST(HeadReduce, Examples) {
  auto r = head_reduce(p("(\\x.x) y"), 10);
  EXPECT_TRUE(alpha_equal(r.term, p("y")));
  EXPECT_EQ(r.trace.count, 1u);
  EXPECT_EQ(r.trace.outcome, Outcome::HeadNormalForm);

  auto r2 = head_reduce(p("(\\x.\\g. g x) a b"), 10);
  EXPECT_TRUE(alpha_equal(r2.term, p("b a")));
  EXPECT_EQ(r2.trace.count, 2u);

  auto r3 = head_reduce(p("(\\x. x x) (\\x. x x)"), 50);
  EXPECT_EQ(r3.trace.outcome, Outcome::FuelExhausted);
  EXPECT_EQ(r3.trace.count, 50u);
}

TEST(HeadReduce, StopsAtHeadNormalFormUnderPrefix) {
  auto r = head_reduce(p("\\z. z ((\\x.x) y)"), 10);
  EXPECT_EQ(r.trace.count, 0u);
  auto r2 = head_reduce(p("\\z. (\\x. x) z w"), 10, true);
  EXPECT_EQ(r2.trace.count, 1u);
  EXPECT_EQ(r2.trace.steps[0].position, "lf");
  EXPECT_EQ(r2.trace.steps[0].rule, "beta");
  ASSERT_EQ(r2.trace.terms.size(), 1u);
  EXPECT_EQ(trace_lines(r2.trace)[0], "step 1: beta at lf: \\z. z w");
}

TEST(HeadReduce, CountEqualsStepsLength) {
  oracle::Gen gen(3);
  for (int i = 0; i < 200; ++i) {
    auto r = head_reduce(gen.term(6), 200);
    EXPECT_EQ(r.trace.count, r.trace.steps.size());
  }
}

TEST(Normalize, Examples) {
  auto r = normalize(p("(\\x. x x) (\\y. y)"));
  EXPECT_TRUE(alpha_equal(r.term, p("\\y.y")));
  EXPECT_EQ(r.trace.count, 2u);
  EXPECT_EQ(r.trace.outcome, Outcome::NormalForm);

  auto three = p("\\x.\\f. f (f (f x))");
  auto r2 = normalize(three);
  EXPECT_TRUE(alpha_equal(r2.term, three));
  EXPECT_EQ(r2.trace.count, 0u);
}

TEST(Normalize, SuccessorTwiceOnZeroGivesTwoByOracle) {
  Term s = p("\\n.\\x.\\f. n (f x) f");
  Term t = Term::app(s, Term::app(s, p("\\x.\\f. x")));
  auto r = normalize(t);
  auto ref = oracle::normalize(oracle::from_term(t), 1000);
  ASSERT_TRUE(ref.done);
  EXPECT_TRUE(oracle::equal(ref.term, oracle::church(2)));
  EXPECT_TRUE(oracle::equal(oracle::from_term(r.term), ref.term));
}

TEST(Normalize, AgreesWithOracleOnRandomTerms) {
  oracle::Gen gen(5);
  int compared = 0;
  for (int i = 0; i < 400; ++i) {
    Term t = gen.term(6);
    auto ref = oracle::normalize(oracle::from_term(t), 300);
    auto ours = normalize(t, 300);
    if (!ref.done) {
      EXPECT_EQ(ours.trace.outcome, Outcome::FuelExhausted);
      continue;
    }
    ++compared;
    ASSERT_EQ(ours.trace.outcome, Outcome::NormalForm) << render_term(t);
    EXPECT_TRUE(oracle::equal(oracle::from_term(ours.term), ref.term)) << render_term(t);
    EXPECT_EQ(ours.trace.count, ref.steps) << render_term(t);
  }
  EXPECT_GT(compared, 300);
}

TEST(Normalize, RecordedTraceMatchesPlainNormalization) {
  oracle::Gen gen(9);
  for (int i = 0; i < 150; ++i) {
    Term t = gen.term(5);
    auto a = normalize(t, 200);
    auto b = normalize_recorded(t, 200);
    EXPECT_EQ(a.trace.outcome, b.trace.outcome);
    if (a.exhausted()) continue;
    EXPECT_TRUE(alpha_equal(a.term, b.term));
    ASSERT_EQ(a.trace.count, b.trace.count);
    for (std::size_t k = 0; k < a.trace.count; ++k) EXPECT_EQ(a.trace.steps[k].position, b.trace.steps[k].position);
    EXPECT_EQ(b.trace.terms.size(), b.trace.count);
  }
}

TEST(BetaEquiv, Examples) {
  EXPECT_EQ(beta_equiv(p("(\\x.x) y"), p("y")), Equivalence::Equal);
  EXPECT_EQ(beta_equiv(p("\\x.\\f. f x"), p("\\x.\\f. f (f x)")), Equivalence::Distinct);
  Term omega = p("(\\x. x x) (\\x. x x)");
  Term omega2 = p("(\\y. y y) (\\y. y y) z");
  EXPECT_EQ(beta_equiv(omega2, omega2, 100), Equivalence::Equal);  // α-equal inputs short-circuit
  EXPECT_EQ(beta_equiv(omega, p("(\\x. x x x) (\\x. x x x)"), 100), Equivalence::Unknown);
}

TEST(BetaEquiv, ReflexiveSymmetricTransitiveOnCorpus) {
  oracle::Gen gen(21);
  std::vector<Term> corpus;
  for (int i = 0; i < 40; ++i) corpus.push_back(gen.term(4));
  for (const auto& a : corpus) EXPECT_EQ(beta_equiv(a, a, 200), Equivalence::Equal);
  for (const auto& a : corpus)
    for (const auto& b : corpus) EXPECT_EQ(beta_equiv(a, b, 200), beta_equiv(b, a, 200));
  for (const auto& a : corpus)
    for (const auto& b : corpus)
      for (const auto& c : corpus) {
        if (beta_equiv(a, b, 200) == Equivalence::Equal && beta_equiv(b, c, 200) == Equivalence::Equal)
        {
          EXPECT_NE(beta_equiv(a, c, 200), Equivalence::Distinct);
        }
      }
}
