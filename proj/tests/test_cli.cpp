// Runs the lamlab binary and checks exit codes and output.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = std::string(LAMLAB_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has(const Result& r, const std::string& s) { return r.out.find(s) != std::string::npos; }

const std::string data = LAMLAB_DATA_DIR;

}  // namespace

TEST(Cli, ReduceTrace) {
  Result r = run(R"(reduce --calculus lambda --trace '(\x.x) y')");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "step 1: beta at root: y\ny\n1 step\nHeadNormalForm\n");
}

TEST(Cli, ReduceOutOfFuel) {
  Result r = run(R"(reduce --fuel 50 '(\x.x x)(\x.x x)')");
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has(r, "FuelExhausted"));
}

TEST(Cli, NormalizeEachCalculus) {
  EXPECT_EQ(run(R"(normalize '\z.(\x.x) z')").out, "\\z. z\n1 step\nNormalForm\n");
  EXPECT_EQ(run(R"(normalize --calculus lambda-c 'C (\k. k y) (\v. v)')").code, 0);
  Result mu = run(R"(normalize --calculus lambda-mu --innermost '(mu a [a] \x. x) y')");
  EXPECT_EQ(mu.code, 0);
  EXPECT_TRUE(has(mu, "NormalForm"));
}

TEST(Cli, Equiv) {
  EXPECT_EQ(run(R"(equiv '\x.x' '(\y.y) (\z.z)')").code, 0);
  EXPECT_EQ(run(R"(equiv '\x.x' '\x.\y.x')").code, 1);
  EXPECT_EQ(run(R"(equiv --fuel 20 '\x.x' '(\x.x x)(\x.x x)')").code, 2);
  EXPECT_EQ(run(R"(equiv --calculus lambda-mu '(mu a [a] x) y' 'mu a [a] x y')").code, 0);
}

TEST(Cli, CheckStoragePasses) {
  Result r = run("check-storage --builtin T1 --n 3 --encoding church");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "Pass\n"));
  EXPECT_TRUE(has(r, "decodes to 3\n"));
}

TEST(Cli, CheckStorageFails) {
  Result r = run("check-storage --builtin naive --n 2 --variants 3");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r, "Fail\n"));
}

TEST(Cli, CheckStorageUnknown) {
  EXPECT_EQ(run("check-storage --builtin T1 --n 3 --fuel 3").code, 2);
}

TEST(Cli, CheckStorageClassicalAndMu) {
  EXPECT_EQ(run("check-storage --calculus lambda-c --builtin T1 --theta builtin:theta1 --n 1").code, 0);
  EXPECT_EQ(run("check-storage --calculus lambda-mu --builtin T1 --theta builtin:theta_mu --n 3").code, 0);
  EXPECT_EQ(run("check-storage --calculus lambda-mu --builtin T1 --theta builtin:theta_mu --n 4").code, 1);
}

TEST(Cli, CheckStorageDirected) {
  EXPECT_EQ(run("check-storage-directed --builtin T2 --n 2").code, 0);
  EXPECT_EQ(run("check-storage-directed --builtin naive --n 2").code, 1);
}

TEST(Cli, ExtractValue) {
  Result r = run("extract-value --calculus lambda-c --builtin theta1");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "value 1\n"));
  EXPECT_EQ(run(R"(extract-value --calculus lambda-c '\x.\f. f')").code, 1);
  EXPECT_EQ(run(R"(extract-value --calculus lambda-c --fuel 5 '\x.\f. (\y.y y)(\y.y y)')").code, 2);
  EXPECT_EQ(run(R"(extract-value --calculus lambda '\x.\f. f (f x)')").out, "value 2\n");
}

TEST(Cli, SymbolicRun) {
  Result r = run("symbolic-run --builtin T2 --n 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "m = 3\n"));
}

TEST(Cli, MuCommands) {
  EXPECT_EQ(run("reduce-mu '(mu a [a] x) y'").out, "C2 at root\nS2 at f\n");
  EXPECT_EQ(run("reduce-mu --rule C2 --position root '(mu a [a] x) y'").code, 0);
  EXPECT_EQ(run("reduce-mu --rule C1 --position root '(mu a [a] x) y'").code, 1);
  EXPECT_EQ(run("rep x").out, "{0}\n");
  EXPECT_EQ(run("val --builtin theta_mu").out, "{3}\n");
  EXPECT_EQ(run(R"(rep '\y. y')").code, 1);
  EXPECT_TRUE(has(run("extract-value-mu --builtin theta_mu"), "value 3\n"));
  EXPECT_EQ(run(R"(extract-value-mu '\x. x')").code, 1);
}

TEST(Cli, Formulas) {
  EXPECT_EQ(run("translate --builtin 'N[x]' --mode g").out,
            "forall X. ~X(0) -> (forall y. ~X(y) -> ~X(s(y))) -> ~X(x)\n");
  EXPECT_EQ(run("translate --mode bot 'forall X:c. X:c -> X:c'").code, 3);
  EXPECT_EQ(run("translate --mode G --template 'X=:~Y' 'forall X. X -> X'").code, 0);
  Result c = run("classify --builtin 'N[x]'");
  EXPECT_EQ(c.code, 0);
  EXPECT_TRUE(has(c, "positive\n"));
}

TEST(Cli, CheckDerivation) {
  EXPECT_EQ(run("check-derivation --system AF2 " + data + "/church2.deriv").code, 0);
  EXPECT_EQ(run("check-derivation --system AF2 --equations @" + data + "/pred.eq " + data + "/church0_pred.deriv").code, 0);
  Result bad = run("check-derivation --system AF2 " + data + "/church0_pred.deriv");
  EXPECT_EQ(bad.code, 1);
  EXPECT_TRUE(has(bad, "equation not certified"));
  EXPECT_EQ(run("check-derivation --system AF2 " + data + "/c_axiom.deriv").code, 1);
  EXPECT_EQ(run("check-derivation --builtin mu_axiom_M2mu").code, 0);
  EXPECT_EQ(run("check-derivation --system AF2 " + data + "/missing.deriv").code, 3);
}

TEST(Cli, Builtins) {
  Result l = run("builtin --list");
  EXPECT_EQ(l.code, 0);
  EXPECT_TRUE(has(l, "term T1\n"));
  EXPECT_TRUE(has(l, "derivation successor\n"));
  EXPECT_EQ(run("builtin naive").out, "\\v.\\f. f v\n");
  EXPECT_EQ(run("builtin nonesuch").code, 3);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 3);
  EXPECT_EQ(run("frobnicate").code, 3);
  EXPECT_EQ(run("reduce --calculus kappa x").code, 3);
  EXPECT_EQ(run(R"(reduce '(\x.')").code, 3);
  EXPECT_EQ(run("check-storage --builtin T1").code, 3);
  EXPECT_EQ(run("reduce @/nonexistent/file.lam").code, 3);
}

TEST(Cli, JsonIsStable) {
  const std::string cmd = "check-storage --builtin T2 --n 2 --json";
  Result a = run(cmd), b = run(cmd);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(has(a, "\"verdict\": \"Pass\""));
  EXPECT_TRUE(has(a, "\"command\": \"check-storage\""));
  Result t = run(R"(reduce --json --trace '(\x.x) y')");
  EXPECT_TRUE(has(t, "\"trace\": [\n    \"step 1: beta at root: y\"\n  ]"));
}

TEST(Cli, FileInput) {
  Result r = run("reduce @" + data + "/omega_app.lam");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 2), "y\n");
}
