#pragma once

// Integer encodings, the named builtin terms, and the catalogue of
// β-equivalent representatives used to sample "for every θ ≃β n".

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reduction.hpp"
#include "syntax.hpp"

namespace lamlab {

enum class Encoding { Church, Recursive };

inline const char* encoding_name(Encoding e) { return e == Encoding::Church ? "church" : "recursive"; }

/// Church n̲ = λx.λf.(f)^n x;  recursive 0̄ = λf.λx.x, (n+1)‾ = λf.λx.(f)n̄.
inline Term encode(std::size_t n, Encoding e) {
  if (e == Encoding::Church) {
    Term body = Term::var("x");
    for (std::size_t i = 0; i < n; ++i) body = Term::app(Term::var("f"), body);
    return Term::lam("x", Term::lam("f", body));
  }
  Term t = Term::lam("f", Term::lam("x", Term::var("x")));
  for (std::size_t i = 0; i < n; ++i) t = Term::lam("f", Term::lam("x", Term::app(Term::var("f"), t)));
  return t;
}

/// Structural recognition of a β-normal integer.
inline std::optional<std::size_t> match_integer(const Term& t, Encoding e) {
  if (e == Encoding::Church) {
    if (!t.is(Kind::Lam) || !t.body().is(Kind::Lam)) return std::nullopt;
    const std::string& x = t.name();
    const std::string& f = t.body().name();
    if (x == f) return std::nullopt;
    Term b = t.body().body();
    std::size_t n = 0;
    while (b.is(Kind::App) && b.fun().is(Kind::Var) && b.fun().name() == f) {
      ++n;
      b = b.arg();
    }
    if (b.is(Kind::Var) && b.name() == x) return n;
    return std::nullopt;
  }
  std::size_t n = 0;
  Term cur = t;
  for (;;) {
    if (!cur.is(Kind::Lam) || !cur.body().is(Kind::Lam)) return std::nullopt;
    const std::string& f = cur.name();
    const std::string& x = cur.body().name();
    if (x == f) return std::nullopt;
    const Term& b = cur.body().body();
    if (b.is(Kind::Var) && b.name() == x) return n;
    if (b.is(Kind::App) && b.fun().is(Kind::Var) && b.fun().name() == f && b.arg().closed()) {
      ++n;
      cur = b.arg();
      continue;
    }
    return std::nullopt;
  }
}

struct Decoded {
  enum Status { Value, NotAnInteger, Unknown } status = NotAnInteger;
  std::size_t value = 0;
};

inline Decoded decode(const Term& t, Encoding e, std::size_t fuel = default_fuel) {
  Reduction r = normalize(t, fuel);
  if (r.exhausted()) return {Decoded::Unknown, 0};
  if (auto n = match_integer(r.term, e)) return {Decoded::Value, *n};
  return {Decoded::NotAnInteger, 0};
}

// ---------------------------------------------------------------------------
// Builtins

struct UnknownBuiltin : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BuiltinEntry {
  Calculus calculus;
  std::string source;
};

namespace detail {

inline const std::map<std::string, BuiltinEntry>& builtin_table() {
  // Sources are re-parsed on each lookup.
  static const std::map<std::string, BuiltinEntry> table = [] {
    const std::string zero = "(\\x.\\f. x)";
    const std::string zero_r = "(\\f.\\x. x)";
    const std::string s = "(\\n.\\x.\\f. n (f x) f)";
    const std::string s_bar = "(\\n.\\f.\\x. f n)";
    const std::string delta = "(\\f. f " + zero + ")";
    const std::string g = "(\\x.\\y. x (\\z. y (" + s + " z)))";
    const std::string big_f = "(\\x.\\y. x (" + s + " y))";
    // τ takes and discards the stored continuation before delivering 0̄.
    const std::string tau = "(\\d.\\f. f " + zero_r + ")";
    const std::string g_prime = "(\\x.\\y. x (\\z. y (\\f.\\x. f z)))";
    const std::string rho = "(\\y.\\z. " + g_prime + " (y z " + tau + " z))";
    std::map<std::string, BuiltinEntry> m;
    auto add = [&](const std::string& name, const std::string& src, Calculus c = Calculus::Lambda) {
      m[name] = BuiltinEntry{c, src};
    };
    add("s_church", s);
    add("s_recursive", s_bar);
    add("delta", delta);
    add("G", g);
    add("F", big_f);
    add("T1", "\\n. n " + delta + " " + g);
    add("T2", "\\n.\\f. n f " + big_f + " " + zero);
    add("tau", tau);
    add("rho", rho);
    add("T'", "\\v. v " + rho + " " + tau + " " + rho);
    add("D_counterexample_t", "\\x. x (\\y. y)");
    add("D_counterexample_T", "\\v. v (\\x.\\f. f (\\y. y x))");
    add("naive", "\\v.\\f. f v");
    add("theta1", "\\x.\\f. C (\\y. y (f (C (\\z. y (f x)))))", Calculus::LambdaC);
    add("theta_mu",
        "\\x.\\f. f (mu a [a] f (mu phi [a] f (mu psi [a] f (mu b [phi] f (mu d [b] f (mu g [a] f "
        "(mu r [b] f x)))))))",
        Calculus::LambdaMu);
    return m;
  }();
  return table;
}

}  // namespace detail

inline std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [name, entry] : detail::builtin_table()) out.push_back(name);
  return out;
}

inline const BuiltinEntry& builtin_entry(const std::string& name) {
  const auto& table = detail::builtin_table();
  std::string key = name == "Tprime" ? "T'" : name;
  auto it = table.find(key);
  if (it == table.end()) throw UnknownBuiltin("unknown builtin term: " + name);
  return it->second;
}

inline Term builtin_term(const std::string& name) {
  const BuiltinEntry& e = builtin_entry(name);
  return parse_term(e.source, e.calculus);
}

inline Term successor(Encoding e) { return builtin_term(e == Encoding::Church ? "s_church" : "s_recursive"); }

// ---------------------------------------------------------------------------
// θ-variants

namespace detail {

inline Term identity(const std::string& v = "z") { return Term::lam(v, Term::var(v)); }

}  // namespace detail

/// Deterministic, pairwise α-distinct terms β-equivalent to encode(n, e).
inline std::vector<Term> theta_variants(std::size_t n, Encoding e, std::size_t count,
                                        std::size_t fuel = default_fuel) {
  const Term target = encode(n, e);
  const Term s = successor(e);
  std::vector<Term> out;
  std::vector<std::string> keys;
  auto offer = [&](const Term& t) {
    if (out.size() >= count) return;
    std::string k = canonical_key(t);
    if (std::find(keys.begin(), keys.end(), k) != keys.end()) return;
    if (beta_equiv(t, target, fuel) != Equivalence::Equal) return;
    keys.push_back(std::move(k));
    out.push_back(t);
  };

  offer(target);
  offer(Term::app(detail::identity(), target));
  for (std::size_t k = n; k >= 1; --k) {
    Term t = encode(n - k, e);
    for (std::size_t i = 0; i < k; ++i) t = Term::app(s, t);
    offer(t);
  }
  // K-junk: (λz.λw.z) n (λy.y)
  offer(apps(Term::lam("z", Term::lam("w", Term::var("z"))), target, detail::identity("y")));
  // η-like expansion of the encoding.
  if (e == Encoding::Church) {
    offer(Term::lam("x", Term::lam("f", apps(target, Term::var("x"), Term::var("f")))));
    // Redex-wrapped body: λx.λf.(λg.(g)^n x) f
    Term body = Term::var("x");
    for (std::size_t i = 0; i < n; ++i) body = Term::app(Term::var("g"), body);
    offer(Term::lam("x", Term::lam("f", Term::app(Term::lam("g", body), Term::var("f")))));
    // Church addition a + (n - a).
    Term plus = parse_term("\\m.\\k.\\x.\\f. m (k x f) f");
    for (std::size_t a = 1; a < n; ++a) offer(apps(plus, encode(a, e), encode(n - a, e)));
  } else {
    offer(Term::lam("f", Term::lam("x", apps(target, Term::var("f"), Term::var("x")))));
    if (n > 0) {
      // λf.λx.(λz.z)((f)(n-1)‾)
      offer(Term::lam("f", Term::lam("x", Term::app(detail::identity(),
                                                     Term::app(Term::var("f"), encode(n - 1, e))))));
      offer(Term::lam("f", Term::lam("x", Term::app(Term::var("f"), Term::app(detail::identity(), encode(n - 1, e))))));
    } else {
      offer(Term::lam("f", Term::lam("x", Term::app(detail::identity(), Term::var("x")))));
    }
  }
  // Unlimited supply: (I)^j n for growing j.
  for (std::size_t j = 2; out.size() < count; ++j) {
    Term t = target;
    for (std::size_t i = 0; i < j; ++i) t = Term::app(detail::identity(), t);
    offer(t);
    if (j > count + 64) break;
  }
  return out;
}

}  // namespace lamlab
