#pragma once

// Immutable binding trees shared by every calculus in the library.
//
// One node type covers pure λ-terms, λC-terms (the constant C and stack
// constants), λμ-terms (μα[β]t) and directed terms (boxes carrying an explicit
// substitution).  Each calculus restricts which node kinds it accepts; the
// representation itself is calculus-agnostic so that substitution, α-equivalence
// and rendering are written once.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lamlab {

enum class Kind : std::uint8_t { Var, Lam, App, ConstC, Stack, Box, Mu };

class Term;
struct Node;

/// Entry x ↦ a of a box substitution ⟨a/x⟩.
using BoxBinding = std::pair<std::string, Term>;

class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term lam(std::string binder, Term body);
  static Term app(Term fun, Term arg);
  static Term constant_c();
  static Term stack(std::string name);
  static Term box(Term director, std::vector<BoxBinding> substitution);
  /// μα[β]t: `bound` is α, `named` is β.
  static Term mu(std::string bound, std::string named, Term body);

  Kind kind() const;
  bool is(Kind k) const { return node_ && kind() == k; }
  explicit operator bool() const { return static_cast<bool>(node_); }

  /// Variable name, λ binder, stack-constant name, or μ binder α.
  const std::string& name() const;
  /// The β of μα[β]t.
  const std::string& named() const;
  const Term& body() const;
  const Term& fun() const;
  const Term& arg() const;
  const Term& director() const;
  const std::vector<BoxBinding>& substitution() const;

  /// Sorted, duplicate-free.
  const std::vector<std::string>& free_vars() const;
  const std::vector<std::string>& free_mu_vars() const;
  bool has_free(std::string_view x) const;
  bool has_free_mu(std::string_view a) const;
  bool closed() const { return free_vars().empty() && free_mu_vars().empty(); }

  std::size_t size() const;
  bool contains_mu() const;
  bool contains_c() const;
  bool contains_box() const;
  bool contains_stack() const;
  bool pure() const {
    return !contains_mu() && !contains_c() && !contains_box() && !contains_stack();
  }

  /// Pointer identity; cheap "unchanged" test during rewriting.
  bool same(const Term& other) const { return node_ == other.node_; }

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

namespace detail {
enum Flags : std::uint8_t { kHasMu = 1, kHasC = 2, kHasBox = 4, kHasStack = 8 };
}

struct Node {
  Kind kind;
  std::string name;
  std::string named;
  Term left;   // body (Lam, Mu), function (App), director (Box)
  Term right;  // argument (App)
  std::vector<BoxBinding> subst;
  std::vector<std::string> fv;
  std::vector<std::string> fmv;
  std::size_t size = 1;
  std::uint8_t flags = 0;
};

namespace detail {

inline std::vector<std::string> merge_sorted(const std::vector<std::string>& a,
                                             const std::vector<std::string>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<std::string> without(const std::vector<std::string>& a, std::string_view x) {
  auto it = std::lower_bound(a.begin(), a.end(), x);
  if (it == a.end() || *it != x) return a;
  std::vector<std::string> out;
  out.reserve(a.size() - 1);
  out.insert(out.end(), a.begin(), it);
  out.insert(out.end(), it + 1, a.end());
  return out;
}

inline std::vector<std::string> with(const std::vector<std::string>& a, const std::string& x) {
  return merge_sorted(a, std::vector<std::string>{x});
}

inline bool sorted_contains(const std::vector<std::string>& a, std::string_view x) {
  return std::binary_search(a.begin(), a.end(), x);
}

}  // namespace detail

inline Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->fv = {name};
  n->name = std::move(name);
  return Term(std::move(n));
}

inline Term Term::lam(std::string binder, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lam;
  n->fv = detail::without(body.free_vars(), binder);
  n->fmv = body.free_mu_vars();
  n->size = body.size() + 1;
  n->flags = body.node_->flags;
  n->name = std::move(binder);
  n->left = std::move(body);
  return Term(std::move(n));
}

inline Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->fv = detail::merge_sorted(fun.free_vars(), arg.free_vars());
  n->fmv = detail::merge_sorted(fun.free_mu_vars(), arg.free_mu_vars());
  n->size = fun.size() + arg.size() + 1;
  n->flags = fun.node_->flags | arg.node_->flags;
  n->left = std::move(fun);
  n->right = std::move(arg);
  return Term(std::move(n));
}

inline Term Term::constant_c() {
  static const Term c = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::ConstC;
    n->name = "C";
    n->flags = detail::kHasC;
    return Term(std::move(n));
  }();
  return c;
}

inline Term Term::stack(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Stack;
  n->name = std::move(name);
  n->flags = detail::kHasStack;
  return Term(std::move(n));
}

inline Term Term::box(Term director, std::vector<BoxBinding> substitution) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Box;
  n->size = director.size() + 1;
  n->flags = detail::kHasBox | director.node_->flags;
  // Director variables outside the domain stay free (the box leaves them alone).
  for (const auto& z : director.free_vars()) {
    bool bound = std::any_of(substitution.begin(), substitution.end(),
                             [&](const BoxBinding& e) { return e.first == z; });
    if (!bound) n->fv.push_back(z);
  }
  for (const auto& [x, a] : substitution) {
    n->fv = detail::merge_sorted(n->fv, a.free_vars());
    n->fmv = detail::merge_sorted(n->fmv, a.free_mu_vars());
    n->size += a.size();
    n->flags |= a.node_->flags;
  }
  n->left = std::move(director);
  n->subst = std::move(substitution);
  return Term(std::move(n));
}

inline Term Term::mu(std::string bound, std::string named, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mu;
  n->fv = body.free_vars();
  n->fmv = detail::without(detail::with(body.free_mu_vars(), named), bound);
  n->size = body.size() + 1;
  n->flags = body.node_->flags | detail::kHasMu;
  n->name = std::move(bound);
  n->named = std::move(named);
  n->left = std::move(body);
  return Term(std::move(n));
}

inline Kind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const std::string& Term::named() const { return node_->named; }
inline const Term& Term::body() const { return node_->left; }
inline const Term& Term::fun() const { return node_->left; }
inline const Term& Term::arg() const { return node_->right; }
inline const Term& Term::director() const { return node_->left; }
inline const std::vector<BoxBinding>& Term::substitution() const { return node_->subst; }
inline const std::vector<std::string>& Term::free_vars() const { return node_->fv; }
inline const std::vector<std::string>& Term::free_mu_vars() const { return node_->fmv; }
inline bool Term::has_free(std::string_view x) const { return detail::sorted_contains(node_->fv, x); }
inline bool Term::has_free_mu(std::string_view a) const {
  return detail::sorted_contains(node_->fmv, a);
}
inline std::size_t Term::size() const { return node_->size; }
inline bool Term::contains_mu() const { return node_->flags & detail::kHasMu; }
inline bool Term::contains_c() const { return node_->flags & detail::kHasC; }
inline bool Term::contains_box() const { return node_->flags & detail::kHasBox; }
inline bool Term::contains_stack() const { return node_->flags & detail::kHasStack; }

// ---------------------------------------------------------------------------
// Small builders

inline Term apply_args(Term head, const std::vector<Term>& args) {
  for (const auto& a : args) head = Term::app(std::move(head), a);
  return head;
}

template <class... Rest>
Term apps(Term head, Rest... rest) {
  return apply_args(std::move(head), std::vector<Term>{std::move(rest)...});
}

inline Term lams(const std::vector<std::string>& binders, Term body) {
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::lam(*it, std::move(body));
  return body;
}

/// (head, [a1..an]) for t = (head)a1...an.
inline std::pair<Term, std::vector<Term>> spine(const Term& t) {
  std::vector<Term> args;
  Term h = t;
  while (h.is(Kind::App)) {
    args.push_back(h.arg());
    h = h.fun();
  }
  std::reverse(args.begin(), args.end());
  return {h, args};
}

// ---------------------------------------------------------------------------
// Fresh names: deterministic suffix counter on the name's stem.

inline std::string name_stem(const std::string& n) {
  auto end = n.size();
  while (end > 1 && n[end - 1] >= '0' && n[end - 1] <= '9') --end;
  return n.substr(0, end);
}

template <class Taken>
std::string fresh_name(const std::string& base, Taken&& taken) {
  const std::string stem = name_stem(base);
  for (std::size_t k = 1;; ++k) {
    std::string candidate = stem + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

/// Every variable, binder and μ-name that occurs anywhere in t.
inline void collect_names(const Term& t, std::vector<std::string>& out) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Stack:
      out.push_back(t.name());
      break;
    case Kind::Lam:
      out.push_back(t.name());
      collect_names(t.body(), out);
      break;
    case Kind::App:
      collect_names(t.fun(), out);
      collect_names(t.arg(), out);
      break;
    case Kind::ConstC:
      break;
    case Kind::Box:
      collect_names(t.director(), out);
      for (const auto& [x, a] : t.substitution()) {
        out.push_back(x);
        collect_names(a, out);
      }
      break;
    case Kind::Mu:
      out.push_back(t.name());
      out.push_back(t.named());
      collect_names(t.body(), out);
      break;
  }
}

inline std::vector<std::string> all_names(const Term& t) {
  std::vector<std::string> out;
  collect_names(t, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Renaming of free μ-variables, capture-avoiding on the μ-alphabet.

inline Term rename_free_mu(const Term& t, const std::string& from, const std::string& to) {
  if (from == to || !t.has_free_mu(from)) return t;
  switch (t.kind()) {
    case Kind::Lam:
      return Term::lam(t.name(), rename_free_mu(t.body(), from, to));
    case Kind::App:
      return Term::app(rename_free_mu(t.fun(), from, to), rename_free_mu(t.arg(), from, to));
    case Kind::Box: {
      std::vector<BoxBinding> s;
      for (const auto& [x, a] : t.substitution()) s.emplace_back(x, rename_free_mu(a, from, to));
      return Term::box(t.director(), std::move(s));
    }
    case Kind::Mu: {
      // t.name() != from here, otherwise `from` would not be free.
      std::string bound = t.name();
      Term body = t.body();
      std::string named = t.named();
      if (bound == to) {
        std::string fresh = fresh_name(bound, [&](const std::string& c) {
          return c == to || c == from || body.has_free_mu(c);
        });
        body = rename_free_mu(body, bound, fresh);
        if (named == bound) named = fresh;
        bound = fresh;
      }
      if (named == from) named = to;
      return Term::mu(bound, named, rename_free_mu(body, from, to));
    }
    default:
      return t;
  }
}

// ---------------------------------------------------------------------------
// Simultaneous capture-avoiding substitution of λ-variables.

using Substitution = std::vector<std::pair<std::string, Term>>;

namespace detail {

inline Term substitute_rec(const Term& t, const Substitution& sigma) {
  Substitution active;
  for (const auto& entry : sigma)
    if (t.has_free(entry.first)) active.push_back(entry);
  if (active.empty()) return t;

  switch (t.kind()) {
    case Kind::Var:
      return active.front().second;
    case Kind::App:
      return Term::app(substitute_rec(t.fun(), active), substitute_rec(t.arg(), active));
    case Kind::Lam: {
      const std::string& x = t.name();
      bool capture = std::any_of(active.begin(), active.end(),
                                 [&](const auto& e) { return e.second.has_free(x); });
      if (!capture) return Term::lam(x, substitute_rec(t.body(), active));
      std::string fresh = fresh_name(x, [&](const std::string& c) {
        if (t.body().has_free(c)) return true;
        for (const auto& e : active)
          if (e.first == c || e.second.has_free(c)) return true;
        return false;
      });
      active.emplace_back(x, Term::var(fresh));
      return Term::lam(fresh, substitute_rec(t.body(), active));
    }
    case Kind::Mu: {
      std::string bound = t.name();
      std::string named = t.named();
      Term body = t.body();
      bool capture = std::any_of(active.begin(), active.end(),
                                 [&](const auto& e) { return e.second.has_free_mu(bound); });
      if (capture) {
        std::string fresh = fresh_name(bound, [&](const std::string& c) {
          if (body.has_free_mu(c) || c == named) return true;
          for (const auto& e : active)
            if (e.second.has_free_mu(c)) return true;
          return false;
        });
        body = rename_free_mu(body, bound, fresh);
        if (named == bound) named = fresh;
        bound = fresh;
      }
      return Term::mu(bound, named, substitute_rec(body, active));
    }
    case Kind::Box: {
      std::vector<BoxBinding> s;
      for (const auto& [x, a] : t.substitution()) s.emplace_back(x, substitute_rec(a, active));
      for (const auto& [z, value] : active) {
        bool bound = std::any_of(s.begin(), s.end(), [&](const BoxBinding& e) { return e.first == z; });
        if (!bound && t.director().has_free(z)) s.emplace_back(z, value);
      }
      return Term::box(t.director(), std::move(s));
    }
    default:
      return t;
  }
}

}  // namespace detail

/// σ(t): bound variables of t are renamed where a substituted term would be captured.
inline Term substitute(const Term& t, const Substitution& sigma) {
  return detail::substitute_rec(t, sigma);
}

inline Term substitute(const Term& t, const std::string& x, const Term& value) {
  return detail::substitute_rec(t, Substitution{{x, value}});
}

// ---------------------------------------------------------------------------
// α-equivalence and canonical keys

namespace detail {

struct Scope {
  std::vector<std::string> lambda;
  std::vector<std::string> mu;
};

inline std::ptrdiff_t depth_of(const std::vector<std::string>& env, const std::string& x) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == x) return static_cast<std::ptrdiff_t>(env.size() - 1 - i);
  return -1;
}

inline bool same_ref(const std::vector<std::string>& ea, const std::string& a,
                     const std::vector<std::string>& eb, const std::string& b) {
  auto da = depth_of(ea, a);
  auto db = depth_of(eb, b);
  if (da < 0 && db < 0) return a == b;
  return da == db;
}

inline bool alpha_rec(const Term& a, const Term& b, Scope& sa, Scope& sb) {
  if (a.same(b) && sa.lambda == sb.lambda && sa.mu == sb.mu) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Var:
      return same_ref(sa.lambda, a.name(), sb.lambda, b.name());
    case Kind::ConstC:
      return true;
    case Kind::Stack:
      return a.name() == b.name();
    case Kind::App:
      return alpha_rec(a.fun(), b.fun(), sa, sb) && alpha_rec(a.arg(), b.arg(), sa, sb);
    case Kind::Lam: {
      sa.lambda.push_back(a.name());
      sb.lambda.push_back(b.name());
      bool r = alpha_rec(a.body(), b.body(), sa, sb);
      sa.lambda.pop_back();
      sb.lambda.pop_back();
      return r;
    }
    case Kind::Mu: {
      sa.mu.push_back(a.name());
      sb.mu.push_back(b.name());
      bool r = same_ref(sa.mu, a.named(), sb.mu, b.named()) && alpha_rec(a.body(), b.body(), sa, sb);
      sa.mu.pop_back();
      sb.mu.pop_back();
      return r;
    }
    case Kind::Box: {
      const auto& xa = a.substitution();
      const auto& xb = b.substitution();
      if (xa.size() != xb.size()) return false;
      for (std::size_t i = 0; i < xa.size(); ++i)
        if (!alpha_rec(xa[i].second, xb[i].second, sa, sb)) return false;
      Scope da = sa, db = sb;
      for (const auto& e : xa) da.lambda.push_back(e.first);
      for (const auto& e : xb) db.lambda.push_back(e.first);
      return alpha_rec(a.director(), b.director(), da, db);
    }
  }
  return false;
}

inline void key_rec(const Term& t, Scope& s, std::string& out) {
  switch (t.kind()) {
    case Kind::Var: {
      auto d = depth_of(s.lambda, t.name());
      if (d >= 0) {
        out += '#';
        out += std::to_string(d);
      } else {
        out += '\'';
        out += t.name();
      }
      out += ' ';
      break;
    }
    case Kind::ConstC:
      out += "C ";
      break;
    case Kind::Stack:
      out += '%';
      out += t.name();
      out += ' ';
      break;
    case Kind::App:
      out += "@(";
      key_rec(t.fun(), s, out);
      key_rec(t.arg(), s, out);
      out += ')';
      break;
    case Kind::Lam:
      out += "\\(";
      s.lambda.push_back(t.name());
      key_rec(t.body(), s, out);
      s.lambda.pop_back();
      out += ')';
      break;
    case Kind::Mu: {
      s.mu.push_back(t.name());
      auto d = depth_of(s.mu, t.named());
      out += "M[";
      out += d >= 0 ? "#" + std::to_string(d) : "'" + t.named();
      out += "](";
      key_rec(t.body(), s, out);
      out += ')';
      s.mu.pop_back();
      break;
    }
    case Kind::Box: {
      out += "B{";
      for (const auto& e : t.substitution()) {
        key_rec(e.second, s, out);
        out += ';';
      }
      out += '|';
      Scope inner = s;
      for (const auto& e : t.substitution()) inner.lambda.push_back(e.first);
      key_rec(t.director(), inner, out);
      out += '}';
      break;
    }
  }
}

}  // namespace detail

inline bool alpha_equal(const Term& a, const Term& b) {
  detail::Scope sa, sb;
  return detail::alpha_rec(a, b, sa, sb);
}

/// A string equal for two terms iff they are α-equivalent (de Bruijn form).
inline std::string canonical_key(const Term& t) {
  std::string out;
  detail::Scope s;
  detail::key_rec(t, s, out);
  return out;
}

}  // namespace lamlab
