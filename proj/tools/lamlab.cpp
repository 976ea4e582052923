// lamlab: command-line front end for the library.
//
// Exit codes: 0 success/Pass, 1 Fail/Distinct/MalformedBehavior,
// 2 Unknown/FuelExhausted, 3 usage or parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lamlab/derivation_corpus.hpp"
#include "lamlab/directed.hpp"
#include "lamlab/lambda_c.hpp"
#include "lamlab/lambda_mu.hpp"
#include "lamlab/storage.hpp"
#include "lamlab/translate.hpp"

using namespace lamlab;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUnknown = 2, kUsage = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  std::string calculus;
  std::size_t fuel = default_fuel;
  std::string encoding = "church";
  std::size_t variants = default_variant_count;
  bool json = false;
  bool trace = false;
  std::string builtin;
  std::vector<std::string> inputs;
  std::optional<std::size_t> n;
  std::string theta;
  std::string system;
  std::string equations;
  std::string mode = "g";
  std::vector<std::string> r;
  std::size_t default_r = 2;
  std::vector<std::string> templates;
  std::string position;
  std::string rule;
  bool innermost = false;
  bool derivation = false;
  bool list = false;
  std::string x = "x", f = "f";
};

struct Report {
  std::string command;
  json inputs = json::object();
  json result = json::object();
  std::vector<std::string> trace;
  std::vector<std::string> text;  // human lines
  int exit = kOk;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// `@file` reads the file; anything else is taken literally.
std::string text_of(const std::string& arg) { return !arg.empty() && arg[0] == '@' ? slurp(arg.substr(1)) : arg; }

Calculus calculus_of(const std::string& s) {
  if (s == "lambda") return Calculus::Lambda;
  if (s == "lambda-c") return Calculus::LambdaC;
  if (s == "lambda-mu") return Calculus::LambdaMu;
  if (s == "directed") return Calculus::Directed;
  throw UsageError("unknown calculus: " + s);
}

const char* calculus_flag(Calculus c) {
  switch (c) {
    case Calculus::Lambda: return "lambda";
    case Calculus::LambdaC: return "lambda-c";
    case Calculus::LambdaMu: return "lambda-mu";
    case Calculus::Directed: return "directed";
  }
  return "?";
}

Encoding encoding_of(const std::string& s) {
  if (s == "church") return Encoding::Church;
  if (s == "recursive") return Encoding::Recursive;
  throw UsageError("unknown encoding: " + s);
}

Calculus calc(const Opts& o, Calculus fallback) { return o.calculus.empty() ? fallback : calculus_of(o.calculus); }

/// The i-th term argument, or the builtin when i == 0 and --builtin is set.
Term term_arg(const Opts& o, std::size_t i, Calculus c, Report& rep, const char* key) {
  Term t;
  if (i == 0 && !o.builtin.empty()) {
    t = builtin_term(o.builtin);
    rep.inputs["builtin"] = o.builtin;
  } else {
    std::size_t k = o.builtin.empty() ? i : i - 1;
    if (k >= o.inputs.size()) throw UsageError(std::string("missing ") + key);
    t = parse_term(text_of(o.inputs[k]), c);
  }
  rep.inputs[key] = render_term(t);
  return t;
}

std::size_t need_n(const Opts& o) {
  if (!o.n) throw UsageError("--n is required");
  return *o.n;
}

json opt_term(const std::optional<Term>& t) { return t ? json(render_term(*t)) : json(nullptr); }

void add_trace(Report& rep, const ReductionTrace& tr) {
  for (auto& l : trace_lines(tr)) rep.trace.push_back(l);
}

int outcome_exit(Outcome o) { return o == Outcome::FuelExhausted ? kUnknown : kOk; }

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kOk;
    case Verdict::Fail: return kFail;
    case Verdict::Unknown: return kUnknown;
  }
  return kUnknown;
}

int status_exit(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return kOk;
    case RunStatus::MalformedBehavior: return kFail;
    case RunStatus::FuelExhausted: return kUnknown;
  }
  return kUnknown;
}

RuleSet rules_for(Calculus c) {
  if (c == Calculus::LambdaC) return control_rules;
  if (c == Calculus::Directed) return directed_rules;
  return {};
}

// ---------------------------------------------------------------------------
// reduction

void cmd_reduce(const Opts& o, Report& rep) {
  Calculus c = calc(o, Calculus::Lambda);
  rep.inputs["calculus"] = calculus_flag(c);
  Term t = term_arg(o, 0, c, rep, "term");
  Reduction r = c == Calculus::LambdaMu ? head_reduce_mu(t, o.fuel, o.trace)
                                        : head_reduce_with(t, o.fuel, rules_for(c), o.trace);
  rep.result = {{"term", render_term(r.term)}, {"steps", r.trace.count}, {"outcome", outcome_name(r.trace.outcome)}};
  rep.text = {render_term(r.term), std::to_string(r.trace.count) + (r.trace.count == 1 ? " step" : " steps"),
              outcome_name(r.trace.outcome)};
  if (o.trace) add_trace(rep, r.trace);
  rep.exit = outcome_exit(r.trace.outcome);
}

Reduction normal_form(const Term& t, Calculus c, std::size_t fuel, bool record, bool innermost = false) {
  if (c == Calculus::LambdaMu) return normalize_mu(t, fuel, innermost, record);
  return record ? normalize_recorded(t, fuel, rules_for(c)) : normalize_with(t, fuel, rules_for(c));
}

void cmd_normalize(const Opts& o, Report& rep) {
  Calculus c = calc(o, Calculus::Lambda);
  rep.inputs["calculus"] = calculus_flag(c);
  Term t = term_arg(o, 0, c, rep, "term");
  Reduction r = normal_form(t, c, o.fuel, o.trace, o.innermost);
  rep.result = {{"term", render_term(r.term)}, {"steps", r.trace.count}, {"outcome", outcome_name(r.trace.outcome)}};
  rep.text = {render_term(r.term), std::to_string(r.trace.count) + (r.trace.count == 1 ? " step" : " steps"),
              outcome_name(r.trace.outcome)};
  if (o.trace) add_trace(rep, r.trace);
  rep.exit = outcome_exit(r.trace.outcome);
}

void cmd_equiv(const Opts& o, Report& rep) {
  Calculus c = calc(o, Calculus::Lambda);
  rep.inputs["calculus"] = calculus_flag(c);
  Term a = term_arg(o, 0, c, rep, "left");
  Term b = term_arg(o, 1, c, rep, "right");
  std::string answer;
  if (c == Calculus::LambdaMu) {
    Joinable j = mu_joinable(a, b);
    answer = joinable_name(j);
    rep.exit = j == Joinable::Yes ? kOk : kUnknown;
  } else {
    Reduction ra = normal_form(a, c, o.fuel, false), rb = normal_form(b, c, o.fuel, false);
    Equivalence e = ra.exhausted() || rb.exhausted() ? Equivalence::Unknown
                    : alpha_equal(ra.term, rb.term)  ? Equivalence::Equal
                                                     : Equivalence::Distinct;
    answer = equivalence_name(e);
    rep.exit = e == Equivalence::Equal ? kOk : e == Equivalence::Distinct ? kFail : kUnknown;
  }
  rep.result = {{"answer", answer}};
  rep.text = {answer};
}

// ---------------------------------------------------------------------------
// storage

json runs_json(const std::vector<VariantRun>& runs) {
  json out = json::array();
  for (const auto& r : runs)
    out.push_back({{"theta", render_term(r.theta)},
                   {"head_normal_form", render_term(r.head_normal_form)},
                   {"steps", r.steps},
                   {"outcome", outcome_name(r.outcome)},
                   {"result", opt_term(r.result)}});
  return out;
}

void storage_result(const StorageReport& s, Report& rep) {
  rep.result["verdict"] = verdict_name(s.verdict);
  rep.result["tau"] = opt_term(s.tau);
  rep.result["decoded"] = s.decoded ? json(*s.decoded) : json(nullptr);
  rep.result["strong"] = s.strong;
  rep.result["degraded"] = s.degraded;
  rep.result["test_variable"] = s.test_variable;
  rep.result["generalization_vars"] = s.generalization_vars;
  rep.result["runs"] = runs_json(s.runs);
  rep.result["note"] = s.note;
  rep.text.push_back(verdict_name(s.verdict));
  if (s.tau) rep.text.push_back("tau = " + render_term(*s.tau));
  if (s.decoded) rep.text.push_back("decodes to " + std::to_string(*s.decoded));
  rep.text.push_back(std::string("strong: ") + (s.strong ? "yes" : "no"));
  for (const auto& r : s.runs)
    rep.text.push_back("  " + std::to_string(r.steps) + " steps: " + render_term(r.head_normal_form));
  if (!s.note.empty()) rep.text.push_back("note: " + s.note);
  rep.exit = verdict_exit(s.verdict);
}

void cmd_check_storage(const Opts& o, Report& rep) {
  Calculus c = calc(o, Calculus::Lambda);
  rep.inputs["calculus"] = calculus_flag(c);
  Term T = term_arg(o, 0, Calculus::Lambda, rep, "operator");
  std::size_t n = need_n(o);
  rep.inputs["n"] = n;
  if (c == Calculus::LambdaC || c == Calculus::LambdaMu) {
    if (o.theta.empty()) throw UsageError("--theta is required in " + std::string(calculus_flag(c)));
    Term theta = o.theta.rfind("builtin:", 0) == 0 ? builtin_term(o.theta.substr(8)) : parse_term(text_of(o.theta), c);
    rep.inputs["theta"] = render_term(theta);
    if (c == Calculus::LambdaC) {
      ClassicalStorageReport s = check_storage_classical(T, theta, n, o.fuel);
      storage_result(s, rep);
      rep.result["replay"] = opt_term(s.replay);
      if (s.replay) rep.text.push_back("replay: " + render_term(*s.replay));
    } else {
      storage_result(check_storage_mu(T, theta, n, o.fuel), rep);
    }
    return;
  }
  Encoding e = encoding_of(o.encoding);
  rep.inputs["encoding"] = encoding_name(e);
  rep.inputs["variants"] = o.variants;
  if (o.variants == 0) throw UsageError("--variants must be positive");
  storage_result(check_storage(T, n, e, o.variants, o.fuel), rep);
}

void cmd_check_storage_directed(const Opts& o, Report& rep) {
  Term T = term_arg(o, 0, Calculus::Lambda, rep, "operator");
  Term t;
  if (!o.theta.empty()) {
    t = parse_term(text_of(o.theta), Calculus::Lambda);
  } else {
    t = encode(need_n(o), encoding_of(o.encoding));
  }
  rep.inputs["data"] = render_term(t);
  DirectedReport d = check_storage_directed(T, t, o.fuel);
  storage_result(d, rep);
  rep.result["directed_result"] = opt_term(d.directed_result);
  json boxes = json::array();
  for (const auto& [v, b] : d.erased_boxes) boxes.push_back({{"variable", v}, {"box", render_term(b)}});
  rep.result["erased_boxes"] = boxes;
  if (d.directed_result) rep.text.push_back("directed result: " + render_term(*d.directed_result));
}

// ---------------------------------------------------------------------------
// value extraction

void cmd_extract_value(const Opts& o, Report& rep) {
  Calculus c = calc(o, Calculus::LambdaC);
  rep.inputs["calculus"] = calculus_flag(c);
  Term t = term_arg(o, 0, c, rep, "term");
  if (c == Calculus::LambdaMu) {
    MuDecomposition m = extract_value_mu(t);
    rep.result = {{"value", m.value},    {"alphas", m.alphas},           {"counts", m.counts},
                  {"val", m.val_set.text()}, {"rep", m.rep_set.text()}, {"side_subterms_empty", m.side_subterms_empty}};
    rep.text = {"value " + std::to_string(m.value), "val = " + m.val_set.text(), "rep = " + m.rep_set.text()};
    return;
  }
  if (c == Calculus::LambdaC) {
    ClassicalValueTrace v = extract_value_classical(t, o.fuel);
    json segs = json::array();
    for (const auto& s : v.segments)
      segs.push_back({{"input", render_term(s.input)},
                      {"head_normal_form", render_term(s.head_normal_form)},
                      {"tag", s.tag},
                      {"r", s.r},
                      {"steps", s.steps}});
    rep.result = {{"status", run_status_name(v.status)}, {"value", v.value}, {"J", v.J},
                  {"I", v.I},                            {"segments", segs}, {"note", v.note}};
    rep.text.push_back(run_status_name(v.status));
    if (v.status == RunStatus::Ok) rep.text.push_back("value " + std::to_string(v.value));
    for (const auto& s : v.segments)
      rep.text.push_back("  " + s.tag + " r=" + std::to_string(s.r) + ": " + render_term(s.head_normal_form));
    if (!v.note.empty()) rep.text.push_back("note: " + v.note);
    rep.exit = status_exit(v.status);
    return;
  }
  Encoding e = encoding_of(o.encoding);
  rep.inputs["encoding"] = encoding_name(e);
  Decoded d = decode(t, e, o.fuel);
  const char* status = d.status == Decoded::Value ? "Ok" : d.status == Decoded::Unknown ? "FuelExhausted" : "NotAnInteger";
  rep.result = {{"status", status}, {"value", d.status == Decoded::Value ? json(d.value) : json(nullptr)}};
  rep.text = {d.status == Decoded::Value ? "value " + std::to_string(d.value) : std::string(status)};
  rep.exit = d.status == Decoded::Value ? kOk : d.status == Decoded::Unknown ? kUnknown : kFail;
}

void cmd_symbolic_run(const Opts& o, Report& rep) {
  Term T = term_arg(o, 0, Calculus::Lambda, rep, "operator");
  std::size_t n = need_n(o);
  rep.inputs["n"] = n;
  SymbolicRun s = symbolic_run_classical(T, n, o.fuel);
  json dialogue = json::array();
  for (const auto& d : s.dialogue)
    dialogue.push_back({{"term", render_term(d.term)}, {"head", d.head}, {"steps", d.steps}});
  json oracles = json::array();
  for (const auto& v : s.oracles)
    oracles.push_back({{"name", v.name}, {"level", v.level}, {"a", render_term(v.a)}, {"b", render_term(v.b)}});
  rep.result = {{"status", run_status_name(s.status)},
                {"tau", opt_term(s.tau)},
                {"m", s.m ? json(*s.m) : json(nullptr)},
                {"dialogue", dialogue},
                {"oracles", oracles},
                {"total_steps", s.total_steps},
                {"note", s.note}};
  rep.text.push_back(run_status_name(s.status));
  if (s.m) rep.text.push_back("m = " + std::to_string(*s.m));
  if (s.tau) rep.text.push_back("tau = " + render_term(*s.tau));
  for (const auto& d : s.dialogue) rep.text.push_back("  " + d.head + ": " + render_term(d.term));
  if (!s.note.empty()) rep.text.push_back("note: " + s.note);
  rep.exit = status_exit(s.status);
}

// ---------------------------------------------------------------------------
// λμ

void cmd_reduce_mu(const Opts& o, Report& rep) {
  Term t = term_arg(o, 0, Calculus::LambdaMu, rep, "term");
  if (!o.rule.empty()) {
    rep.inputs["rule"] = o.rule;
    rep.inputs["position"] = position_text(o.position);
    std::string pos = o.position == "root" ? "" : o.position;
    Term r = reduce_mu_step(t, pos, parse_mu_rule(o.rule));
    rep.result = {{"term", render_term(r)}};
    rep.text = {render_term(r)};
    return;
  }
  json redexes = json::array();
  for (const auto& s : mu_redexes(t)) {
    redexes.push_back({{"rule", s.rule}, {"position", position_text(s.position)}});
    rep.text.push_back(s.rule + " at " + position_text(s.position));
  }
  rep.result = {{"redexes", redexes}};
  if (rep.text.empty()) rep.text.push_back("no redexes");
}

/// θ = λx.λf.u gives u with its binder names; anything else is taken as u itself.
void rep_val(const Opts& o, Report& rep, bool is_val) {
  Term t = term_arg(o, 0, Calculus::LambdaMu, rep, "term");
  std::string x = o.x, f = o.f;
  Term u = t;
  if (t.is(Kind::Lam) && t.body().is(Kind::Lam) && t.closed()) {
    x = t.name();
    f = t.body().name();
    u = t.body().body();
  }
  IntSet s = is_val ? val(u, x, f) : lamlab::rep(u, x, f);
  rep.result = {{"set", s.text()}};
  rep.text = {s.text()};
}

void cmd_extract_value_mu(const Opts& o, Report& rep) {
  Opts m = o;
  m.calculus = "lambda-mu";
  cmd_extract_value(m, rep);
}

// ---------------------------------------------------------------------------
// formulas

Formula formula_arg(const Opts& o, Report& rep) {
  Formula f;
  if (!o.builtin.empty()) {
    f = builtin_formula(o.builtin);
    rep.inputs["builtin"] = o.builtin;
  } else {
    if (o.inputs.empty()) throw UsageError("missing formula");
    f = parse_formula(text_of(o.inputs[0]));
  }
  rep.inputs["formula"] = render_formula(f);
  return f;
}

std::pair<std::string, std::string> split_eq(const std::string& s, const char* what) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError(std::string("expected NAME=VALUE for ") + what);
  return {s.substr(0, eq), s.substr(eq + 1)};
}

void cmd_translate(const Opts& o, Report& rep) {
  Formula f = formula_arg(o, rep);
  Translation mode = parse_translation(o.mode);
  rep.inputs["mode"] = translation_name(mode);
  TranslateParams p;
  p.default_r = o.default_r;
  for (const auto& s : o.r) {
    auto [X, v] = split_eq(s, "--r");
    p.r[X] = std::stoul(v);
  }
  // X=z1,z2:formula
  for (const auto& s : o.templates) {
    auto [X, rest] = split_eq(s, "--template");
    auto colon = rest.find(':');
    Template t;
    std::string body = rest;
    if (colon != std::string::npos) {
      std::string params = rest.substr(0, colon);
      body = rest.substr(colon + 1);
      std::stringstream ss(params);
      for (std::string q; std::getline(ss, q, ',');)
        if (!q.empty()) t.params.push_back(q);
    }
    t.body = parse_formula(body);
    p.templates[X] = t;
  }
  Formula out = translate(f, mode, p);
  rep.result = {{"formula", render_formula(out)}};
  rep.text = {render_formula(out)};
}

void cmd_classify(const Opts& o, Report& rep) {
  Formula f = formula_arg(o, rep);
  Positivity p = classify_positivity(f);
  ShapeReport s = classify_shape(f);
  rep.result = {{"positivity", positivity_name(p)},
                {"bot_type", s.is_bot_type},
                {"classical_type", s.is_classical_type},
                {"ends_with", s.ends_with}};
  rep.text = {positivity_name(p), std::string("bot-type: ") + (s.is_bot_type ? "yes" : "no"),
              std::string("classical type: ") + (s.is_classical_type ? "yes" : "no"), "ends with " + s.ends_with};
}

// ---------------------------------------------------------------------------
// derivations

const GoldenDerivation& golden(const std::string& name) {
  static const std::vector<GoldenDerivation> all = golden_derivations();
  for (const auto& g : all)
    if (g.name == name) return g;
  throw UsageError("unknown derivation: " + name);
}

void cmd_check_derivation(const Opts& o, Report& rep) {
  Derivation d;
  std::optional<System> sys;
  EquationSet E;
  if (!o.system.empty()) sys = parse_system(o.system);
  if (!o.builtin.empty()) {
    const GoldenDerivation& g = golden(o.builtin);
    rep.inputs["builtin"] = g.name;
    d = g.derivation;
    if (!sys) sys = g.system;
    E = g.equations;
  } else {
    if (o.inputs.empty()) throw UsageError("missing derivation file");
    if (!sys) throw UsageError("--system is required");
    const std::string& a = o.inputs[0];
    std::string text = a.find('(') != std::string::npos ? a : slurp(a[0] == '@' ? a.substr(1) : a);
    d = parse_derivation(text, system_calculus(*sys));
  }
  if (!o.equations.empty()) E = parse_equations(text_of(o.equations));
  rep.inputs["system"] = system_name(*sys);
  rep.inputs["equations"] = E.equations.size();
  CheckResult r = check_derivation(d, *sys, E);
  rep.result = {{"ok", r.ok},
                {"nodes", r.nodes},
                {"conclusion",
                 {{"subject", render_term(d.conclusion.subject)}, {"type", render_formula(d.conclusion.type)}}}};
  if (r.ok) {
    rep.text = {"accepted (" + std::to_string(r.nodes) + " nodes)",
                "|- " + render_term(d.conclusion.subject) + " : " + render_formula(d.conclusion.type)};
  } else {
    rep.result["node"] = r.node;
    rep.result["rule"] = r.rule;
    rep.result["reason"] = r.reason;
    rep.text = {"rejected at " + r.node + " (rule " + r.rule + "): " + r.reason};
    rep.exit = kFail;
  }
}

void cmd_builtin(const Opts& o, Report& rep) {
  if (o.list) {
    json terms = builtin_names(), formulas = builtin_formula_names(), derivs = json::array();
    for (const auto& g : golden_derivations()) derivs.push_back(g.name);
    rep.result = {{"terms", terms}, {"formulas", formulas}, {"derivations", derivs}};
    for (const auto& n : builtin_names()) rep.text.push_back("term " + n);
    for (const auto& n : builtin_formula_names()) rep.text.push_back("formula " + n);
    for (const auto& g : golden_derivations()) rep.text.push_back("derivation " + g.name);
    return;
  }
  if (o.inputs.empty()) throw UsageError("missing builtin name");
  const std::string& name = o.inputs[0];
  rep.inputs["name"] = name;
  if (o.derivation) {
    const GoldenDerivation& g = golden(name);
    std::string text = render_derivation(g.derivation);
    rep.result = {{"kind", "derivation"}, {"system", system_name(g.system)}, {"derivation", text}};
    rep.text = {text};
    return;
  }
  auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) {
    std::string text = render_term(builtin_term(name));
    rep.result = {{"kind", "term"}, {"term", text}};
    rep.text = {text};
    return;
  }
  std::string text = render_formula(builtin_formula(name));
  rep.result = {{"kind", "formula"}, {"formula", text}};
  rep.text = {text};
}

void emit(const Report& rep, bool as_json) {
  if (as_json) {
    json doc = {{"command", rep.command}, {"inputs", rep.inputs}, {"result", rep.result}, {"exit", rep.exit}};
    if (!rep.trace.empty()) doc["trace"] = rep.trace;
    std::cout << doc.dump(2) << "\n";
    return;
  }
  for (const auto& l : rep.trace) std::cout << l << "\n";
  for (const auto& l : rep.text) std::cout << l << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Storage operators, classical integers and second-order type systems"};
  app.require_subcommand(1);
  Opts o;

  auto common = [&](CLI::App* s) {
    s->add_option("--calculus", o.calculus, "lambda, lambda-c, lambda-mu or directed")
        ->check(CLI::IsMember({"lambda", "lambda-c", "lambda-mu", "directed"}));
    s->add_option("--fuel", o.fuel, "step budget")->capture_default_str();
    s->add_flag("--json", o.json, "machine-readable report");
    s->add_option("--builtin", o.builtin, "use a named builtin as the first input");
    s->add_option("inputs", o.inputs, "terms, formulas or files (@path)");
  };
  using Handler = void (*)(const Opts&, Report&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto sub = [&](const char* name, const char* help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    common(s);
    commands.push_back({s, h});
    return s;
  };

  auto reduce = sub("reduce", "head reduction", cmd_reduce);
  reduce->add_flag("--trace", o.trace, "print every step");
  auto norm = sub("normalize", "normal form by leftmost-outermost reduction", cmd_normalize);
  norm->add_flag("--trace", o.trace, "print every step");
  norm->add_flag("--innermost", o.innermost, "lambda-mu: contract the last redex instead of the first");
  sub("equiv", "beta (or lambda-mu) equivalence of two terms", cmd_equiv);

  auto storage = sub("check-storage", "sampling storage-operator check", cmd_check_storage);
  storage->add_option("--n", o.n, "the integer");
  storage->add_option("--encoding", o.encoding)->check(CLI::IsMember({"church", "recursive"}))->capture_default_str();
  storage->add_option("--variants", o.variants, "number of theta variants")->capture_default_str();
  storage->add_option("--theta", o.theta, "classical integer (lambda-c, lambda-mu); builtin:NAME allowed");
  auto directed = sub("check-storage-directed", "storage check through boxes", cmd_check_storage_directed);
  directed->add_option("--n", o.n, "store this integer");
  directed->add_option("--encoding", o.encoding)->check(CLI::IsMember({"church", "recursive"}))->capture_default_str();
  directed->add_option("--theta", o.theta, "closed normal term to store instead of --n");

  auto ev = sub("extract-value", "value of an integer term", cmd_extract_value);
  ev->add_option("--encoding", o.encoding)->check(CLI::IsMember({"church", "recursive"}))->capture_default_str();
  auto sym = sub("symbolic-run", "oracle dialogue of a storage operator", cmd_symbolic_run);
  sym->add_option("--n", o.n, "the integer the oracles answer for");

  auto rmu = sub("reduce-mu", "contract one lambda-mu redex, or list them", cmd_reduce_mu);
  rmu->add_option("--rule", o.rule, "C1, C2, S1, S2 or S3");
  rmu->add_option("--position", o.position, "path of l/f/a/m letters, or root");
  for (auto [name, h] : {std::pair<const char*, Handler>{"rep", [](const Opts& o, Report& r) { rep_val(o, r, false); }},
                         std::pair<const char*, Handler>{"val", [](const Opts& o, Report& r) { rep_val(o, r, true); }}}) {
    auto s = sub(name, name == std::string("rep") ? "represented integers" : "possible values", h);
    s->add_option("--x", o.x)->capture_default_str();
    s->add_option("--f", o.f)->capture_default_str();
  }
  sub("extract-value-mu", "value of a lambda-mu integer", cmd_extract_value_mu);

  auto tr = sub("translate", "formula translations", cmd_translate);
  tr->add_option("--mode", o.mode, "g, e, bot, star, c or G")->capture_default_str();
  tr->add_option("--r", o.r, "e: arity per variable, X=N")->allow_extra_args(false);
  tr->add_option("--default-r", o.default_r, "e: arity for the other variables")->capture_default_str();
  tr->add_option("--template", o.templates, "G: X=params:formula")->allow_extra_args(false);
  sub("classify", "positivity and shape of a formula", cmd_classify);

  auto cd = sub("check-derivation", "check a derivation file", cmd_check_derivation);
  cd->add_option("--system", o.system, "AF2, AF2bot, C2, M2, FD2 or M2mu");
  cd->add_option("--equations", o.equations, "equations (@file or inline)");
  auto bi = sub("builtin", "print a builtin term, formula or derivation", cmd_builtin);
  bi->add_flag("--derivation", o.derivation, "look the name up among derivations");
  bi->add_flag("--list", o.list, "list every builtin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Report rep;
  for (auto& [s, h] : commands) {
    if (!s->parsed()) continue;
    rep.command = s->get_name();
    try {
      h(o, rep);
    } catch (const NotInGrammar& e) {
      std::cerr << "lamlab: " << e.what() << "\n";
      return kFail;
    } catch (const PatternMismatch& e) {
      std::cerr << "lamlab: " << e.what() << "\n";
      return kFail;
    } catch (const ShapeMismatch& e) {
      std::cerr << "lamlab: " << e.what() << "\n";
      return kFail;
    } catch (const std::exception& e) {
      std::cerr << "lamlab: " << e.what() << "\n";
      return kUsage;
    }
  }
  emit(rep, o.json);
  return rep.exit;
}
