// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include "gen_formula.hpp"
#include "nabla/elaborate.hpp"
#include "nabla/parser.hpp"
#include "nabla/session.hpp"
#include "oracle.hpp"

using namespace nabla;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::string corpus(const std::string& f) { return std::string(NABLA_CORPUS) + "/" + f; }

Session stlc() {
  Session s;
  s.exec("Specification \"stlc.spec\".", "<acceptance>", NABLA_CORPUS);
  s.exec("Query type i.");
  return s;
}

Formula formula(const Session& s, const std::string& text) {
  Parser p = Parser::of(text);
  return Elaborator::formula_in(s.signature(), p.formula(), {});
}

Term goal(const Session& s, const std::string& text) {
  Parser p = Parser::of(text);
  PExpr e = p.goal();
  Elaborator el(s.signature());
  el.add_goal(e);
  el.solve();
  return el.goal(e);
}

KernelEnv env_of(const Session& s) {
  KernelEnv e;
  e.sig = &s.signature();
  e.defs = &s.definitions();
  return e;
}

void corpus_replay(const std::string& cli) {
  auto t0 = std::chrono::steady_clock::now();
  std::string cmd = "\"" + cli + "\" --batch \"" + corpus("wn.thm") + "\" > /dev/null";
  int rc = std::system(cmd.c_str());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Session s;
  ExecResult r = s.load(corpus("wn.thm"));
  const char* names[] = {"step_det",        "of_step",        "halts_step",     "reduce_step_forward",
                         "reduce_step_backward", "reduce_step", "type_nominal",  "type_ctx",
                         "of_nominal",      "member_nominal", "of_type",        "closed_unaffected",
                         "subst_app",       "subst_abs",      "subst_of",       "wn_general",
                         "wn"};
  std::string missing;
  for (const char* n : names)
    if (!s.lemmas().find(n)) missing += std::string(" ") + n;
  bool wn_ok = false;
  if (const Formula* f = s.lemmas().find("wn"))
    wn_ok = alpha_equal(*f, formula(s, "forall M A, {of M A} -> halts M"));
  std::ostringstream d;
  d << "--batch exit " << rc << ", " << secs << "s, " << s.lemmas().all().size() << " theorems";
  if (!missing.empty()) d << ", missing" << missing;
  if (!wn_ok) d << ", final statement differs";
  report(rc == 0 && r.ok() && secs < 60 && missing.empty() && wn_ok, "corpus replay", d.str());
}

void regression() {
  Session s;
  ExecResult r = s.load(corpus("regress.thm"));
  int inst = 0, cut = 0, mono = 0;
  for (const TrustEntry& t : s.trust_report()) {
    inst += t.kind == TrustEntry::Kind::Inst && t.subject == "of_subst";
    cut += t.kind == TrustEntry::Kind::Cut && t.subject == "of_subst";
    mono += t.kind == TrustEntry::Kind::Monotone;
  }
  bool have = s.lemmas().find("type_uniq") && s.lemmas().find("of_subst") && s.lemmas().find("of_weaken") &&
              s.lemmas().find("of_permute") && s.lemmas().find("of_contract");
  std::ostringstream d;
  d << (r.ok() ? "loaded" : "error: " + r.error) << ", of_subst inst/cut " << inst << "/" << cut
    << ", monotone uses " << mono;
  report(r.ok() && have && inst == 1 && cut == 1 && mono >= 3, "regression scripts", d.str());
}

void animation() {
  Session s = stlc();
  KernelEnv env = env_of(s);
  struct Case {
    const char* g;
    bool expect;
  } cases[] = {{"of (abs i x\\x) (arr i i)", true},
               {"steps (app (abs i x\\x) (abs i x\\x)) (abs i x\\x)", true},
               {"of (abs i x\\x) i", false}};
  bool ok = true;
  std::ostringstream d;
  for (const Case& c : cases) {
    Term t = goal(s, c.g);
    bool direct = spec_search(env, builtin::nil(), t, 10).has_value();
    bool via_seq = seq_derivable(env, builtin::nil(), t, 10);
    ok = ok && direct == c.expect && via_seq == c.expect;
    d << "[" << (direct ? "yes" : "no") << "/" << (via_seq ? "yes" : "no") << "] ";
  }
  d << "(spec_search / seq unfolding, depth 10)";
  report(ok, "spec animation", d.str());
}

void unifier_oracle() {
  oracle::Universe u;
  std::mt19937 rng(1000003);
  int n = 0, ok = 0, none = 0, bad = 0;
  long unifiers = 0;
  for (; n < 1000; ++n) {
    oracle::Problem p = oracle::random_problem(u, rng);
    UnifResult r = unify_pattern(p.as_unif());
    std::vector<Subst> all = oracle::brute_force(u, p, 3);
    unifiers += static_cast<long>(all.size());
    if (r.outcome == UnifyOutcome::Ok) {
      ++ok;
      if (!oracle::solves(p, r.mgu)) ++bad;
      for (const Subst& th : all)
        if (!oracle::factors_through(p, r.mgu, th)) ++bad;
    } else if (r.outcome == UnifyOutcome::NoSolution) {
      ++none;
      if (!all.empty()) ++bad;
    } else {
      ++bad;
    }
  }
  std::ostringstream d;
  d << n << " problems (" << ok << " solvable, " << none << " without solution), " << unifiers
    << " enumerated unifiers, " << bad << " violations";
  report(bad == 0 && n >= 1000, "unifier oracle", d.str());
}

void equivariance() {
  unsigned seed = std::random_device{}();
  bool ok = true;
  std::ostringstream d;
  d << "seed " << seed << ":";
  for (const char* f : {"wn.thm", "regress.thm"}) {
    SessionOptions o;
    o.perm_seed = seed;
    Session s(o);
    ExecResult r = s.load(corpus(f));
    ok = ok && r.ok();
    d << " " << f << (r.ok() ? " qed" : " failed (" + r.error + ")");
  }
  report(ok, "equivariance", d.str());
}

void nabla_checks() {
  Session s = stlc();
  s.exec("Define name : tm -> prop by nabla x, name x.");
  KernelEnv env = env_of(s);
  genf::FormulaGen g{std::mt19937(20)};
  int vac = 0, exch = 0;
  for (int k = 0; k < 20; ++k) {
    std::string f = g.formula({}, 3);
    vac += genf::derive_imp(env, formula(s, "(nabla (x : tm), " + f + ") -> " + f)) &&
           genf::derive_imp(env, formula(s, f + " -> nabla (x : tm), " + f));
    std::string h = g.formula({"x", "y"}, 3);
    const std::string xy = "nabla (x : tm), nabla (y : tm), " + h, yx = "nabla (y : tm), nabla (x : tm), " + h;
    exch += genf::derive_imp(env, formula(s, "(" + xy + ") -> " + yx)) &&
            genf::derive_imp(env, formula(s, "(" + yx + ") -> " + xy));
  }
  std::ostringstream d;
  d << "strengthening " << vac << "/20, exchange " << exch << "/20";
  report(vac == 20 && exch == 20, "nabla structural checks", d.str());
}

void stratification() {
  Session s = stlc();
  s.exec("Define halts : tm -> prop by halts M := exists V, {steps M V} /\\ {value V}.");
  const std::string clauses =
      "reduce : tm -> ty -> prop by\n"
      "  reduce M i := {of M i} /\\ halts M ;\n"
      "  reduce M (arr A B) := {of M (arr A B)} /\\ halts M /\\ (forall N, reduce N A -> reduce (app M N) B).";
  bool rejected = !s.exec("Define " + clauses).ok();
  bool accepted = s.exec("Define override " + clauses).ok();
  Session full;
  full.load(corpus("wn.thm"));
  int overrides = 0;
  for (const TrustEntry& t : full.trust_report()) overrides += t.kind == TrustEntry::Kind::Override;
  std::ostringstream d;
  d << "plain " << (rejected ? "rejected" : "accepted") << ", override " << (accepted ? "accepted" : "rejected")
    << ", corpus trust report overrides: " << overrides;
  report(rejected && accepted && overrides == 1, "stratification", d.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance PATH-TO-NABLA\n";
    return 2;
  }
  corpus_replay(argv[1]);
  regression();
  animation();
  unifier_oracle();
  equivariance();
  nabla_checks();
  stratification();
  return failures ? 1 : 0;
}
