#include "doctest.h"
#include "gen_formula.hpp"
#include "support.hpp"

using namespace nabla;
using support::formula;
using support::run;

namespace {

Session with_names() {
  Session s = support::stlc();
  run(s, "Define name : tm -> prop by nabla x, name x.");
  run(s, "Define fresh : tm -> tm -> prop by nabla x, fresh x E.");
  return s;
}

Sequent with_hyp(const Session& s, const std::string& hyp, const std::string& goal = "true") {
  Sequent q;
  q.add_hyp(formula(s, hyp));
  q.goal = formula(s, goal);
  q.refresh_vars();
  return q;
}

Ty tm_ty() { return Ty::base("tm"); }

}  // namespace

TEST_CASE("case on name and fresh matches direct clause matching on ground arguments") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  Term app_c = constant("app", Ty::arrows({tm_ty(), tm_ty()}, tm_ty()));
  Term abs_c = constant("abs", Ty::arrows({Ty::base("ty"), Ty::arrow(tm_ty(), tm_ty())}, tm_ty()));
  Term idf = app(abs_c, {constant("i", Ty::base("ty")), lam(tm_ty(), bvar(0))});
  Nom n1{1, tm_ty()}, n2{2, tm_ty()};
  std::vector<Term> args{nominal(n1), nominal(n2), idf, app(app_c, {nominal(n1), nominal(n2)}),
                         app(app_c, {idf, nominal(n1)})};
  for (const Term& t : args) {
    Sequent q;
    q.add_hyp(f_atom(app(constant("name", Ty::arrow(tm_ty(), Ty::prop())), t)));
    q.goal = f_true();
    // A nabla clause matches exactly when the argument is a nominal constant.
    std::size_t expect = t.is_nom() ? 1 : 0;
    CHECK(def_left(q, env, "H1").size() == expect);
    for (const Term& u : args) {
      Sequent p;
      p.add_hyp(f_atom(app(constant("fresh", Ty::arrows({tm_ty(), tm_ty()}, Ty::prop())), {t, u})));
      p.goal = f_true();
      std::size_t want = t.is_nom() && !nabla::support(u).count(t.nom()) ? 1 : 0;
      CHECK(def_left(p, env, "H1").size() == want);
    }
  }
}

TEST_CASE("case on name with an eigenvariable argument makes it a nominal") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  Sequent q = intros(Sequent{.vars = {}, .hyps = {}, .goal = formula(s, "forall X, name X -> name X")}, env);
  std::vector<Sequent> r = def_left(q, env, "H1");
  REQUIRE(r.size() == 1);
  CHECK(r[0].hyps.empty());
  REQUIRE(r[0].goal.is(Formula::Kind::Atom));
  CHECK(r[0].goal.atom().args()[0].is_nom());
}

TEST_CASE("left rules: false closes, or splits, hypotheses get fresh names") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  CHECK(rule_left(with_hyp(s, "false"), env, "H1").empty());
  CHECK(rule_left(with_hyp(s, "{value (abs i x\\x)} \\/ {type i}"), env, "H1").size() == 2);
  Sequent q = with_hyp(s, "{type i} /\\ {value (abs i x\\x)}");
  Sequent r = rule_left(q, env, "H1")[0];
  CHECK(r.hyp("H1") == nullptr);
  CHECK(r.hyp("H2") != nullptr);
  CHECK(r.hyp("H3") != nullptr);
  CHECK(r.add_hyp(r.hyp("H2")->f) == "H2");  // duplicates are merged
}

TEST_CASE("equations: case unifies, constructor clash closes the goal") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  CHECK(eq_left(with_hyp(s, "abs i x\\x = app (abs i x\\x) (abs i x\\x)"), "H1").empty());
  Sequent q = intros(Sequent{.vars = {}, .hyps = {}, .goal = formula(s, "forall M N, app M N = app N M -> M = N")}, env);
  std::vector<Sequent> r = eq_left(q, "H1");
  REQUIRE(r.size() == 1);
  CHECK(eq_right(r[0]));
}

TEST_CASE("spec judgments: case on a typing judgment") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  // {of (abs i x\x) A}: one clause, binds A to arr i B and opens the pi.
  Sequent q = intros(Sequent{.vars = {}, .hyps = {}, .goal = formula(s, "forall A, {of (abs i x\\x) A} -> true")}, env);
  std::vector<Sequent> r = obj_left(q, env, "H1");
  REQUIRE(r.size() == 1);
  CHECK(r[0].hyps.size() == 2);  // {type i} and {of n1 i :: nil |- of n1 B}
  CHECK(obj_left(with_hyp(s, "{of (abs i x\\x) i}"), env, "H1").empty());
}

TEST_CASE("id closes up to a permutation of nominals") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  Sequent q;
  Nom n1{1, tm_ty()}, n2{2, tm_ty()};
  Term nm = constant("name", Ty::arrow(tm_ty(), Ty::prop()));
  q.add_hyp(f_atom(app(nm, nominal(n1))));
  q.goal = f_atom(app(nm, nominal(n2)));
  CHECK(rule_id(q, "H1"));
}

TEST_CASE("nabla: vacuous quantification and exchange on generated formulas") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  genf::FormulaGen g{std::mt19937(5)};
  for (int k = 0; k < 20; ++k) {
    std::string f = g.formula({}, 3);
    INFO(f);
    CHECK(genf::derive_imp(env, formula(s, "(nabla (x : tm), " + f + ") -> " + f)));
    CHECK(genf::derive_imp(env, formula(s, f + " -> nabla (x : tm), " + f)));
    std::string h = g.formula({"x", "y"}, 3);
    INFO(h);
    CHECK(genf::derive_imp(env, formula(s, "(nabla (x : tm), nabla (y : tm), " + h + ") -> nabla (y : tm), nabla (x : tm), " + h)));
    CHECK(genf::derive_imp(env, formula(s, "(nabla (y : tm), nabla (x : tm), " + h + ") -> nabla (x : tm), nabla (y : tm), " + h)));
  }
}

TEST_CASE("nabla does not collapse distinct names") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  // nabla x y, x = y is not derivable, while nabla x, x = x is.
  CHECK_FALSE(genf::derive_imp(env, formula(s, "true -> nabla (x : tm) (y : tm), x = y")));
  CHECK(genf::derive_imp(env, formula(s, "true -> nabla (x : tm), x = x")));
}

TEST_CASE("induction marks the premise and adds the hypothesis") {
  Session s = with_names();
  Sequent q;
  q.goal = formula(s, "forall M N, {step M N} -> {value M} -> false");
  Sequent r = nat_induct(q, 1);
  REQUIRE(r.hyp("IH") != nullptr);
  CHECK(r.ind_level == 1);
  CHECK_THROWS(nat_induct(q, 3));
}

namespace {

Sequent goal_only(const Session& s, const std::string& g) {
  Sequent q;
  q.goal = formula(s, g);
  return q;
}

}  // namespace

TEST_CASE("right rules: listed cases") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  std::vector<Sequent> r = rule_right(goal_only(s, "nabla x, name x"), env);
  REQUIRE(r.size() == 1);
  CHECK(print_formula(r[0].goal) == "name n1");
  CHECK(rule_right(goal_only(s, "{type i} /\\ {value (abs i x\\x)}"), env).size() == 2);
  // forall under a goal mentioning n1: the new variable is applied to n1.
  Sequent q = goal_only(s, "forall X, fresh X (abs i x\\x)");
  q.goal = replace_nom(q.goal, Nom{1, tm_ty()}, nominal(Nom{1, tm_ty()}));
  Sequent w = rule_right(goal_only(s, "nabla y, forall X, fresh X y"), env)[0];
  Sequent a = rule_right(w, env)[0];
  REQUIRE(a.goal.is(Formula::Kind::Atom));
  const Term& x = a.goal.atom().args()[0];
  REQUIRE(x.is_app());
  CHECK(x.args().size() == 1);
  CHECK(x.args()[0] == nominal(Nom{1, tm_ty()}));
  CHECK_THROWS(rule_right(goal_only(s, "name n1"), env));
}

TEST_CASE("left rules: listed cases") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  Sequent q = intros(goal_only(s, "forall E, (nabla x, fresh x E) -> true"), env);
  Sequent r = rule_left(q, env, "H1")[0];
  const Formula& h = r.hyps.back().f;
  REQUIRE(h.is(Formula::Kind::Atom));
  CHECK(h.atom().args()[0].is_nom());
  CHECK_FALSE(nabla::support(h.atom().args()[1]).count(h.atom().args()[0].nom()));
  // exists under n1 is raised over n1.
  Sequent e = rule_right(goal_only(s, "nabla y, (exists X, fresh X y) -> true"), env)[0];
  e = rule_right(e, env)[0];
  Sequent d = rule_left(e, env, e.hyps.back().name)[0];
  const Term& x = d.hyps.back().f.atom().args()[0];
  REQUIRE(x.is_app());
  CHECK(x.args()[0] == nominal(Nom{1, tm_ty()}));
}

TEST_CASE("id: listed cases") {
  Session s = with_names();
  run(s, "Define pr : tm -> tm -> prop by pr X Y := {value X}.");
  Term pr = constant("pr", Ty::arrows({tm_ty(), tm_ty()}, Ty::prop()));
  Term n1 = nominal(Nom{1, tm_ty()}), n2 = nominal(Nom{2, tm_ty()});
  auto seq = [&](Term h1, Term h2, Term g1, Term g2) {
    Sequent q;
    q.add_hyp(f_atom(app(pr, {h1, h2})));
    q.goal = f_atom(app(pr, {g1, g2}));
    return q;
  };
  CHECK(rule_id(seq(n1, n2, n2, n1), "H1"));
  CHECK(rule_id(seq(n1, n1, n1, n1), "H1"));
  CHECK_FALSE(rule_id(seq(n1, n1, n1, n2), "H1"));
}

TEST_CASE("case on fresh with a nominal in the second argument's support") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  // nabla y, forall E, fresh y E: E may not mention y after the case.
  Sequent q = intros(goal_only(s, "forall E, nabla y, fresh y (E y) -> true"), env);
  std::vector<Sequent> r = def_left(q, env, "H1");
  REQUIRE(r.size() == 1);
  Sequent p = r[0];
  p.goal = formula(s, "true");
  CHECK(print_formula(q.hyp("H1")->f).find("n1") != std::string::npos);
  // E is pruned so that it no longer takes the nominal.
  for (const VarInfo& v : p.vars) CHECK(v.ty == tm_ty());
}

TEST_CASE("unfolding: listed cases") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  Nom n1{1, tm_ty()};
  Sequent g;
  g.goal = f_atom(app(constant("name", Ty::arrow(tm_ty(), Ty::prop())), nominal(n1)));
  auto r = def_right(g, env);
  REQUIRE(r.has_value());
  CHECK(r->goal.is(Formula::Kind::True));
  Sequent m = goal_only(s, "element z (type i) (type i :: nil)");
  auto e = def_right(m, env, 0);
  REQUIRE(e.has_value());
  CHECK(e->goal.is(Formula::Kind::True));
  Sequent f;
  f.goal = f_atom(app(constant("fresh", Ty::arrows({tm_ty(), tm_ty()}, Ty::prop())), {nominal(n1), nominal(n1)}));
  CHECK_FALSE(def_right(f, env).has_value());
}

TEST_CASE("equality: listed cases") {
  Session s = with_names();
  KernelEnv env = support::env(s);
  Sequent q = intros(goal_only(s, "forall M N A R, app M N = abs A R -> false"), env);
  CHECK(eq_left(q, "H1").empty());
  Sequent x = intros(goal_only(s, "forall X, X = abs i x\\x -> {value X}"), env);
  auto r = eq_left(x, "H1");
  REQUIRE(r.size() == 1);
  CHECK(print_formula(r[0].goal) == "{value (abs i (x\\ x))}");
  Sequent n;
  n.goal = f_eq(nominal(Nom{1, tm_ty()}), nominal(Nom{1, tm_ty()}));
  CHECK(eq_right(n));
}

TEST_CASE("the inductive hypothesis needs a smaller argument") {
  Session s = with_names();
  run(s, "Theorem t : forall M, {value M} -> {value M}.");
  run(s, "induction on 1. intros.");
  CHECK_FALSE(s.exec("apply IH to H1.").ok());
  run(s, "case H1. search.");
  // Nested induction gets a second annotation level.
  run(s, "Theorem t2 : forall M N, {step M N} -> {steps N N} -> true.");
  run(s, "induction on 1. induction on 2. intros.");
  REQUIRE(s.proof() != nullptr);
  const Sequent& g = s.proof()->goals()[0];
  CHECK(g.hyp("IH") != nullptr);
  CHECK(g.hyp("IH1") != nullptr);
  CHECK(g.ind_level == 2);
}
