#include "doctest.h"
#include "nabla/error.hpp"
#include "oracle.hpp"

using namespace nabla;

namespace {

oracle::Universe U;

Term X(const VarInfo& v) { return var(v); }

}  // namespace

TEST_CASE("flex-rigid solution is sound") {
  VarInfo x = fresh_var("X", U.i, VarTag::Eigen);
  UnifProblem p;
  p.equations.emplace_back(app(U.f, {X(x), U.a}), app(U.f, {U.a, U.a}));
  UnifResult r = unify_pattern(p);
  REQUIRE(r.outcome == UnifyOutcome::Ok);
  CHECK(r.mgu.at(x.id) == U.a);
}

TEST_CASE("occurs check fails strictly") {
  VarInfo x = fresh_var("X", U.i, VarTag::Eigen);
  UnifProblem p;
  p.equations.emplace_back(X(x), app(U.f, {X(x), U.a}));
  CHECK(unify_pattern(p).outcome == UnifyOutcome::NoSolution);
}

TEST_CASE("nominal outside the support cannot be captured") {
  VarInfo x = fresh_var("X", U.i, VarTag::Eigen);
  UnifProblem p;
  p.equations.emplace_back(X(x), nominal(U.n1));
  CHECK(unify_pattern(p).outcome == UnifyOutcome::NoSolution);
  p.supports[x.id] = {U.n1};
  UnifResult r = unify_pattern(p);
  REQUIRE(r.outcome == UnifyOutcome::Ok);
  CHECK(r.mgu.at(x.id) == nominal(U.n1));
}

TEST_CASE("pattern application abstracts the nominal argument") {
  VarInfo f = fresh_var("F", U.ii, VarTag::Eigen);
  UnifProblem p;
  p.equations.emplace_back(app(X(f), nominal(U.n1)), app(U.f, {nominal(U.n1), U.a}));
  UnifResult r = unify_pattern(p);
  REQUIRE(r.outcome == UnifyOutcome::Ok);
  CHECK(oracle::same(r.mgu.at(f.id), lam(U.i, app(U.f, {bvar(0), U.a}))));
}

TEST_CASE("eta: lambda x. F x equals F") {
  VarInfo f = fresh_var("F", U.ii, VarTag::Eigen);
  VarInfo g = fresh_var("G", U.ii, VarTag::Eigen);
  UnifProblem p;
  p.equations.emplace_back(lam(U.i, app(X(f), bvar(0))), X(g));
  UnifResult r = unify_pattern(p);
  REQUIRE(r.outcome == UnifyOutcome::Ok);
  CHECK(oracle::same(apply_subst(X(f), r.mgu), apply_subst(X(g), r.mgu)));
}

TEST_CASE("a variable narrowed at two occurrences is bound once") {
  // Y loses n1 from its support at its first occurrence; the second
  // occurrence must see that binding.
  VarInfo x = fresh_var("X", U.i, VarTag::Eigen);
  VarInfo y = fresh_var("Y", U.i, VarTag::Eigen);
  oracle::Problem p;
  p.vars = {{x, {}}, {y, {U.n1}}};
  p.eqs.emplace_back(X(x), app(U.f, {X(y), X(y)}));
  UnifResult r = unify_pattern(p.as_unif());
  REQUIRE(r.outcome == UnifyOutcome::Ok);
  CHECK(oracle::solves(p, r.mgu));
  for (const Subst& th : oracle::brute_force(U, p, 3)) CHECK(oracle::factors_through(p, r.mgu, th));
}

TEST_CASE("non-pattern equations are reported") {
  VarInfo f = fresh_var("F", U.ii, VarTag::Eigen);
  UnifProblem p;
  p.equations.emplace_back(app(X(f), U.a), U.a);
  CHECK(unify_pattern(p).outcome == UnifyOutcome::NonPattern);
}

TEST_CASE("ill-typed problems are rejected") {
  VarInfo f = fresh_var("F", U.ii, VarTag::Eigen);
  UnifProblem p;
  p.equations.emplace_back(X(f), U.a);
  CHECK_THROWS_AS(unify_pattern(p), TypeError);
}

TEST_CASE("search mode keeps eigenvariables rigid and checks scoping") {
  VarInfo e = fresh_var("E", U.i, VarTag::Eigen);
  VarInfo l = fresh_var("L", U.i, VarTag::Logic);
  VarInfo later = fresh_var("E2", U.i, VarTag::Eigen);
  {
    Unifier u(Unifier::Mode::Search);
    CHECK(u.unify(X(e), U.a) == UnifyOutcome::NoSolution);
  }
  {
    Unifier u(Unifier::Mode::Search);
    CHECK(u.unify(X(l), X(e)) == UnifyOutcome::Ok);
  }
  {
    Unifier u(Unifier::Mode::Search);
    CHECK(u.unify(X(l), X(later)) == UnifyOutcome::NoSolution);
  }
  {
    Unifier u(Unifier::Mode::Case);
    CHECK(u.unify(X(e), U.a) == UnifyOutcome::Ok);
  }
}

TEST_CASE("random pattern problems: soundness, most generality, equivariance") {
  std::mt19937 rng(20260916);
  Permutation swap = Permutation::swap(U.n1, U.n2);
  int ok = 0, none = 0;
  for (int n = 0; n < 200; ++n) {
    oracle::Problem p = oracle::random_problem(U, rng);
    UnifResult r = unify_pattern(p.as_unif());
    REQUIRE(r.outcome != UnifyOutcome::NonPattern);
    std::vector<Subst> all = oracle::brute_force(U, p, 3);
    if (r.outcome == UnifyOutcome::Ok) {
      ++ok;
      CHECK(oracle::solves(p, r.mgu));
      for (const Subst& th : all) CHECK(oracle::factors_through(p, r.mgu, th));
    } else {
      ++none;
      CHECK(all.empty());
    }
    // The permuted problem has the same outcome and its solution is the
    // permuted solution up to the choice of new variables.
    oracle::Problem q = p;
    for (auto& x : q.vars) {
      NomSet s;
      for (const Nom& c : x.supp) s.insert(swap(c));
      x.supp = s;
    }
    for (auto& [l, rr] : q.eqs) {
      l = apply_perm(swap, l);
      rr = apply_perm(swap, rr);
    }
    UnifResult rq = unify_pattern(q.as_unif());
    CHECK(rq.outcome == r.outcome);
    if (r.outcome == UnifyOutcome::Ok) {
      Subst permuted;
      for (const auto& [id, t] : r.mgu) permuted[id] = apply_perm(swap, t);
      CHECK(oracle::solves(q, permuted));
    }
  }
  CHECK(ok > 20);
  CHECK(none > 20);
}

TEST_CASE("candidate permutations start with the identity and are distinct") {
  Nom c3{3, U.i};
  auto ps = candidate_perms({U.n1, U.n2}, {c3});
  REQUIRE(!ps.empty());
  CHECK(ps.front().is_identity());
  CHECK(ps.size() == 6);  // 3! bijections on {n1, n2, n3}
  for (std::size_t a = 0; a < ps.size(); ++a)
    for (std::size_t b = a + 1; b < ps.size(); ++b) CHECK(ps[a].mapping() != ps[b].mapping());
}

TEST_CASE("raise_over applies a fresh variable to the nominals") {
  VarInfo x = fresh_var("X", U.i, VarTag::Eigen);
  auto [h, t] = raise_over(x, {U.n1, U.n2});
  CHECK(h.id != x.id);
  CHECK(h.ty == Ty::arrows({U.i, U.i}, U.i));
  CHECK(t == app(var(h), {nominal(U.n1), nominal(U.n2)}));
  CHECK(raise_over(x, {}).second == var(x));
}

TEST_CASE("unify_pattern: listed cases") {
  VarInfo f = fresh_var("F", U.ii, VarTag::Eigen);
  {
    UnifProblem p;
    p.equations.emplace_back(app(X(f), nominal(U.n1)), nominal(U.n1));
    UnifResult r = unify_pattern(p);
    REQUIRE(r.outcome == UnifyOutcome::Ok);
    CHECK(oracle::same(r.mgu.at(f.id), lam(U.i, bvar(0))));
    // With n1 in F's support both x\x and x\n1 unify: not a pattern.
    p.supports[f.id] = {U.n1};
    CHECK(unify_pattern(p).outcome == UnifyOutcome::NonPattern);
  }
  {
    VarInfo x = fresh_var("X", U.i, VarTag::Eigen);
    UnifProblem p;
    p.equations.emplace_back(X(x), X(x));
    UnifResult r = unify_pattern(p);
    REQUIRE(r.outcome == UnifyOutcome::Ok);
    CHECK((r.mgu.empty() || r.mgu.at(x.id) == X(x)));
  }
  {
    UnifProblem p;
    p.equations.emplace_back(nominal(U.n1), nominal(U.n2));
    CHECK(unify_pattern(p).outcome == UnifyOutcome::NoSolution);
  }
}

TEST_CASE("raise_over and candidate_perms: listed cases") {
  VarInfo v = fresh_var("V", U.i, VarTag::Eigen);
  auto [h, t] = raise_over(v, {U.n1});
  CHECK(h.ty == U.ii);
  CHECK(t == app(var(h), nominal(U.n1)));
  VarInfo w = fresh_var("W", U.ii, VarTag::Eigen);
  CHECK(raise_over(w, {U.n1, U.n2}).first.ty == Ty::arrows({U.i, U.i, U.i}, U.i));
  auto none = candidate_perms({}, {});
  REQUIRE(none.size() == 1);
  CHECK(none[0].is_identity());
  auto two = candidate_perms({U.n1}, {U.n2});
  REQUIRE(two.size() == 2);
  CHECK(two[1](U.n1) == U.n2);
}
