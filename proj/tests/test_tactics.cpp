#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace nabla;
using support::run;

namespace {

const char* kDet =
    "Theorem step_det : forall M N P, {step M N} -> {step M P} -> N = P.\n"
    "induction on 1. intros. case H1.\n"
    "  case H2.\n"
    "    apply IH to H3 H4. case H5. search.\n"
    "    case H4. case H3.\n"
    "    case H3.\n"
    "  case H2.\n"
    "    case H3. case H5.\n"
    "    apply IH to H4 H6. case H7. search.\n"
    "    case H5. case H4.\n"
    "  case H2.\n"
    "    case H4.\n"
    "    case H3. case H5.\n"
    "    search.\n";

/// Statements of a script, one per entry.
std::vector<std::string> statements(const std::string& text) {
  std::vector<std::string> out;
  Parser p = Parser::of(text);
  while (auto c = p.command()) out.push_back(c->text);
  return out;
}

}  // namespace

TEST_CASE("tactic application is deterministic") {
  Session a = support::stlc(), b = support::stlc();
  for (const std::string& st : statements(kDet)) {
    run(a, st);
    run(b, st);
    CHECK(a.display() == b.display());
    CHECK(a.snapshot_json() == b.snapshot_json());
  }
  CHECK(a.lemmas().find("step_det") != nullptr);
}

TEST_CASE("undo restores the previous state exactly") {
  Session s = support::stlc();
  std::vector<std::string> sts = statements(kDet);
  run(s, sts[0]);
  for (std::size_t k = 1; k + 1 < sts.size(); ++k) {
    std::string before = s.snapshot_json();
    run(s, sts[k]);
    REQUIRE(s.undo().ok());
    CHECK(s.snapshot_json() == before);
    run(s, sts[k]);
  }
  Session fresh = support::stlc();
  CHECK_FALSE(fresh.undo().ok());
}

TEST_CASE("a failing tactic leaves the state unchanged") {
  Session s = support::stlc();
  run(s, "Theorem t : forall M, {value M} -> {value M}.");
  run(s, "intros.");
  std::string before = s.snapshot_json();
  CHECK_FALSE(s.exec("case H7.").ok());
  CHECK_FALSE(s.exec("apply nosuch to H1.").ok());
  CHECK_FALSE(s.exec("exists M.").ok());
  CHECK(s.snapshot_json() == before);
  run(s, "search.");
  CHECK_FALSE(s.in_proof());
}

TEST_CASE("the transcript replays to the same state") {
  Session live = support::stlc();
  std::vector<std::string> sts = statements(kDet);
  for (std::size_t k = 0; k < 6; ++k) run(live, sts[k]);
  REQUIRE(live.undo().ok());
  CHECK_FALSE(live.exec("case H99.").ok());
  run(live, sts[5]);
  run(live, sts[6]);
  std::string script;
  for (const std::string& st : live.transcript()) script += st + "\n";
  Session replay;
  ExecResult r = replay.exec(script, "<replay>", NABLA_CORPUS);
  INFO(script);
  REQUIRE(r.ok());
  CHECK(replay.snapshot_json() == live.snapshot_json());
  CHECK(replay.display() == live.display());
}

TEST_CASE("apply with holes turns the missing premises into subgoals") {
  Session s = support::stlc();
  run(s, "Theorem lem : forall M A, {of M A} -> {type A} -> {value M} -> {type A}.");
  run(s, "intros. search.");
  run(s, "Theorem use : forall M A, {of M A} -> {type A}.");
  run(s, "intros. apply lem to H1 _ _.");
  REQUIRE(s.proof() != nullptr);
  const auto& goals = s.proof()->goals();
  REQUIRE(goals.size() == 3);
  CHECK(print_formula(goals[0].goal) == "{type A}");
  CHECK(print_formula(goals[1].goal) == "{value M}");
  CHECK(goals[2].hyps.size() == 2);
}

TEST_CASE("theorems are stored and usable by apply") {
  Session s = support::stlc();
  run(s, kDet);
  run(s, "Theorem det2 : forall M N, {step M N} -> {step M N} -> N = N.");
  run(s, "intros. apply step_det to H1 H1. search.");  // identical premises share H1
  CHECK(s.lemmas().all().size() == 2);
  CHECK_FALSE(s.exec("Theorem step_det : true.").ok());
}

TEST_CASE("rename_index follows the order and is the identity beyond it") {
  std::vector<int> order{3, 1, 2};
  CHECK(rename_index(1, order) == 3);
  CHECK(rename_index(2, order) == 1);
  CHECK(rename_index(3, order) == 2);
  CHECK(rename_index(4, order) == 4);
  CHECK(rename_index(1, {}) == 1);
}

TEST_CASE("tactics: listed cases") {
  Session s = support::stlc();
  run(s, "Theorem step_det : forall M N P, {step M N} -> {step M P} -> N = P.");
  run(s, "induction on 1. intros. case H1.");
  // One subgoal per step clause.
  CHECK(s.proof()->goals().size() == 3);
  run(s, "abort.");
  run(s, "Theorem refl : forall M, {steps M M}.");
  run(s, "intros. search.");
  CHECK_FALSE(s.in_proof());
  CHECK(s.lemmas().find("refl") != nullptr);
  // A theorem is stored only once all subgoals are closed.
  run(s, "Theorem open : forall M N, {step M N} -> {steps M N}.");
  run(s, "intros.");
  CHECK(s.lemmas().find("open") == nullptr);
  run(s, "abort.");
  CHECK(s.lemmas().find("open") == nullptr);
}
