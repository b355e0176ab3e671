#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nabla/definitions.hpp"
#include "nabla/sequent.hpp"
#include "nabla/unify.hpp"

namespace nabla {

struct KernelEnv {
  const Signature* sig = nullptr;
  const Definitions* defs = nullptr;
  /// When set, fresh nominal constants are drawn in this index order.
  const std::vector<int>* nominal_order = nullptr;

  Nom fresh_nom(const Ty& ty, const NomSet& avoid) const { return fresh_nominal(ty, avoid, nominal_order); }
};

/// `have` meets the induction requirement `need`.
bool satisfies(const Restriction& have, const Restriction& need);

/// Right rule for a non-atomic goal. ∃ takes a witness; ∨ takes side 1 or 2.
std::vector<Sequent> rule_right(const Sequent& s, const KernelEnv& env, const std::optional<Term>& witness = {},
                                int side = 0);
/// Repeated ∀R, ∇R and ⊃R. Names, when given, are used for the introduced
/// variables and hypotheses in order.
Sequent intros(const Sequent& s, const KernelEnv& env, const std::vector<std::string>& names = {});

/// Left rule on a hypothesis, dispatching on its shape: propositional and
/// quantifier rules, equality, defined atoms (def_left) and specification
/// judgments (obj_left). ∀L needs an instantiation term.
std::vector<Sequent> rule_left(const Sequent& s, const KernelEnv& env, const std::string& h, bool keep = false,
                               const std::optional<Term>& inst = {});
/// id_π: closes the goal if the hypothesis matches it up to permutations.
bool rule_id(const Sequent& s, const std::string& h);

std::vector<Sequent> def_left(const Sequent& s, const KernelEnv& env, const std::string& h, bool keep = false);
/// Unfolds the goal with the given clause (0-based), or the first clause
/// that matches when clause < 0.
std::optional<Sequent> def_right(const Sequent& s, const KernelEnv& env, int clause = -1);
std::vector<Sequent> eq_left(const Sequent& s, const std::string& h, bool keep = false);
bool eq_right(const Sequent& s);
/// Case analysis on a specification judgment {L |- G}.
std::vector<Sequent> obj_left(const Sequent& s, const KernelEnv& env, const std::string& h, bool keep = false);

/// Induction on the pos-th (1-based) premise of the goal.
Sequent nat_induct(const Sequent& s, int pos);

/// Adds a hypothesis after splitting ∧ and introducing ∃ and ∇; ⊤ is dropped.
void add_decomposed(Sequent& s, const KernelEnv& env, const Formula& f);

/// Replaces every eigenvariable v of s by v' c̄ for fresh v'.
void raise_sequent(Sequent& s, const std::vector<Nom>& cs);

/// Unifies two formulas of the same shape. Induction restrictions of
/// `pattern` must be satisfied by `target`.
bool unify_formula(Unifier& u, const Formula& pattern, const Formula& target);

/// Bounded depth-first proof search: hypotheses (up to permutation),
/// right rules, def_right unfolding and specification-logic backchaining.
/// Each unfolding or backchaining step costs one unit of depth.
class Search {
 public:
  using Cont = std::function<bool(Unifier&)>;
  Search(const KernelEnv& env, int depth) : env_(env), depth_(depth) {}

  /// Closes the sequent's goal.
  bool prove(const Sequent& s);
  /// Proves goal under hyps, calling k with the final unifier.
  bool run(const std::vector<Formula>& hyps, const Formula& goal, Unifier& u, const Cont& k);
  /// Number of proof steps explored (for diagnostics and tests).
  long steps() const { return steps_; }

 private:
  bool prove_f(std::vector<Formula>& hyps, const Formula& goal, Unifier& u, int depth, const Cont& k);
  bool prove_atom(std::vector<Formula>& hyps, const Formula& goal, Unifier& u, int depth, const Cont& k);
  bool prove_obj(std::vector<Formula>& hyps, const Term& ctx, const Term& g, const Restriction& r, Unifier& u,
                 int depth, const Cont& k);
  bool from_hyps(std::vector<Formula>& hyps, const Formula& goal, Unifier& u, const Cont& k);
  NomSet used_support(const std::vector<Formula>& hyps, const Formula& goal, const Unifier& u) const;

  const KernelEnv& env_;
  int depth_;
  long steps_ = 0;
  NomSet taken_;  // nominals introduced during this search
};

}  // namespace nabla
