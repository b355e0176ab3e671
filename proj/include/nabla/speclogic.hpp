#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nabla/definitions.hpp"
#include "nabla/kernel.hpp"
#include "nabla/sequent.hpp"

namespace nabla {

/// A compiled specification clause: forall vars, prog head body.
struct ProgClause {
  std::vector<VarInfo> vars;  // VarTag::Bound
  Term head;                  // type o
  Term body;                  // type g; tt for facts
  int line = 0;
};

struct CompiledSpec {
  std::vector<std::string> kinds;
  std::vector<std::pair<std::string, Ty>> consts;
  std::vector<ProgClause> clauses;
};

/// Parses and compiles specification source. Declarations are added to sig.
CompiledSpec compile_spec(Signature& sig, const std::string& source);

/// Spec-syntax rendering of a clause (`head :- body.`), re-parsable by compile_spec.
std::string print_prog_clause(const ProgClause& c);

/// Defines prog (from the clauses), nat, element, member and seq. Throws
/// DefinitionError if seq is already installed.
void install_seq(Signature& sig, Definitions& defs, const std::vector<ProgClause>& prog);

/// Depth-bounded uniform-proof search for {L |- G}. Returns the unifier
/// binding the logic variables of L and G when a derivation exists.
std::optional<Unifier> spec_search(const KernelEnv& env, const Term& ctx, const Term& goal, int depth);

/// {L |- G} proved through the seq definition alone: search on
/// `exists n, nat n /\ seq n L G` using only def_right unfolding.
bool seq_derivable(const KernelEnv& env, const Term& ctx, const Term& goal, int depth);

/// Result of a trusted specification-logic rule.
struct MetaResult {
  std::vector<Sequent> goals;  // replaces the focused sequent
  TrustEntry entry;
  Formula added;               // the new hypothesis
};

/// Instantiation: a judgment mentioning nominal n holds with n replaced by t.
MetaResult meta_inst(const Sequent& s, const std::string& h, const Nom& n, const Term& t);
/// Cut: {L1 |- a} and {a :: L2 |- G} give {L1, L2 |- G}. Either order.
MetaResult meta_cut(const Sequent& s, const std::string& h1, const std::string& h2);
/// Monotonicity: {L1 |- G} gives {L2 |- G}. When L1 is not syntactically
/// contained in L2, the obligation `forall E, member E L1 -> member E L2` is
/// added as the first subgoal.
MetaResult meta_monotone(const Sequent& s, const std::string& h, const Term& l2);

/// Re-derives a closed judgment with spec_search; nullopt when the judgment
/// mentions eigenvariables.
std::optional<bool> verify_judgment(const KernelEnv& env, const Formula& obj, int depth);

}  // namespace nabla
