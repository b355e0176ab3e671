#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nabla/definitions.hpp"
#include "nabla/kernel.hpp"
#include "nabla/parser.hpp"
#include "nabla/sequent.hpp"

namespace nabla {

/// Renames nominal constants n_k to n_order[k-1] (identity beyond the order).
/// Scripts name nominals as an unpermuted run would; this maps those names
/// into a run whose fresh names follow `order`.
int rename_index(int k, const std::vector<int>& order);
Term rename_nominals(const Term& t, const std::vector<int>& order);

class LemmaStore {
 public:
  /// Throws DefinitionError on a duplicate name or a statement with free variables.
  void add(const std::string& name, const Formula& f);
  const Formula* find(const std::string& name) const;
  const std::vector<std::pair<std::string, Formula>>& all() const { return order_; }

 private:
  std::map<std::string, Formula> lemmas_;
  std::vector<std::pair<std::string, Formula>> order_;
};

struct TacticContext {
  Signature* sig = nullptr;
  const Definitions* defs = nullptr;
  const LemmaStore* lemmas = nullptr;
  KernelEnv env;
  int search_depth = 5;
  bool verify_meta = false;
};

/// An ongoing proof: open subgoals with focus on the first.
class ProofState {
 public:
  ProofState(std::string name, Formula statement);

  const std::string& name() const { return name_; }
  const Formula& statement() const { return statement_; }
  const std::vector<Sequent>& goals() const { return goals_; }
  bool done() const { return goals_.empty(); }
  /// Trusted-rule uses in this proof.
  const std::vector<TrustEntry>& trust() const { return trust_; }
  /// Tactics applied so far (source text when known), for transcripts.
  const std::vector<std::string>& script() const { return script_; }

  /// Applies a tactic to the focused subgoal. On error the state is unchanged.
  void step(const PTactic& t, const TacticContext& ctx, const std::string& text = {});
  /// Restores the state before the last successful step.
  void undo();
  bool can_undo() const { return !history_.empty(); }

 private:
  struct Snapshot {
    std::vector<Sequent> goals;
    std::size_t trust = 0;
  };
  std::vector<Sequent> run(const PTactic& t, const TacticContext& ctx, const Sequent& s);
  std::vector<Sequent> apply(const PTactic& t, const TacticContext& ctx, const Sequent& s);

  std::string name_;
  Formula statement_;
  std::vector<Sequent> goals_;
  std::vector<Snapshot> history_;
  std::vector<TrustEntry> trust_;
  std::vector<std::string> script_;
};

}  // namespace nabla
