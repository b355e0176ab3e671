#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nabla/formula.hpp"
#include "nabla/signature.hpp"

namespace nabla {

/// A definitional clause  forall x̄. (nabla z̄. head) := body.
/// Both x̄ and z̄ are VarTag::Bound variables.
struct Clause {
  std::vector<VarInfo> vars;
  std::vector<VarInfo> nablas;
  Term head;
  Formula body;  // f_true() for facts
  int line = 0;
};

struct DefinedPred {
  std::string name;
  Ty ty;
  std::vector<Clause> clauses;
  int level = 0;
  bool override_strat = false;
  int block = 0;  // predicates defined together share a block
};

/// One trusted step recorded for the trust report.
struct TrustEntry {
  enum class Kind { Override, Inst, Cut, Monotone };
  Kind kind;
  std::string subject;  // predicate or theorem name
  std::string detail;
  std::string str() const;
};

class Definitions {
 public:
  /// Adds a block of (mutually) defined predicates. The predicates must
  /// already be declared in the signature. Throws DefinitionError on
  /// malformed clauses or a stratification violation without override.
  void add(const std::vector<std::pair<std::string, Ty>>& preds, std::vector<Clause> clauses, bool override_strat);

  const DefinedPred* find(const std::string& name) const;
  bool defined(const std::string& name) const { return find(name) != nullptr; }
  /// Predicate name of an atom (head constant), or empty.
  static std::string pred_of(const Term& atom);
  bool same_block(const std::string& a, const std::string& b) const;

  const std::vector<TrustEntry>& overrides() const { return overrides_; }
  const std::map<std::string, DefinedPred>& all() const { return preds_; }

 private:
  std::map<std::string, DefinedPred> preds_;
  std::vector<TrustEntry> overrides_;
  int blocks_ = 0;
};

/// An instance of a clause whose universal variables are replaced by fresh
/// variables raised over `over`, and whose nabla variables are replaced by
/// the given nominal constants.
struct ClauseInstance {
  Term head;
  Formula body;
  std::vector<VarInfo> fresh;
};
ClauseInstance instantiate_clause(const Clause& c, const std::vector<Nom>& over, const std::vector<Nom>& nabla_images,
                                  VarTag tag);

/// The clause raised over ā: each x is replaced by h ā with h fresh.
Clause raise_clause(const Clause& c, const std::vector<Nom>& a);

/// Injective, type-preserving maps from the variables to `pool`; when
/// `fresh` is non-empty, fresh nominals are used in order so that
/// assignments differing only by a renaming of fresh names are not repeated.
std::vector<std::vector<Nom>> nabla_assignments(const std::vector<VarInfo>& zs, const std::vector<Nom>& pool,
                                                const std::vector<Nom>& fresh);

}  // namespace nabla
