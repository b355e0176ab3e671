#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nabla/formula.hpp"

namespace nabla {

class Unifier;

struct Hyp {
  std::string name;
  Formula f;
};

/// Σ : Γ ⊢ C. Hypotheses are named; eigenvariables carry unique display names.
class Sequent {
 public:
  std::vector<VarInfo> vars;
  std::vector<Hyp> hyps;
  Formula goal;
  int next_hyp = 1;
  /// Number of inductions performed on this branch (annotation level).
  int ind_level = 0;
  int next_ih = 0;

  const Hyp* hyp(const std::string& name) const;
  /// Adds f under a fresh name unless an identical hypothesis exists, in
  /// which case the existing name is returned.
  std::string add_hyp(const Formula& f);
  std::string add_named(const std::string& name, const Formula& f);
  void remove_hyp(const std::string& name);
  void replace_hyp(const std::string& name, const Formula& f);

  NomSet support() const;
  /// Display name -> variable, for elaborating user input.
  std::map<std::string, Term> names() const;
  std::string unique_name(const std::string& base) const;
  /// A new eigenvariable with a name unique in this sequent.
  VarInfo new_var(const std::string& base, const Ty& ty);

  void apply(const Subst& s);
  /// Without refresh, variables introduced by u keep their names until the
  /// caller has added the remaining formulas and calls refresh_vars.
  void apply(const Unifier& u, bool refresh = true);
  /// Recomputes the eigenvariable list from occurrences. Variables seen for
  /// the first time are renamed apart from the existing names.
  void refresh_vars();
};

}  // namespace nabla
