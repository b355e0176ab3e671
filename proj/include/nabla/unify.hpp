#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "nabla/formula.hpp"

namespace nabla {

enum class UnifyOutcome { Ok, NoSolution, NonPattern };

/// Incremental higher-order pattern unification with nominal constants.
///
/// In Case mode every eigenvariable and logic variable is instantiable and
/// no scoping check is made (case analysis). In Search mode only logic
/// variables are instantiable, eigenvariables are rigid, and a logic
/// variable may only mention eigenvariables whose stamp does not exceed its
/// own. Equations outside the pattern fragment are postponed and retried as
/// bindings accumulate.
class Unifier {
 public:
  enum class Mode { Case, Search };

  explicit Unifier(Mode mode = Mode::Search) : mode_(mode) {}

  Mode mode() const { return mode_; }
  /// Nominal constants that an instantiation of the variable may mention
  /// directly. Variables without an entry have empty support.
  void set_support(std::uint64_t id, NomSet s) { supp_[id] = std::move(s); }
  const NomSet& support_of(std::uint64_t id) const;
  bool flexible(const VarInfo& v) const;

  /// Adds s = t. NoSolution leaves the unifier in an unspecified state, so
  /// callers that backtrack should work on a copy.
  UnifyOutcome unify(const Term& s, const Term& t);
  /// Reports NonPattern if postponed equations remain.
  UnifyOutcome finish() const { return postponed_.empty() ? UnifyOutcome::Ok : UnifyOutcome::NonPattern; }
  bool has_postponed() const { return !postponed_.empty(); }

  bool bound(std::uint64_t id) const { return bind_.count(id) > 0; }
  Term resolve(const Term& t) const;
  Formula resolve(const Formula& f) const;
  /// The accumulated bindings, fully resolved.
  Subst substitution() const;
  /// Variables introduced while solving (pruning and flex-flex splitting).
  const std::vector<VarInfo>& created() const { return created_; }

 private:
  struct Eq {
    Term a, b;
    int depth;
  };

  void solve(const Term& a, const Term& b, int depth);
  void flex_rigid(const Term& f, const Term& t, int depth);
  void flex_flex(const Term& a, const Term& b, int depth);
  Term invert(const Term& t, const VarInfo& x, const std::vector<Term>& args, int depth, int inner);
  Term whnf(const Term& t) const;
  bool is_flex(const Term& t) const;
  bool pattern_args(const VarInfo& x, const std::vector<Term>& args, int depth, std::vector<Term>& out) const;
  void bind(const VarInfo& x, const Term& t);
  VarInfo fresh_like(const VarInfo& x, const Ty& ty, std::uint64_t ts, NomSet supp);
  void retry_postponed();

  Mode mode_;
  std::map<std::uint64_t, Term> bind_;
  std::map<std::uint64_t, NomSet> supp_;
  std::vector<Eq> postponed_;
  std::vector<VarInfo> created_;
};

/// A standalone unification problem: every variable is instantiable.
struct UnifProblem {
  std::vector<std::pair<Term, Term>> equations;
  std::map<std::uint64_t, NomSet> supports;
};

struct UnifResult {
  UnifyOutcome outcome = UnifyOutcome::NoSolution;
  Subst mgu;
};

/// Throws TypeError when the two sides of an equation differ in type.
UnifResult unify_pattern(const UnifProblem& p);

/// Replaces v by h c1 .. cn for a fresh h; returns h and the application.
/// An empty list returns v itself.
std::pair<VarInfo, Term> raise_over(const VarInfo& v, const std::vector<Nom>& cs);

/// All type-preserving permutations of a ∪ c, identity first, without duplicates.
std::vector<Permutation> candidate_perms(const NomSet& a, const NomSet& c);

}  // namespace nabla
