#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nabla/definitions.hpp"
#include "nabla/formula.hpp"
#include "nabla/parser.hpp"
#include "nabla/signature.hpp"

namespace nabla {

/// Type inference and name resolution from parsed syntax to terms and
/// formulas. Several roots can be registered so that they share implicit
/// variables (e.g. the head and body of a clause); `solve` must be called
/// before any root is built.
class Elaborator {
 public:
  explicit Elaborator(const Signature& sig);

  /// Names that resolve to existing variables (eigenvariables of a sequent).
  void bind(const std::string& name, const Term& t);
  /// Unknown capitalized identifiers become fresh variables with this tag.
  void allow_implicit(VarTag tag);
  /// A name shared by all roots whose type is inferred (nabla head variables).
  void declare(const std::string& name, std::optional<Ty> ty = std::nullopt);

  void add_term(const PExpr& e, std::optional<Ty> expected = std::nullopt);
  void add_goal(const PExpr& e);
  void add_formula(const PFormula& f);
  void solve();

  Term term(const PExpr& e);
  Term goal(const PExpr& e);
  Formula formula(const PFormula& f);
  /// Variable created for a declared name.
  VarInfo declared(const std::string& name);
  /// Implicit variables in order of first occurrence.
  std::vector<VarInfo> implicits();

  /// Convenience: elaborate one closed-ish term / formula against bindings.
  static Term term_in(const Signature& sig, const PExpr& e, const std::map<std::string, Term>& vars,
                      std::optional<Ty> expected = std::nullopt);
  static Formula formula_in(const Signature& sig, const PFormula& f, const std::map<std::string, Term>& vars);

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

/// Clauses of a Define block. The defined predicates must already be in sig.
/// Capitalized variables are universally quantified over the clause.
std::vector<Clause> elaborate_clauses(const Signature& sig, const std::vector<PClause>& clauses);

}  // namespace nabla
