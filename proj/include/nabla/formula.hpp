#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nabla/term.hpp"

namespace nabla {

/// Induction annotation on an atom or specification judgment: `@` marks the
/// atom the current induction is on, `*` marks atoms strictly below it.
/// Levels distinguish nested inductions (`@@`, `**`).
struct Restriction {
  enum class Kind { None, Smaller, Equal };
  Kind kind = Kind::None;
  int level = 0;

  static Restriction none() { return {}; }
  static Restriction smaller(int l) { return {Kind::Smaller, l}; }
  static Restriction equal(int l) { return {Kind::Equal, l}; }
  bool is_none() const { return kind == Kind::None; }
  std::string str() const;
  friend bool operator==(const Restriction& a, const Restriction& b) {
    return a.kind == b.kind && (a.kind == Kind::None || a.level == b.level);
  }
};

/// Formulas of the reasoning logic. Quantifier binders are variables tagged
/// VarTag::Bound with unique ids; instantiation substitutes them.
class Formula {
 public:
  enum class Kind { True, False, And, Or, Imp, Forall, Exists, Nabla, Eq, Atom, Obj };

  Formula() = default;
  Kind kind() const;
  bool valid() const { return node_ != nullptr; }

  const Formula& left() const;
  const Formula& right() const;
  const std::vector<VarInfo>& binders() const;
  const Formula& body() const;
  /// Eq sides.
  const Term& lhs() const;
  const Term& rhs() const;
  /// Atom: the predicate application (type prop).
  const Term& atom() const;
  /// Obj: specification context (olist) and goal (g).
  const Term& context() const;
  const Term& goal() const;
  const Restriction& restriction() const;

  bool is(Kind k) const { return kind() == k; }
  bool is_quantifier() const {
    return kind() == Kind::Forall || kind() == Kind::Exists || kind() == Kind::Nabla;
  }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend Formula make_formula(Node n);
};

Formula f_true();
Formula f_false();
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_imp(Formula a, Formula b);
/// Quantifier over binders (tag Bound); an empty binder list returns body.
Formula f_quant(Formula::Kind q, std::vector<VarInfo> binders, Formula body);
Formula f_eq(Term l, Term r);
Formula f_atom(Term a, Restriction r = {});
Formula f_obj(Term ctx, Term goal, Restriction r = {});

Formula with_restriction(const Formula& f, Restriction r);

/// Rebuilds f with every embedded term transformed by fn.
Formula map_terms(const Formula& f, const std::function<Term(const Term&)>& fn);
Formula subst(const Formula& f, const Subst& s);
Formula apply_perm(const Permutation& p, const Formula& f);
Formula replace_nom(const Formula& f, const Nom& n, const Term& by);

NomSet support(const Formula& f);
void collect_support(const Formula& f, NomSet& out);
/// Free (non-Bound) variables, in order of first occurrence.
void collect_vars(const Formula& f, std::vector<VarInfo>& out);
bool occurs_var(const Formula& f, std::uint64_t id);

/// Instantiates the first binders of quantifier f with the given terms; the
/// remaining binders stay quantified.
Formula instantiate(const Formula& f, const std::vector<Term>& terms);

/// Equality up to renaming of quantifier binders. Restrictions are compared
/// unless ignore_restrictions is set.
bool alpha_equal(const Formula& a, const Formula& b, bool ignore_restrictions = false);

/// Applies fn to every restriction-carrying node (atoms and judgments).
Formula map_restrictions(const Formula& f, const std::function<Restriction(const Formula&)>& fn);

}  // namespace nabla
