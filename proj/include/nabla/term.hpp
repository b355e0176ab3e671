#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nabla/types.hpp"

namespace nabla {

/// Free variables: eigenvariables of a sequent, instantiatable logic
/// variables (created by apply/search), and placeholders for formula binders.
enum class VarTag { Eigen, Logic, Bound };

struct VarInfo {
  std::uint64_t id = 0;
  std::string name;
  Ty ty;
  VarTag tag = VarTag::Eigen;
  /// Scoping stamp: a logic variable may only be bound to terms whose rigid
  /// variables carry a strictly smaller stamp.
  std::uint64_t ts = 0;
};

/// Creates a variable with a globally unique id; ts defaults to the id.
VarInfo fresh_var(std::string name, Ty ty, VarTag tag);
/// Same, but with an explicit scoping stamp.
VarInfo fresh_var(std::string name, Ty ty, VarTag tag, std::uint64_t ts);

/// A nominal constant. Namespaces are per type: (index, type) is the identity.
struct Nom {
  int index = 0;
  Ty ty;
  std::string str() const { return "n" + std::to_string(index); }
  friend bool operator==(const Nom& a, const Nom& b) { return a.index == b.index && a.ty == b.ty; }
  friend bool operator!=(const Nom& a, const Nom& b) { return !(a == b); }
  friend bool operator<(const Nom& a, const Nom& b) {
    if (a.index != b.index) return a.index < b.index;
    return a.ty < b.ty;
  }
};
using NomSet = std::set<Nom>;

/// Simply typed lambda terms in beta-normal form. Bound variables use de
/// Bruijn indices, so alpha-equivalent terms are structurally equal.
/// Applications are kept in spine form: the head is never an application
/// or an abstraction.
class Term {
 public:
  enum class Kind { Var, Const, Nom, BVar, App, Lam };

  Term() = default;

  Kind kind() const;
  bool valid() const { return node_ != nullptr; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_nom() const { return kind() == Kind::Nom; }
  bool is_bvar() const { return kind() == Kind::BVar; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_lam() const { return kind() == Kind::Lam; }

  const VarInfo& var() const;
  const std::string& const_name() const;
  Nom nom() const;
  int bvar_index() const;
  /// Type of a Var, Const or Nom node, or the binder type of a Lam node.
  const Ty& ty() const;
  const Term& head() const;
  const std::vector<Term>& args() const;
  const Term& body() const;
  const std::string& hint() const;

  /// Head symbol after stripping applications (the term itself when not an App).
  const Term& spine_head() const { return is_app() ? head() : *this; }
  /// Arguments of an application (empty for non-applications).
  const std::vector<Term>& spine_args() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  struct Node;

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend Term var(const VarInfo& v);
  friend Term constant(std::string name, Ty ty);
  friend Term nominal(const Nom& n);
  friend Term bvar(int index);
  friend Term lam(Ty ty, Term body, std::string hint);
  friend Term app(Term head, std::vector<Term> args);
};

Term var(const VarInfo& v);
Term constant(std::string name, Ty ty);
Term nominal(const Nom& n);
Term bvar(int index);
Term lam(Ty ty, Term body, std::string hint = "x");
/// Application; beta-reduces on the spot when the head is an abstraction.
Term app(Term head, std::vector<Term> args);
inline Term app(Term head, Term arg) { return app(std::move(head), std::vector<Term>{std::move(arg)}); }

/// Shifts loose de Bruijn indices >= cutoff by `by`.
Term lift(const Term& t, int by, int cutoff = 0);
/// Substitutes `arg` for index 0 in `body` (which sat under one binder) and normalizes.
Term instantiate(const Term& body, const Term& arg);
/// True if de Bruijn index `index` (relative to the top of t) occurs in t.
bool has_loose_bvar(const Term& t, int index);
/// Eta-reduces at every position.
Term eta_reduce(const Term& t);

/// Types: ctx holds binder types with the innermost binder last.
Ty type_of(const Term& t, const std::vector<Ty>& ctx = {});

using Subst = std::map<std::uint64_t, Term>;
Term apply_subst(const Term& t, const Subst& s);

void collect_vars(const Term& t, std::vector<VarInfo>& out);
bool occurs_var(const Term& t, std::uint64_t id);

/// The nominal constants occurring in t.
NomSet support(const Term& t);
void collect_support(const Term& t, NomSet& out);

/// Replaces nominal `n` by `by` everywhere (and normalizes).
Term replace_nom(const Term& t, const Nom& n, const Term& by);
/// Turns occurrences of `n` into a new outermost bound variable:
/// returns the body b such that `lam(n.ty, b)` abstracts n out of t.
Term abstract_nom(const Term& t, const Nom& n);

/// Finite, type-preserving bijection on nominal constants.
class Permutation {
 public:
  Permutation() = default;
  static Permutation swap(const Nom& a, const Nom& b);
  /// Builds the permutation sending from[i] to to[i]; throws if not bijective
  /// on the given domain or not type-preserving.
  static Permutation from_pairs(const std::vector<Nom>& from, const std::vector<Nom>& to);

  Nom operator()(const Nom& n) const;
  Permutation inverse() const;
  bool is_identity() const;
  const std::map<Nom, Nom>& mapping() const { return map_; }

 private:
  std::map<Nom, Nom> map_;
};

Term apply_perm(const Permutation& p, const Term& t);

/// Lowest-index nominal of type ty not in avoid. When `order` is given, the
/// enumeration visits indices in that order first (used to replay proofs under
/// a permuted namespace).
Nom fresh_nominal(const Ty& ty, const NomSet& avoid, const std::vector<int>* order = nullptr);

/// Pre-terms: arbitrary (possibly redex-containing) lambda terms. They exist
/// so that callers can hand unnormalized input to normalize().
struct RawTerm {
  enum class Kind { Atom, BVar, App, Lam };
  Kind kind = Kind::Atom;
  Term atom;  // Var, Const or Nom
  int index = 0;
  Ty ty;  // Lam binder type
  std::string hint;
  std::shared_ptr<const RawTerm> fn, arg, body;

  static RawTerm of(Term atom);
  static RawTerm bv(int i);
  static RawTerm ap(RawTerm f, RawTerm a);
  static RawTerm abs(Ty ty, RawTerm body, std::string hint = "x");
};

/// Beta-normal form; throws TypeError on ill-typed applications.
Term normalize(const RawTerm& t, const std::vector<Ty>& ctx = {});
Ty raw_type_of(const RawTerm& t, const std::vector<Ty>& ctx = {});

}  // namespace nabla
