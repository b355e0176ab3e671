#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "nabla/term.hpp"

namespace nabla {

/// Built-in vocabulary of the specification-logic encoding.
namespace builtin {

Ty olist();  // contexts: lists of specification atoms
Ty goal();   // specification goal formulas
Ty nat();    // heights
Ty o();      // specification atoms

Term nil();
Term cons(Term head, Term tail);
Term atm(Term atom);
Term tt();
Term conj(Term a, Term b);
Term imp(Term a, Term b);
/// Goal-level universal quantifier at binder type ty; body : ty -> g.
Term pi(const Ty& ty, Term body);
Term zero();
Term succ(Term n);

bool is_pi_name(const std::string& name);
bool is_nil(const Term& t);
/// Decomposes `h :: tl`.
bool as_cons(const Term& t, Term& head, Term& tail);

inline const char* kCons = "::";
inline const char* kAtm = "atm";
inline const char* kAnd = "and";
inline const char* kImp = "imp";

}  // namespace builtin

/// Declared kinds and constants. Constants of result type prop are predicates.
class Signature {
 public:
  Signature();

  void add_kind(const std::string& name);
  bool has_kind(const std::string& name) const { return kinds_.count(name) > 0; }
  /// Throws DefinitionError on redeclaration with a different type.
  void add_const(const std::string& name, const Ty& ty);
  std::optional<Ty> lookup(const std::string& name) const;
  bool has_const(const std::string& name) const { return consts_.count(name) > 0; }
  /// All base types referenced by ty are declared.
  void check_type(const Ty& ty) const;

  const std::map<std::string, Ty>& constants() const { return consts_; }
  const std::set<std::string>& kinds() const { return kinds_; }

 private:
  std::set<std::string> kinds_;
  std::map<std::string, Ty> consts_;
};

}  // namespace nabla
