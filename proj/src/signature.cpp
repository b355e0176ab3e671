#include "nabla/signature.hpp"

#include "nabla/error.hpp"

namespace nabla {
namespace builtin {

Ty olist() { return Ty::base("olist"); }
Ty goal() { return Ty::base("g"); }
Ty nat() { return Ty::base("nt"); }
Ty o() { return Ty::base("o"); }

Term nil() { return constant("nil", olist()); }
Term cons(Term head, Term tail) {
  return app(constant(kCons, Ty::arrows({o(), olist()}, olist())), {std::move(head), std::move(tail)});
}
Term atm(Term atom) { return app(constant(kAtm, Ty::arrow(o(), goal())), std::move(atom)); }
Term tt() { return constant("tt", goal()); }
Term conj(Term a, Term b) {
  return app(constant(kAnd, Ty::arrows({goal(), goal()}, goal())), {std::move(a), std::move(b)});
}
Term imp(Term a, Term b) {
  return app(constant(kImp, Ty::arrows({o(), goal()}, goal())), {std::move(a), std::move(b)});
}
Term pi(const Ty& ty, Term body) {
  Ty fty = Ty::arrow(Ty::arrow(ty, goal()), goal());
  return app(constant("pi{" + ty.str() + "}", fty), std::move(body));
}
Term zero() { return constant("z", nat()); }
Term succ(Term n) { return app(constant("s", Ty::arrow(nat(), nat())), std::move(n)); }

bool is_pi_name(const std::string& name) { return name.rfind("pi{", 0) == 0; }

bool is_nil(const Term& t) { return t.is_const() && t.const_name() == "nil"; }

bool as_cons(const Term& t, Term& head, Term& tail) {
  if (!t.is_app() || !t.head().is_const() || t.head().const_name() != kCons || t.args().size() != 2) return false;
  head = t.args()[0];
  tail = t.args()[1];
  return true;
}

}  // namespace builtin

Signature::Signature() {
  for (const char* k : {"o", "olist", "g", "nt", "prop"}) kinds_.insert(k);
  using namespace builtin;
  consts_["nil"] = olist();
  consts_[kCons] = Ty::arrows({o(), olist()}, olist());
  consts_[kAtm] = Ty::arrow(o(), goal());
  consts_["tt"] = goal();
  consts_[kAnd] = Ty::arrows({goal(), goal()}, goal());
  consts_[kImp] = Ty::arrows({o(), goal()}, goal());
  consts_["z"] = nat();
  consts_["s"] = Ty::arrow(nat(), nat());
}

void Signature::add_kind(const std::string& name) { kinds_.insert(name); }

void Signature::add_const(const std::string& name, const Ty& ty) {
  check_type(ty);
  auto it = consts_.find(name);
  if (it != consts_.end()) {
    if (it->second != ty) throw DefinitionError("constant " + name + " already declared at type " + it->second.str());
    return;
  }
  consts_[name] = ty;
}

std::optional<Ty> Signature::lookup(const std::string& name) const {
  auto it = consts_.find(name);
  if (it == consts_.end()) return std::nullopt;
  return it->second;
}

void Signature::check_type(const Ty& ty) const {
  if (ty.is_arrow()) {
    check_type(ty.dom());
    check_type(ty.cod());
  } else if (ty.is_base() && !kinds_.count(ty.name())) {
    throw DefinitionError("unknown type " + ty.name());
  }
}

}  // namespace nabla
