#include "nabla/formula.hpp"

#include "nabla/error.hpp"

namespace nabla {

std::string Restriction::str() const {
  if (kind == Kind::None) return "";
  return std::string(static_cast<std::size_t>(level), kind == Kind::Smaller ? '*' : '@');
}

struct Formula::Node {
  Kind kind;
  Formula a, b;
  std::vector<VarInfo> binders;
  Term t1, t2;
  Restriction r;
};

Formula make_formula(Formula::Node n) { return Formula(std::make_shared<const Formula::Node>(std::move(n))); }

Formula::Kind Formula::kind() const { return node_->kind; }
const Formula& Formula::left() const { return node_->a; }
const Formula& Formula::right() const { return node_->b; }
const std::vector<VarInfo>& Formula::binders() const { return node_->binders; }
const Formula& Formula::body() const { return node_->a; }
const Term& Formula::lhs() const { return node_->t1; }
const Term& Formula::rhs() const { return node_->t2; }
const Term& Formula::atom() const { return node_->t1; }
const Term& Formula::context() const { return node_->t1; }
const Term& Formula::goal() const { return node_->t2; }
const Restriction& Formula::restriction() const { return node_->r; }

Formula f_true() { return make_formula({Formula::Kind::True, {}, {}, {}, {}, {}, {}}); }
Formula f_false() { return make_formula({Formula::Kind::False, {}, {}, {}, {}, {}, {}}); }
Formula f_and(Formula a, Formula b) { return make_formula({Formula::Kind::And, std::move(a), std::move(b), {}, {}, {}, {}}); }
Formula f_or(Formula a, Formula b) { return make_formula({Formula::Kind::Or, std::move(a), std::move(b), {}, {}, {}, {}}); }
Formula f_imp(Formula a, Formula b) { return make_formula({Formula::Kind::Imp, std::move(a), std::move(b), {}, {}, {}, {}}); }

Formula f_quant(Formula::Kind q, std::vector<VarInfo> binders, Formula body) {
  if (binders.empty()) return body;
  return make_formula({q, std::move(body), {}, std::move(binders), {}, {}, {}});
}

Formula f_eq(Term l, Term r) { return make_formula({Formula::Kind::Eq, {}, {}, {}, std::move(l), std::move(r), {}}); }
Formula f_atom(Term a, Restriction r) { return make_formula({Formula::Kind::Atom, {}, {}, {}, std::move(a), {}, r}); }
Formula f_obj(Term ctx, Term goal, Restriction r) {
  return make_formula({Formula::Kind::Obj, {}, {}, {}, std::move(ctx), std::move(goal), r});
}

Formula with_restriction(const Formula& f, Restriction r) {
  switch (f.kind()) {
    case Formula::Kind::Atom: return f_atom(f.atom(), r);
    case Formula::Kind::Obj: return f_obj(f.context(), f.goal(), r);
    default: return f;
  }
}

Formula map_terms(const Formula& f, const std::function<Term(const Term&)>& fn) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False: return f;
    case K::And: return f_and(map_terms(f.left(), fn), map_terms(f.right(), fn));
    case K::Or: return f_or(map_terms(f.left(), fn), map_terms(f.right(), fn));
    case K::Imp: return f_imp(map_terms(f.left(), fn), map_terms(f.right(), fn));
    case K::Forall:
    case K::Exists:
    case K::Nabla: return f_quant(f.kind(), f.binders(), map_terms(f.body(), fn));
    case K::Eq: return f_eq(fn(f.lhs()), fn(f.rhs()));
    case K::Atom: return f_atom(fn(f.atom()), f.restriction());
    case K::Obj: return f_obj(fn(f.context()), fn(f.goal()), f.restriction());
  }
  return f;
}

Formula map_restrictions(const Formula& f, const std::function<Restriction(const Formula&)>& fn) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Eq: return f;
    case K::And: return f_and(map_restrictions(f.left(), fn), map_restrictions(f.right(), fn));
    case K::Or: return f_or(map_restrictions(f.left(), fn), map_restrictions(f.right(), fn));
    case K::Imp: return f_imp(map_restrictions(f.left(), fn), map_restrictions(f.right(), fn));
    case K::Forall:
    case K::Exists:
    case K::Nabla: return f_quant(f.kind(), f.binders(), map_restrictions(f.body(), fn));
    case K::Atom:
    case K::Obj: return with_restriction(f, fn(f));
  }
  return f;
}

Formula subst(const Formula& f, const Subst& s) {
  if (s.empty()) return f;
  return map_terms(f, [&](const Term& t) { return apply_subst(t, s); });
}

Formula apply_perm(const Permutation& p, const Formula& f) {
  if (p.is_identity()) return f;
  return map_terms(f, [&](const Term& t) { return apply_perm(p, t); });
}

Formula replace_nom(const Formula& f, const Nom& n, const Term& by) {
  return map_terms(f, [&](const Term& t) { return replace_nom(t, n, by); });
}

namespace {

void visit_terms(const Formula& f, const std::function<void(const Term&)>& fn) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False: return;
    case K::And:
    case K::Or:
    case K::Imp:
      visit_terms(f.left(), fn);
      visit_terms(f.right(), fn);
      return;
    case K::Forall:
    case K::Exists:
    case K::Nabla: visit_terms(f.body(), fn); return;
    case K::Eq:
      fn(f.lhs());
      fn(f.rhs());
      return;
    case K::Atom: fn(f.atom()); return;
    case K::Obj:
      fn(f.context());
      fn(f.goal());
      return;
  }
}

}  // namespace

void collect_support(const Formula& f, NomSet& out) {
  visit_terms(f, [&](const Term& t) { collect_support(t, out); });
}

NomSet support(const Formula& f) {
  NomSet s;
  collect_support(f, s);
  return s;
}

void collect_vars(const Formula& f, std::vector<VarInfo>& out) {
  std::vector<VarInfo> all;
  visit_terms(f, [&](const Term& t) { collect_vars(t, all); });
  for (const auto& v : all) {
    if (v.tag == VarTag::Bound) continue;
    bool seen = false;
    for (const auto& o : out) seen = seen || o.id == v.id;
    if (!seen) out.push_back(v);
  }
}

bool occurs_var(const Formula& f, std::uint64_t id) {
  bool found = false;
  visit_terms(f, [&](const Term& t) { found = found || occurs_var(t, id); });
  return found;
}

Formula instantiate(const Formula& f, const std::vector<Term>& terms) {
  if (!f.is_quantifier()) throw Error("instantiate: not a quantifier");
  const auto& bs = f.binders();
  if (terms.size() > bs.size()) throw Error("instantiate: too many terms");
  Subst s;
  for (std::size_t i = 0; i < terms.size(); ++i) s[bs[i].id] = terms[i];
  std::vector<VarInfo> rest(bs.begin() + static_cast<long>(terms.size()), bs.end());
  return f_quant(f.kind(), rest, subst(f.body(), s));
}

bool alpha_equal(const Formula& a, const Formula& b, bool ignore_restrictions) {
  using K = Formula::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::True:
    case K::False: return true;
    case K::And:
    case K::Or:
    case K::Imp:
      return alpha_equal(a.left(), b.left(), ignore_restrictions) &&
             alpha_equal(a.right(), b.right(), ignore_restrictions);
    case K::Forall:
    case K::Exists:
    case K::Nabla: {
      if (a.binders().size() != b.binders().size()) return false;
      Subst s;
      for (std::size_t i = 0; i < a.binders().size(); ++i) {
        if (a.binders()[i].ty != b.binders()[i].ty) return false;
        s[b.binders()[i].id] = var(a.binders()[i]);
      }
      return alpha_equal(a.body(), subst(b.body(), s), ignore_restrictions);
    }
    case K::Eq: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case K::Atom:
      return a.atom() == b.atom() && (ignore_restrictions || a.restriction() == b.restriction());
    case K::Obj:
      return a.context() == b.context() && a.goal() == b.goal() &&
             (ignore_restrictions || a.restriction() == b.restriction());
  }
  return false;
}

}  // namespace nabla
