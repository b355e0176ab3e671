#include "nabla/elaborate.hpp"

#include <cctype>

#include "nabla/error.hpp"

namespace nabla {

namespace {

bool nominal_name(const std::string& s, int& index) {
  if (s.size() < 2 || s[0] != 'n') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  index = std::stoi(s.substr(1));
  return index > 0;
}

bool implicit_name(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

std::string at(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

}  // namespace

struct Elaborator::Impl {
  const Signature& sig;
  std::map<std::string, Term> fixed;
  std::optional<VarTag> implicit;

  std::vector<Ty> metas;  // solution per meta id; invalid while unsolved

  struct Slot {
    std::string name;
    Ty ty;
    VarTag tag;
    std::optional<VarInfo> made;
  };
  std::vector<Slot> slots;
  std::map<std::string, int> declared_slots, implicit_slots;
  std::vector<int> implicit_order;
  std::map<std::pair<const PFormula*, int>, int> binder_slots;
  std::map<const PExpr*, Ty> binder_ty, nom_ty, leaf_ty;
  bool solved = false;

  struct Entry {
    std::string name;
    bool local;
    int slot;   // when !local
    int level;  // when local: number of enclosing locals
    Ty ty;
  };
  std::vector<Entry> scope;
  int locals = 0;

  explicit Impl(const Signature& s) : sig(s) {}

  // ------------------------------------------------------------ type metas

  Ty fresh_meta() {
    metas.emplace_back();
    return Ty::meta(static_cast<int>(metas.size()) - 1);
  }

  Ty shallow(Ty t) const {
    while (t.is_meta() && metas[t.meta_id()].valid()) t = metas[t.meta_id()];
    return t;
  }

  Ty resolve(const Ty& t) const {
    Ty s = shallow(t);
    if (s.is_arrow()) return Ty::arrow(resolve(s.dom()), resolve(s.cod()));
    return s;
  }

  bool occurs(int id, const Ty& t) const {
    Ty s = shallow(t);
    if (s.is_meta()) return s.meta_id() == id;
    if (s.is_arrow()) return occurs(id, s.dom()) || occurs(id, s.cod());
    return false;
  }

  void unify(const Ty& a0, const Ty& b0, int line, const std::string& what) {
    Ty a = shallow(a0), b = shallow(b0);
    if (a.is_meta() && b.is_meta() && a.meta_id() == b.meta_id()) return;
    if (a.is_meta()) {
      if (occurs(a.meta_id(), b)) throw TypeError(at(line) + "cyclic type for " + what);
      metas[a.meta_id()] = b;
      return;
    }
    if (b.is_meta()) return unify(b, a, line, what);
    if (a.is_base() && b.is_base()) {
      if (a.name() != b.name())
        throw TypeError(at(line) + "type mismatch for " + what + ": " + resolve(a0).str() + " vs " + resolve(b0).str());
      return;
    }
    if (a.is_arrow() && b.is_arrow()) {
      unify(a.dom(), b.dom(), line, what);
      unify(a.cod(), b.cod(), line, what);
      return;
    }
    throw TypeError(at(line) + "type mismatch for " + what + ": " + resolve(a0).str() + " vs " + resolve(b0).str());
  }

  Ty final_ty(const Ty& t, const std::string& what, int line) const {
    Ty r = resolve(t);
    std::function<bool(const Ty&)> has_meta = [&](const Ty& x) {
      return x.is_meta() || (x.is_arrow() && (has_meta(x.dom()) || has_meta(x.cod())));
    };
    if (has_meta(r)) throw TypeError(at(line) + "cannot infer the type of " + what);
    return r;
  }

  int new_slot(const std::string& name, Ty ty, VarTag tag) {
    slots.push_back(Slot{name, std::move(ty), tag, std::nullopt});
    return static_cast<int>(slots.size()) - 1;
  }

  VarInfo slot_var(int i, int line) {
    Slot& s = slots[i];
    if (!s.made) {
      Ty ty = final_ty(s.ty, s.name, line);
      s.made = fresh_var(s.name, ty, s.tag);
    }
    return *s.made;
  }

  // ------------------------------------------------------------ name lookup

  enum class Res { Local, Slot, Fixed, Const, Nominal, Implicit };
  struct Found {
    Res res;
    const Entry* entry = nullptr;
    int slot = -1;
    Ty ty;
    int nom = 0;
  };

  Found lookup(const PExpr& e, bool create) {
    const std::string& n = e.name;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->name != n) continue;
      if (it->local) return {Res::Local, &*it, -1, it->ty};
      return {Res::Slot, &*it, it->slot, slots[it->slot].ty};
    }
    if (auto d = declared_slots.find(n); d != declared_slots.end())
      return {Res::Slot, nullptr, d->second, slots[d->second].ty};
    if (auto f = fixed.find(n); f != fixed.end()) return {Res::Fixed, nullptr, -1, type_of(f->second)};
    if (auto c = sig.lookup(n)) return {Res::Const, nullptr, -1, *c};
    int idx = 0;
    if (nominal_name(n, idx)) {
      auto it = nom_ty.find(&e);
      Ty t;
      if (it != nom_ty.end()) {
        t = it->second;
      } else {
        if (!create) throw TypeError(at(e.line) + "internal: unregistered nominal " + n);
        t = fresh_meta();
        nom_ty[&e] = t;
      }
      Found f{Res::Nominal, nullptr, -1, t};
      f.nom = idx;
      return f;
    }
    if (auto im = implicit_slots.find(n); im != implicit_slots.end())
      return {Res::Implicit, nullptr, im->second, slots[im->second].ty};
    if (implicit && implicit_name(n) && create) {
      int s = new_slot(n, fresh_meta(), *implicit);
      implicit_slots[n] = s;
      implicit_order.push_back(s);
      return {Res::Implicit, nullptr, s, slots[s].ty};
    }
    throw TypeError(at(e.line) + "unknown identifier " + n);
  }

  // ------------------------------------------------------------ inference

  Ty infer_term(const PExpr& e) {
    switch (e.kind) {
      case PExpr::Kind::Ident: return lookup(e, true).ty;
      case PExpr::Kind::App: {
        Ty ft = infer_term(e.kids[0]);
        for (std::size_t i = 1; i < e.kids.size(); ++i) {
          Ty at_ = infer_term(e.kids[i]);
          Ty res = fresh_meta();
          unify(ft, Ty::arrow(at_, res), e.line, "application of " + describe(e.kids[0]));
          ft = res;
        }
        return ft;
      }
      case PExpr::Kind::Lam: {
        Ty m = fresh_meta();
        binder_ty[&e] = m;
        scope.push_back(Entry{e.name, true, -1, locals++, m});
        Ty bt = infer_term(e.kids[0]);
        scope.pop_back();
        --locals;
        return Ty::arrow(m, bt);
      }
      case PExpr::Kind::Cons: {
        unify(infer_term(e.kids[0]), builtin::o(), e.line, "list element");
        unify(infer_term(e.kids[1]), builtin::olist(), e.line, "list tail");
        return builtin::olist();
      }
      case PExpr::Kind::GoalAnd:
      case PExpr::Kind::GoalImp:
      case PExpr::Kind::GoalPi:
      case PExpr::Kind::Paren: infer_goal(e); return builtin::goal();
    }
    return Ty();
  }

  static const PExpr& strip(const PExpr& e) { return e.kind == PExpr::Kind::Paren ? strip(e.kids[0]) : e; }

  void infer_goal(const PExpr& e) {
    switch (e.kind) {
      case PExpr::Kind::GoalAnd:
        infer_goal(e.kids[0]);
        infer_goal(e.kids[1]);
        return;
      case PExpr::Kind::GoalImp:
        unify(infer_term(strip(e.kids[0])), builtin::o(), e.line, "hypothesis of =>");
        infer_goal(e.kids[1]);
        return;
      case PExpr::Kind::GoalPi: {
        Ty m = fresh_meta();
        binder_ty[&e] = m;
        scope.push_back(Entry{e.name, true, -1, locals++, m});
        infer_goal(e.kids[0]);
        scope.pop_back();
        --locals;
        return;
      }
      case PExpr::Kind::Paren: infer_goal(e.kids[0]); return;
      default: leaf_ty[&e] = infer_term(e); return;
    }
  }

  void infer_formula(const PFormula& f) {
    using K = PFormula::Kind;
    switch (f.kind) {
      case K::True:
      case K::False: return;
      case K::And:
      case K::Or:
      case K::Imp:
        infer_formula(f.kids[0]);
        infer_formula(f.kids[1]);
        return;
      case K::Forall:
      case K::Exists:
      case K::Nabla: {
        std::size_t base = scope.size();
        for (std::size_t i = 0; i < f.binders.size(); ++i) {
          const PBinder& b = f.binders[i];
          int s = new_slot(b.name, b.ty ? *b.ty : fresh_meta(), VarTag::Bound);
          if (b.ty) sig.check_type(*b.ty);
          binder_slots[{&f, static_cast<int>(i)}] = s;
          scope.push_back(Entry{b.name, false, s, 0, slots[s].ty});
        }
        infer_formula(f.kids[0]);
        scope.resize(base);
        return;
      }
      case K::Eq: unify(infer_term(f.t1), infer_term(f.t2), f.line, "equation"); return;
      case K::Atom: unify(infer_term(f.t1), Ty::prop(), f.line, describe(f.t1)); return;
      case K::Obj:
        if (f.has_ctx) unify(infer_term(f.t1), builtin::olist(), f.line, "context");
        infer_goal(f.t2);
        return;
    }
  }

  static std::string describe(const PExpr& e) {
    const PExpr& h = e.kind == PExpr::Kind::App ? e.kids[0] : e;
    return h.kind == PExpr::Kind::Ident ? h.name : "term";
  }

  void solve() {
    for (auto& [e, t] : leaf_ty)
      if (shallow(t).is_meta()) unify(t, builtin::o(), e->line, "goal");
    solved = true;
  }

  // ------------------------------------------------------------ building

  RawTerm build_term(const PExpr& e) {
    switch (e.kind) {
      case PExpr::Kind::Ident: {
        Found f = lookup(e, false);
        switch (f.res) {
          case Res::Local: return RawTerm::bv(locals - 1 - f.entry->level);
          case Res::Slot:
          case Res::Implicit: return RawTerm::of(var(slot_var(f.slot, e.line)));
          case Res::Fixed: return RawTerm::of(fixed.at(e.name));
          case Res::Const: return RawTerm::of(constant(e.name, f.ty));
          case Res::Nominal: return RawTerm::of(nominal(Nom{f.nom, final_ty(f.ty, e.name, e.line)}));
        }
        break;
      }
      case PExpr::Kind::App: {
        RawTerm r = build_term(e.kids[0]);
        for (std::size_t i = 1; i < e.kids.size(); ++i) r = RawTerm::ap(std::move(r), build_term(e.kids[i]));
        return r;
      }
      case PExpr::Kind::Lam: {
        Ty t = final_ty(binder_ty.at(&e), e.name, e.line);
        scope.push_back(Entry{e.name, true, -1, locals++, t});
        RawTerm body = build_term(e.kids[0]);
        scope.pop_back();
        --locals;
        return RawTerm::abs(t, std::move(body), e.name);
      }
      case PExpr::Kind::Cons: {
        RawTerm c = RawTerm::of(constant(builtin::kCons, Ty::arrows({builtin::o(), builtin::olist()}, builtin::olist())));
        return RawTerm::ap(RawTerm::ap(c, build_term(e.kids[0])), build_term(e.kids[1]));
      }
      default: return build_goal(e);
    }
    return RawTerm();
  }

  RawTerm build_goal(const PExpr& e) {
    using namespace builtin;
    switch (e.kind) {
      case PExpr::Kind::GoalAnd: {
        RawTerm c = RawTerm::of(constant(kAnd, Ty::arrows({builtin::goal(), builtin::goal()}, builtin::goal())));
        return RawTerm::ap(RawTerm::ap(c, build_goal(e.kids[0])), build_goal(e.kids[1]));
      }
      case PExpr::Kind::GoalImp: {
        RawTerm c = RawTerm::of(constant(kImp, Ty::arrows({o(), builtin::goal()}, builtin::goal())));
        return RawTerm::ap(RawTerm::ap(c, build_term(strip(e.kids[0]))), build_goal(e.kids[1]));
      }
      case PExpr::Kind::GoalPi: {
        Ty t = final_ty(binder_ty.at(&e), e.name, e.line);
        if (t.contains_base("prop") || t.contains_base("g"))
          throw TypeError(at(e.line) + "cannot quantify over type " + t.str());
        scope.push_back(Entry{e.name, true, -1, locals++, t});
        RawTerm body = build_goal(e.kids[0]);
        scope.pop_back();
        --locals;
        RawTerm c = RawTerm::of(constant("pi{" + t.str() + "}", Ty::arrow(Ty::arrow(t, builtin::goal()), builtin::goal())));
        return RawTerm::ap(c, RawTerm::abs(t, std::move(body), e.name));
      }
      case PExpr::Kind::Paren: return build_goal(e.kids[0]);
      default: {
        Ty t = resolve(leaf_ty.at(&e));
        RawTerm r = build_term(e);
        if (t == o()) return RawTerm::ap(RawTerm::of(constant(kAtm, Ty::arrow(o(), builtin::goal()))), std::move(r));
        if (t == builtin::goal()) return r;
        throw TypeError(at(e.line) + "expected a specification formula, got type " + t.str());
      }
    }
  }

  Term finish(const RawTerm& r) { return normalize(r); }

  Formula build_formula(const PFormula& f) {
    using K = PFormula::Kind;
    switch (f.kind) {
      case K::True: return f_true();
      case K::False: return f_false();
      case K::And: return f_and(build_formula(f.kids[0]), build_formula(f.kids[1]));
      case K::Or: return f_or(build_formula(f.kids[0]), build_formula(f.kids[1]));
      case K::Imp: return f_imp(build_formula(f.kids[0]), build_formula(f.kids[1]));
      case K::Forall:
      case K::Exists:
      case K::Nabla: {
        std::size_t base = scope.size();
        std::vector<VarInfo> bs;
        for (std::size_t i = 0; i < f.binders.size(); ++i) {
          int s = binder_slots.at({&f, static_cast<int>(i)});
          VarInfo v = slot_var(s, f.line);
          if (v.ty.contains_base("prop")) throw TypeError(at(f.line) + "cannot quantify over type " + v.ty.str());
          bs.push_back(v);
          scope.push_back(Entry{v.name, false, s, 0, v.ty});
        }
        Formula body = build_formula(f.kids[0]);
        scope.resize(base);
        Formula::Kind q = f.kind == K::Forall ? Formula::Kind::Forall
                          : f.kind == K::Exists ? Formula::Kind::Exists
                                                : Formula::Kind::Nabla;
        return f_quant(q, std::move(bs), std::move(body));
      }
      case K::Eq: return f_eq(finish(build_term(f.t1)), finish(build_term(f.t2)));
      case K::Atom: return f_atom(finish(build_term(f.t1)), f.restriction);
      case K::Obj: {
        Term ctx = f.has_ctx ? finish(build_term(f.t1)) : builtin::nil();
        return f_obj(ctx, finish(build_goal(f.t2)), f.restriction);
      }
    }
    return Formula();
  }

  void need_solved() const {
    if (!solved) throw Error("elaborator: solve() not called");
  }
};

Elaborator::Elaborator(const Signature& sig) : impl_(std::make_shared<Impl>(sig)) {}

void Elaborator::bind(const std::string& name, const Term& t) { impl_->fixed[name] = t; }
void Elaborator::allow_implicit(VarTag tag) { impl_->implicit = tag; }

void Elaborator::declare(const std::string& name, std::optional<Ty> ty) {
  Ty t = ty ? *ty : impl_->fresh_meta();
  impl_->declared_slots[name] = impl_->new_slot(name, t, VarTag::Bound);
}

void Elaborator::add_term(const PExpr& e, std::optional<Ty> expected) {
  Ty t = impl_->infer_term(e);
  if (expected) impl_->unify(t, *expected, e.line, Impl::describe(e));
}
void Elaborator::add_goal(const PExpr& e) { impl_->infer_goal(e); }
void Elaborator::add_formula(const PFormula& f) { impl_->infer_formula(f); }
void Elaborator::solve() { impl_->solve(); }

Term Elaborator::term(const PExpr& e) {
  impl_->need_solved();
  return impl_->finish(impl_->build_term(e));
}
Term Elaborator::goal(const PExpr& e) {
  impl_->need_solved();
  return impl_->finish(impl_->build_goal(e));
}
Formula Elaborator::formula(const PFormula& f) {
  impl_->need_solved();
  return impl_->build_formula(f);
}

VarInfo Elaborator::declared(const std::string& name) {
  return impl_->slot_var(impl_->declared_slots.at(name), 0);
}

std::vector<VarInfo> Elaborator::implicits() {
  std::vector<VarInfo> out;
  for (int s : impl_->implicit_order) out.push_back(impl_->slot_var(s, 0));
  return out;
}

Term Elaborator::term_in(const Signature& sig, const PExpr& e, const std::map<std::string, Term>& vars,
                         std::optional<Ty> expected) {
  Elaborator el(sig);
  for (auto& [n, t] : vars) el.bind(n, t);
  el.add_term(e, expected);
  el.solve();
  return el.term(e);
}

Formula Elaborator::formula_in(const Signature& sig, const PFormula& f, const std::map<std::string, Term>& vars) {
  Elaborator el(sig);
  for (auto& [n, t] : vars) el.bind(n, t);
  el.add_formula(f);
  el.solve();
  return el.formula(f);
}

std::vector<Clause> elaborate_clauses(const Signature& sig, const std::vector<PClause>& clauses) {
  std::vector<Clause> out;
  for (const PClause& pc : clauses) {
    Elaborator el(sig);
    el.allow_implicit(VarTag::Bound);
    for (const std::string& z : pc.nablas) el.declare(z);
    el.add_term(pc.head, Ty::prop());
    if (pc.body) el.add_formula(*pc.body);
    el.solve();
    Clause c;
    c.line = pc.line;
    c.head = el.term(pc.head);
    c.body = pc.body ? el.formula(*pc.body) : f_true();
    for (const std::string& z : pc.nablas) c.nablas.push_back(el.declared(z));
    c.vars = el.implicits();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace nabla
