#include "nabla/kernel.hpp"

#include <algorithm>

#include "nabla/error.hpp"
#include "nabla/printer.hpp"
#include "nabla/signature.hpp"

namespace nabla {

namespace {

std::vector<Nom> as_vec(const NomSet& s) { return {s.begin(), s.end()}; }

std::vector<Nom> minus(const std::vector<Nom>& a, const std::vector<Nom>& b) {
  std::vector<Nom> out;
  for (const Nom& n : a)
    if (std::find(b.begin(), b.end(), n) == b.end()) out.push_back(n);
  return out;
}

/// h c̄ for a fresh variable h of the right type.
Term raised(const VarInfo& h, const std::vector<Nom>& over) {
  if (over.empty()) return var(h);
  std::vector<Term> args;
  for (const Nom& n : over) args.push_back(nominal(n));
  return app(var(h), args);
}

Ty raised_ty(const Ty& ty, const std::vector<Nom>& over) {
  std::vector<Ty> tys;
  for (const Nom& n : over) tys.push_back(n.ty);
  return Ty::arrows(tys, ty);
}

const Hyp& need_hyp(const Sequent& s, const std::string& h) {
  const Hyp* p = s.hyp(h);
  if (!p) throw TacticError("unknown hypothesis " + h);
  return *p;
}

/// Marks positive occurrences of predicates from `block_of`'s block as smaller.
Formula annotate_body(const Formula& f, const Definitions& defs, const std::string& pred, const Restriction& r,
                      bool pos = true) {
  if (r.is_none()) return f;
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::And: return f_and(annotate_body(f.left(), defs, pred, r, pos), annotate_body(f.right(), defs, pred, r, pos));
    case K::Or: return f_or(annotate_body(f.left(), defs, pred, r, pos), annotate_body(f.right(), defs, pred, r, pos));
    case K::Imp: return f_imp(f.left(), annotate_body(f.right(), defs, pred, r, pos));
    case K::Forall:
    case K::Exists:
    case K::Nabla: return f_quant(f.kind(), f.binders(), annotate_body(f.body(), defs, pred, r, pos));
    case K::Atom:
      if (pos && defs.same_block(pred, Definitions::pred_of(f.atom())))
        return with_restriction(f, Restriction::smaller(r.level));
      return f;
    default: return f;
  }
}

Restriction smaller_of(const Restriction& r) {
  return r.is_none() ? Restriction::none() : Restriction::smaller(r.level);
}

bool is_const_app(const Term& t, const std::string& name, std::size_t nargs) {
  return t.spine_head().is_const() && t.spine_head().const_name() == name && t.spine_args().size() == nargs;
}

/// Adds {L |- G} after the deterministic seq unfoldings for &, => and pi.
void add_obj_decomposed(Sequent& s, const KernelEnv& env, const Term& ctx, const Term& g, const Restriction& r) {
  using namespace builtin;
  if (is_const_app(g, kAnd, 2)) {
    add_obj_decomposed(s, env, ctx, g.args()[0], r);
    add_obj_decomposed(s, env, ctx, g.args()[1], r);
    return;
  }
  if (is_const_app(g, kImp, 2)) {
    add_obj_decomposed(s, env, cons(g.args()[0], ctx), g.args()[1], r);
    return;
  }
  if (g.is_app() && g.head().is_const() && is_pi_name(g.head().const_name()) && g.args().size() == 1) {
    const Term& body = g.args()[0];
    Ty ty = type_of(body).dom();
    // Like the nabla left rule, the nominal only avoids this judgment.
    NomSet avoid = support(ctx);
    collect_support(g, avoid);
    Nom c = env.fresh_nom(ty, avoid);
    add_obj_decomposed(s, env, ctx, app(body, nominal(c)), r);
    return;
  }
  if (g.is_const() && g.const_name() == "tt") return;
  s.add_hyp(f_obj(ctx, g, r));
}

}  // namespace

bool satisfies(const Restriction& have, const Restriction& need) {
  switch (need.kind) {
    case Restriction::Kind::None: return true;
    case Restriction::Kind::Smaller: return have.kind == Restriction::Kind::Smaller && have.level == need.level;
    case Restriction::Kind::Equal:
      return have.kind != Restriction::Kind::None && have.level == need.level;
  }
  return false;
}

// ------------------------------------------------------------------ right rules

std::vector<Sequent> rule_right(const Sequent& s, const KernelEnv& env, const std::optional<Term>& witness, int side) {
  using K = Formula::Kind;
  const Formula& g = s.goal;
  switch (g.kind()) {
    case K::True: return {};
    case K::And: {
      Sequent a = s, b = s;
      a.goal = g.left();
      b.goal = g.right();
      return {a, b};
    }
    case K::Or: {
      if (side != 1 && side != 2) throw TacticError("choose a side of the disjunction");
      Sequent a = s;
      a.goal = side == 1 ? g.left() : g.right();
      return {a};
    }
    case K::Imp: {
      Sequent a = s;
      a.add_hyp(g.left());
      a.goal = g.right();
      return {a};
    }
    case K::Forall: {
      Sequent a = s;
      std::vector<Nom> over = as_vec(support(g));
      std::vector<Term> ts;
      for (const VarInfo& b : g.binders()) ts.push_back(raised(a.new_var(b.name, raised_ty(b.ty, over)), over));
      a.goal = instantiate(g, ts);
      return {a};
    }
    case K::Nabla: {
      Sequent a = s;
      NomSet avoid = s.support();
      std::vector<Term> ts;
      for (const VarInfo& b : g.binders()) {
        Nom c = env.fresh_nom(b.ty, avoid);
        avoid.insert(c);
        ts.push_back(nominal(c));
      }
      a.goal = instantiate(g, ts);
      return {a};
    }
    case K::Exists: {
      if (!witness) throw TacticError("a witness is required");
      const VarInfo& b = g.binders()[0];
      Ty wt = type_of(*witness);
      if (wt != b.ty) throw TacticError("witness has type " + wt.str() + ", expected " + b.ty.str());
      Sequent a = s;
      a.goal = instantiate(g, {*witness});
      return {a};
    }
    default: throw TacticError("no right rule applies to " + print_formula(g));
  }
}

Sequent intros(const Sequent& s0, const KernelEnv& env, const std::vector<std::string>& names) {
  using K = Formula::Kind;
  Sequent s = s0;
  std::size_t next = 0;
  auto take = [&](const std::string& dflt) { return next < names.size() ? names[next++] : dflt; };
  while (true) {
    const Formula g = s.goal;
    if (g.is(K::Forall)) {
      std::vector<Nom> over = as_vec(support(g));
      std::vector<Term> ts;
      for (const VarInfo& b : g.binders()) ts.push_back(raised(s.new_var(take(b.name), raised_ty(b.ty, over)), over));
      s.goal = instantiate(g, ts);
    } else if (g.is(K::Nabla)) {
      NomSet avoid = s.support();
      std::vector<Term> ts;
      for (const VarInfo& b : g.binders()) {
        Nom c = env.fresh_nom(b.ty, avoid);
        avoid.insert(c);
        ts.push_back(nominal(c));
      }
      s.goal = instantiate(g, ts);
    } else if (g.is(K::Imp)) {
      if (next < names.size())
        s.add_named(names[next++], g.left());
      else
        s.add_hyp(g.left());
      s.goal = g.right();
    } else {
      break;
    }
  }
  return s;
}

// ------------------------------------------------------------------ left rules

void add_decomposed(Sequent& s, const KernelEnv& env, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return;
    case K::And:
      add_decomposed(s, env, f.left());
      add_decomposed(s, env, f.right());
      return;
    case K::Exists: {
      std::vector<Nom> over = as_vec(support(f));
      std::vector<Term> ts;
      for (const VarInfo& b : f.binders()) ts.push_back(raised(s.new_var(b.name, raised_ty(b.ty, over)), over));
      add_decomposed(s, env, instantiate(f, ts));
      return;
    }
    case K::Nabla: {
      // The nominal only has to avoid the support of the formula itself.
      NomSet avoid = support(f);
      std::vector<Term> ts;
      for (const VarInfo& b : f.binders()) {
        Nom c = env.fresh_nom(b.ty, avoid);
        avoid.insert(c);
        ts.push_back(nominal(c));
      }
      add_decomposed(s, env, instantiate(f, ts));
      return;
    }
    default: s.add_hyp(f); return;
  }
}

std::vector<Sequent> rule_left(const Sequent& s, const KernelEnv& env, const std::string& h, bool keep,
                               const std::optional<Term>& inst) {
  using K = Formula::Kind;
  const Formula f = need_hyp(s, h).f;
  switch (f.kind()) {
    case K::True:
    case K::And:
    case K::Exists:
    case K::Nabla: {
      Sequent a = s;
      if (!keep) a.remove_hyp(h);
      add_decomposed(a, env, f);
      return {a};
    }
    case K::Or: {
      Sequent a = s, b = s;
      if (!keep) {
        a.remove_hyp(h);
        b.remove_hyp(h);
      }
      add_decomposed(a, env, f.left());
      add_decomposed(b, env, f.right());
      return {a, b};
    }
    case K::False: return {};
    case K::Forall: {
      if (!inst) throw TacticError("instantiating a universal hypothesis needs a term");
      if (type_of(*inst) != f.binders()[0].ty) throw TacticError("instantiation term has the wrong type");
      Sequent a = s;
      if (!keep) a.remove_hyp(h);
      a.add_hyp(instantiate(f, {*inst}));
      a.refresh_vars();
      return {a};
    }
    case K::Imp: throw TacticError("use apply to eliminate an implication");
    case K::Eq: return eq_left(s, h, keep);
    case K::Atom: return def_left(s, env, h, keep);
    case K::Obj: return obj_left(s, env, h, keep);
  }
  return {};
}

bool rule_id(const Sequent& s, const std::string& h) {
  const Formula& f = need_hyp(s, h).f;
  const Formula& g = s.goal;
  if (f.kind() != g.kind()) return false;
  for (const Permutation& p : candidate_perms(support(f), support(g))) {
    Formula pf = apply_perm(p, f);
    if (!alpha_equal(pf, g, true)) continue;
    if ((g.is(Formula::Kind::Atom) || g.is(Formula::Kind::Obj)) && !satisfies(pf.restriction(), g.restriction()))
      continue;
    return true;
  }
  return false;
}

void raise_sequent(Sequent& s, const std::vector<Nom>& cs) {
  if (cs.empty()) return;
  Subst sub;
  for (const VarInfo& v : s.vars) {
    VarInfo w = fresh_var(v.name, raised_ty(v.ty, cs), v.tag, v.ts);
    sub[v.id] = raised(w, cs);
  }
  s.apply(sub);
}

std::vector<Sequent> def_left(const Sequent& s, const KernelEnv& env, const std::string& h, bool keep) {
  const Formula f = need_hyp(s, h).f;
  if (!f.is(Formula::Kind::Atom)) throw TacticError(h + " is not an atom");
  std::string pred = Definitions::pred_of(f.atom());
  const DefinedPred* d = env.defs ? env.defs->find(pred) : nullptr;
  if (!d) throw TacticError("cannot case on " + h + ": " + pred + " is not defined");
  const Restriction r = f.restriction();

  std::vector<Nom> a = as_vec(support(f));
  std::vector<Sequent> out;
  for (const Clause& c : d->clauses) {
    std::vector<Nom> fresh;
    NomSet avoid = s.support();
    for (const VarInfo& z : c.nablas) {
      Nom n = env.fresh_nom(z.ty, avoid);
      avoid.insert(n);
      fresh.push_back(n);
    }
    for (const std::vector<Nom>& sigma : nabla_assignments(c.nablas, a, fresh)) {
      std::vector<Nom> used;
      for (const Nom& n : sigma)
        if (std::find(fresh.begin(), fresh.end(), n) != fresh.end()) used.push_back(n);
      Sequent p = s;
      if (!keep) p.remove_hyp(h);
      // The hypothesis is carried along so that raising reaches it.
      Sequent carrier = p;
      carrier.hyps.push_back({"\x01", f});
      raise_sequent(carrier, used);
      Formula raised_f = carrier.hyp("\x01")->f;
      carrier.remove_hyp("\x01");

      ClauseInstance inst = instantiate_clause(c, minus(a, sigma), sigma, VarTag::Eigen);
      Unifier u(Unifier::Mode::Case);
      UnifyOutcome res = u.unify(inst.head, raised_f.atom());
      if (res == UnifyOutcome::NoSolution) continue;
      if (u.has_postponed())
        throw NonPatternError("case analysis on " + h + " needs unification outside the pattern fragment");
      carrier.apply(u, false);
      Formula body = u.resolve(annotate_body(inst.body, *env.defs, pred, r));
      add_decomposed(carrier, env, body);
      carrier.refresh_vars();
      out.push_back(std::move(carrier));
    }
  }
  return out;
}

std::optional<Sequent> def_right(const Sequent& s, const KernelEnv& env, int clause) {
  const Formula& g = s.goal;
  if (!g.is(Formula::Kind::Atom)) throw TacticError("goal is not an atom");
  std::string pred = Definitions::pred_of(g.atom());
  const DefinedPred* d = env.defs ? env.defs->find(pred) : nullptr;
  if (!d) throw TacticError(pred + " is not defined");
  if (clause >= static_cast<int>(d->clauses.size())) throw TacticError("no such clause");
  std::vector<Nom> a = as_vec(support(g));
  for (int i = 0; i < static_cast<int>(d->clauses.size()); ++i) {
    if (clause >= 0 && i != clause) continue;
    const Clause& c = d->clauses[i];
    for (const std::vector<Nom>& sigma : nabla_assignments(c.nablas, a, {})) {
      ClauseInstance inst = instantiate_clause(c, minus(a, sigma), sigma, VarTag::Logic);
      Unifier u(Unifier::Mode::Search);
      if (u.unify(inst.head, g.atom()) != UnifyOutcome::Ok || u.has_postponed()) continue;
      Formula body = u.resolve(inst.body);
      std::vector<VarInfo> fv;
      collect_vars(body, fv);
      if (std::any_of(fv.begin(), fv.end(), [](const VarInfo& v) { return v.tag == VarTag::Logic; }))
        throw TacticError("unfolding leaves uninstantiated variables; use search");
      Sequent p = s;
      p.goal = body;
      p.refresh_vars();
      return p;
    }
  }
  return std::nullopt;
}

std::vector<Sequent> eq_left(const Sequent& s, const std::string& h, bool) {
  const Formula f = need_hyp(s, h).f;
  if (!f.is(Formula::Kind::Eq)) throw TacticError(h + " is not an equation");
  Unifier u(Unifier::Mode::Case);
  if (u.unify(f.lhs(), f.rhs()) == UnifyOutcome::NoSolution) return {};
  if (u.has_postponed()) throw NonPatternError("equation " + h + " is outside the pattern fragment");
  Sequent p = s;
  p.remove_hyp(h);
  p.apply(u);
  return {p};
}

bool eq_right(const Sequent& s) {
  if (!s.goal.is(Formula::Kind::Eq)) return false;
  return eta_reduce(s.goal.lhs()) == eta_reduce(s.goal.rhs());
}

std::vector<Sequent> obj_left(const Sequent& s, const KernelEnv& env, const std::string& h, bool keep) {
  using namespace builtin;
  const Formula f = need_hyp(s, h).f;
  if (!f.is(Formula::Kind::Obj)) throw TacticError(h + " is not a specification judgment");
  const Term ctx = f.context();
  const Term g = f.goal();
  const Restriction r = smaller_of(f.restriction());
  Sequent base = s;
  if (!keep) base.remove_hyp(h);

  if (!is_const_app(g, kAtm, 1)) {
    if (g.spine_head().is_var()) throw TacticError("cannot case on a judgment whose goal is unknown");
    Sequent p = base;
    add_obj_decomposed(p, env, ctx, g, r);
    p.refresh_vars();
    return {p};
  }
  const Term atom = g.args()[0];
  std::vector<Sequent> out;
  if (!is_nil(ctx)) {
    const DefinedPred* member = env.defs ? env.defs->find("member") : nullptr;
    if (!member) throw TacticError("the specification logic is not installed");
    Sequent p = base;
    p.add_hyp(f_atom(app(constant("member", member->ty), {atom, ctx})));
    out.push_back(p);
  }
  const DefinedPred* prog = env.defs ? env.defs->find("prog") : nullptr;
  if (!prog) return out;
  NomSet over_set = support(atom);
  collect_support(ctx, over_set);
  std::vector<Nom> over = as_vec(over_set);
  for (const Clause& c : prog->clauses) {
    ClauseInstance inst = instantiate_clause(c, over, {}, VarTag::Eigen);
    const Term& hd = inst.head.args()[0];
    const Term& bd = inst.head.args()[1];
    Unifier u(Unifier::Mode::Case);
    if (u.unify(hd, atom) == UnifyOutcome::NoSolution) continue;
    if (u.has_postponed())
      throw NonPatternError("case analysis on " + h + " needs unification outside the pattern fragment");
    Sequent p = base;
    p.apply(u, false);
    add_obj_decomposed(p, env, u.resolve(ctx), u.resolve(bd), r);
    p.refresh_vars();
    out.push_back(std::move(p));
  }
  return out;
}

// ------------------------------------------------------------------ induction

Sequent nat_induct(const Sequent& s, int pos) {
  using K = Formula::Kind;
  // Peel the quantifier prefix, then find the premise.
  std::function<Formula(const Formula&, const Restriction&, int)> mark = [&](const Formula& f, const Restriction& r,
                                                                             int i) -> Formula {
    if (f.is_quantifier() && f.kind() != K::Exists) return f_quant(f.kind(), f.binders(), mark(f.body(), r, i));
    if (!f.is(K::Imp)) throw TacticError("induction: the goal has fewer than " + std::to_string(pos) + " premises");
    if (i == 1) {
      const Formula& p = f.left();
      if (p.is(K::Atom) || p.is(K::Obj)) return f_imp(with_restriction(p, r), f.right());
      throw TacticError("induction: premise " + std::to_string(pos) + " is not an atom or judgment");
    }
    return f_imp(f.left(), mark(f.right(), r, i - 1));
  };
  if (pos < 1) throw TacticError("induction: positions start at 1");
  Sequent out = s;
  int level = s.ind_level + 1;
  Formula ih = mark(s.goal, Restriction::smaller(level), pos);
  out.goal = mark(s.goal, Restriction::equal(level), pos);
  out.ind_level = level;
  std::string name = s.next_ih == 0 ? "IH" : "IH" + std::to_string(s.next_ih);
  while (out.hyp(name)) name += "'";
  out.next_ih = s.next_ih + 1;
  out.hyps.push_back({name, ih});
  return out;
}

// ------------------------------------------------------------------ formula unification

bool unify_formula(Unifier& u, const Formula& p0, const Formula& t0) {
  using K = Formula::Kind;
  Formula p = u.resolve(p0), t = u.resolve(t0);
  if (p.kind() != t.kind()) return false;
  switch (p.kind()) {
    case K::True:
    case K::False: return true;
    case K::And:
    case K::Or:
    case K::Imp: return unify_formula(u, p.left(), t.left()) && unify_formula(u, p.right(), t.right());
    case K::Forall:
    case K::Exists:
    case K::Nabla: {
      if (p.binders().size() != t.binders().size()) return false;
      std::vector<Term> cs;
      for (std::size_t i = 0; i < p.binders().size(); ++i) {
        if (p.binders()[i].ty != t.binders()[i].ty) return false;
        // Placeholders no logic variable may capture.
        cs.push_back(var(fresh_var(p.binders()[i].name, p.binders()[i].ty, VarTag::Eigen, UINT64_MAX)));
      }
      return unify_formula(u, instantiate(p, cs), instantiate(t, cs));
    }
    case K::Eq: return u.unify(p.lhs(), t.lhs()) == UnifyOutcome::Ok && u.unify(p.rhs(), t.rhs()) == UnifyOutcome::Ok;
    case K::Atom:
      if (!satisfies(t.restriction(), p.restriction())) return false;
      return u.unify(p.atom(), t.atom()) == UnifyOutcome::Ok;
    case K::Obj:
      if (!satisfies(t.restriction(), p.restriction())) return false;
      return u.unify(p.context(), t.context()) == UnifyOutcome::Ok && u.unify(p.goal(), t.goal()) == UnifyOutcome::Ok;
  }
  return false;
}

}  // namespace nabla
