#include "nabla/speclogic.hpp"

#include <algorithm>
#include <set>

#include "nabla/elaborate.hpp"
#include "nabla/error.hpp"
#include "nabla/parser.hpp"
#include "nabla/printer.hpp"
#include "nabla/signature.hpp"

namespace nabla {

namespace {

const char* kSeqDefs = R"(
Define nat : nt -> prop by
  nat z ;
  nat (s N) := nat N.
Define element : nt -> o -> olist -> prop by
  element N B (B :: L) ;
  element (s N) B (C :: L) := element N B L.
Define member : o -> olist -> prop by
  member B L := exists n, nat n /\ element n B L.
Define seq : nt -> olist -> g -> prop by
  seq N L (atm A) := member A L ;
  seq (s N) L (and B C) := seq N L B /\ seq N L C ;
  seq (s N) L (imp A B) := seq N (A :: L) B ;
  seq (s N) L (atm A) := exists b, prog A b /\ seq N L b ;
  seq (s N) L (atm A) := prog A tt.
)";

Ty prog_ty() { return Ty::arrows({builtin::o(), builtin::goal()}, Ty::prop()); }
Ty seq_ty() { return Ty::arrows({builtin::nat(), builtin::olist(), builtin::goal()}, Ty::prop()); }
Ty member_ty() { return Ty::arrows({builtin::o(), builtin::olist()}, Ty::prop()); }

void collect_pi_types(const Term& t, std::set<Ty>& out) {
  switch (t.kind()) {
    case Term::Kind::Const:
      if (builtin::is_pi_name(t.const_name())) out.insert(t.ty().dom().dom());
      return;
    case Term::Kind::Lam: collect_pi_types(t.body(), out); return;
    case Term::Kind::App:
      collect_pi_types(t.head(), out);
      for (const Term& a : t.args()) collect_pi_types(a, out);
      return;
    default: return;
  }
}

void check_quantified_type(const Ty& ty, const std::string& what, int line) {
  if (ty.order() > 1 || ty.contains_base("o") || ty.contains_base("g") || ty.contains_base("prop") ||
      ty.contains_base("olist"))
    throw TypeError("line " + std::to_string(line) + ": " + what + " has type " + ty.str() +
                    "; quantified types must have order 0 or 1 and may not mention o");
}

const PExpr& unparen(const PExpr& e) { return e.kind == PExpr::Kind::Paren ? unparen(e.kids[0]) : e; }

struct DShape {
  std::vector<std::string> pis;
  std::vector<const PExpr*> premises;
  const PExpr* head = nullptr;
};

void d_shape(const PExpr& e0, DShape& out) {
  const PExpr& e = unparen(e0);
  switch (e.kind) {
    case PExpr::Kind::GoalPi:
      if (!out.premises.empty())
        throw ParseError("line " + std::to_string(e.line) + ": clause quantifiers must precede its premises", e.line);
      out.pis.push_back(e.name);
      d_shape(e.kids[0], out);
      return;
    case PExpr::Kind::GoalImp:
      out.premises.push_back(&e.kids[0]);
      d_shape(e.kids[1], out);
      return;
    case PExpr::Kind::GoalAnd:
      throw ParseError("line " + std::to_string(e.line) + ": a clause must end in an atom, not a conjunction", e.line);
    default: out.head = &e; return;
  }
}

std::vector<Term> list_items(Term l, Term& tail) {
  std::vector<Term> items;
  Term h, t;
  while (builtin::as_cons(l, h, t)) {
    items.push_back(h);
    l = t;
  }
  tail = l;
  return items;
}

const Formula& obj_hyp(const Sequent& s, const std::string& h) {
  const Hyp* p = s.hyp(h);
  if (!p) throw TacticError("unknown hypothesis " + h);
  if (!p->f.is(Formula::Kind::Obj)) throw TacticError(h + " is not a specification judgment");
  return p->f;
}

}  // namespace

CompiledSpec compile_spec(Signature& sig, const std::string& source) {
  PSpec ps = Parser::of(source).spec();
  CompiledSpec out;
  for (const PSpecDecl& d : ps.decls) {
    if (d.is_kind) {
      for (const std::string& n : d.names) {
        sig.add_kind(n);
        out.kinds.push_back(n);
      }
      continue;
    }
    for (const std::string& n : d.names) {
      try {
        sig.add_const(n, *d.ty);
      } catch (const Error& e) {
        throw TypeError("line " + std::to_string(d.line) + ": " + e.what());
      }
      out.consts.emplace_back(n, *d.ty);
    }
  }
  for (const PSpecClause& pc : ps.clauses) {
    DShape shape;
    d_shape(pc.body, shape);
    if (pc.premise) {
      if (!shape.premises.empty() || !shape.pis.empty())
        throw ParseError("line " + std::to_string(pc.line) + ": `:-` needs an atomic head", pc.line);
      shape.premises.push_back(&*pc.premise);
    }
    Elaborator el(sig);
    el.allow_implicit(VarTag::Bound);
    for (const std::string& x : shape.pis) el.declare(x);
    el.add_term(*shape.head, builtin::o());
    for (const PExpr* p : shape.premises) el.add_goal(*p);
    el.solve();
    ProgClause c;
    c.line = pc.line;
    c.head = el.term(*shape.head);
    std::vector<Term> prems;
    for (const PExpr* p : shape.premises) prems.push_back(el.goal(*p));
    c.body = builtin::tt();
    if (!prems.empty()) {
      c.body = prems.back();
      for (std::size_t i = prems.size() - 1; i-- > 0;) c.body = builtin::conj(prems[i], c.body);
    }
    for (const std::string& x : shape.pis) c.vars.push_back(el.declared(x));
    for (const VarInfo& v : el.implicits()) c.vars.push_back(v);
    for (const VarInfo& v : c.vars) check_quantified_type(v.ty, "variable " + v.name, pc.line);
    std::set<Ty> pis;
    collect_pi_types(c.body, pis);
    for (const Ty& t : pis) check_quantified_type(t, "a pi binder", pc.line);
    out.clauses.push_back(std::move(c));
  }
  return out;
}

std::string print_prog_clause(const ProgClause& c) {
  // Variables are printed capitalized so that they re-parse as implicit.
  Subst sub;
  std::set<std::string> used;
  for (const VarInfo& v : c.vars) {
    std::string base = v.name.empty() ? "X" : v.name;
    base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
    std::string name = base;
    for (int i = 1; used.count(name); ++i) name = base + std::to_string(i);
    used.insert(name);
    sub[v.id] = var(fresh_var(name, v.ty, VarTag::Bound));
  }
  std::string head = print_term(apply_subst(c.head, sub));
  Term body = apply_subst(c.body, sub);
  if (body.is_const() && body.const_name() == "tt") return head + ".";
  return head + " :- " + print_goal(body) + ".";
}

void install_seq(Signature& sig, Definitions& defs, const std::vector<ProgClause>& prog) {
  if (defs.defined("seq")) throw DefinitionError("the specification logic is already installed");
  sig.add_const("prog", prog_ty());
  std::vector<Clause> pcs;
  std::set<Ty> pi_types;
  for (const ProgClause& p : prog) {
    Clause c;
    c.vars = p.vars;
    c.head = app(constant("prog", prog_ty()), {p.head, p.body});
    c.body = f_true();
    c.line = p.line;
    pcs.push_back(std::move(c));
    collect_pi_types(p.body, pi_types);
  }
  defs.add({{"prog", prog_ty()}}, std::move(pcs), false);

  // One pi clause for every type a specification goal may quantify over.
  static const std::set<std::string> internal = {"o", "olist", "g", "nt", "prop"};
  for (const std::string& k : sig.kinds())
    if (!internal.count(k)) pi_types.insert(Ty::base(k));

  Parser parser = Parser::of(kSeqDefs);
  while (auto cmd = parser.command()) {
    for (const auto& [n, ty] : cmd->preds) sig.add_const(n, ty);
    std::vector<Clause> cs = elaborate_clauses(sig, cmd->clauses);
    if (cmd->preds[0].first == "seq") {
      Term seq = constant("seq", seq_ty());
      std::vector<Clause> pis;
      for (const Ty& ty : pi_types) {
        VarInfo n = fresh_var("N", builtin::nat(), VarTag::Bound);
        VarInfo l = fresh_var("L", builtin::olist(), VarTag::Bound);
        VarInfo b = fresh_var("B", Ty::arrow(ty, builtin::goal()), VarTag::Bound);
        VarInfo x = fresh_var("x", ty, VarTag::Bound);
        Clause c;
        c.vars = {n, l, b};
        c.head = app(seq, {builtin::succ(var(n)), var(l), builtin::pi(ty, var(b))});
        c.body = f_quant(Formula::Kind::Nabla, {x}, f_atom(app(seq, {var(n), var(l), app(var(b), var(x))})));
        pis.push_back(std::move(c));
      }
      cs.insert(cs.begin() + 3, pis.begin(), pis.end());
    }
    defs.add(cmd->preds, std::move(cs), false);
  }
}

std::optional<Unifier> spec_search(const KernelEnv& env, const Term& ctx, const Term& goal, int depth) {
  Search search(env, depth);
  Unifier u(Unifier::Mode::Search);
  std::optional<Unifier> found;
  search.run({}, f_obj(ctx, goal), u, [&](Unifier& v) {
    if (v.has_postponed()) return false;
    found = v;
    return true;
  });
  return found;
}

bool seq_derivable(const KernelEnv& env, const Term& ctx, const Term& goal, int depth) {
  VarInfo n = fresh_var("n", builtin::nat(), VarTag::Bound);
  Formula f = f_quant(Formula::Kind::Exists, {n},
                      f_and(f_atom(app(constant("seq", seq_ty()), {var(n), ctx, goal})),
                            f_atom(app(constant("nat", Ty::arrow(builtin::nat(), Ty::prop())), var(n)))));
  Search search(env, depth);
  Unifier u(Unifier::Mode::Search);
  return search.run({}, f, u, [](Unifier& v) { return !v.has_postponed(); });
}

MetaResult meta_inst(const Sequent& s, const std::string& h, const Nom& n, const Term& t) {
  const Formula f = obj_hyp(s, h);
  if (type_of(t) != n.ty)
    throw TacticError("inst: " + print_term(t) + " has type " + type_of(t).str() + ", expected " + n.ty.str());
  Formula g = replace_nom(f, n, t);
  Sequent out = s;
  out.add_hyp(g);
  out.refresh_vars();
  return {{out}, {TrustEntry::Kind::Inst, "", h + " with " + n.str() + " = " + print_term(t)}, g};
}

MetaResult meta_cut(const Sequent& s, const std::string& h1, const std::string& h2) {
  const Formula a = obj_hyp(s, h1);
  const Formula b = obj_hyp(s, h2);
  auto attempt = [&](const Formula& lemma, const Formula& user) -> std::optional<Formula> {
    const Term& g = lemma.goal();
    if (!g.is_app() || !g.head().is_const() || g.head().const_name() != builtin::kAtm) return std::nullopt;
    Term hd, l2;
    if (!builtin::as_cons(user.context(), hd, l2)) return std::nullopt;
    for (const Permutation& p : candidate_perms(support(lemma), support(user))) {
      if (eta_reduce(apply_perm(p, g.args()[0])) != eta_reduce(hd)) continue;
      Term tail;
      std::vector<Term> items = list_items(apply_perm(p, lemma.context()), tail);
      Term ctx;
      if (builtin::is_nil(tail)) {
        ctx = l2;
      } else if (builtin::is_nil(l2)) {
        ctx = tail;
      } else {
        throw TacticError("cut: cannot join two contexts with unknown tails");
      }
      for (std::size_t i = items.size(); i-- > 0;) ctx = builtin::cons(items[i], ctx);
      return f_obj(ctx, user.goal());
    }
    return std::nullopt;
  };
  std::optional<Formula> r = attempt(a, b);
  if (!r) r = attempt(b, a);
  if (!r) throw TacticError("cut: neither judgment proves the atom at the head of the other's context");
  Sequent out = s;
  out.add_hyp(*r);
  return {{out}, {TrustEntry::Kind::Cut, "", h1 + " with " + h2}, *r};
}

MetaResult meta_monotone(const Sequent& s, const std::string& h, const Term& l2) {
  const Formula f = obj_hyp(s, h);
  if (type_of(l2) != builtin::olist()) throw TacticError("monotone: the new context must be a list");
  Term t1, t2;
  std::vector<Term> xs = list_items(f.context(), t1);
  std::vector<Term> ys = list_items(l2, t2);
  bool subset = (builtin::is_nil(t1) || t1 == t2) && std::all_of(xs.begin(), xs.end(), [&](const Term& x) {
                  return std::find(ys.begin(), ys.end(), x) != ys.end();
                });
  Formula g = f_obj(l2, f.goal(), f.restriction());
  Sequent main = s;
  main.add_hyp(g);
  MetaResult r{{}, {TrustEntry::Kind::Monotone, "", h + " with " + print_term(l2)}, g};
  if (!subset) {
    Term member = constant("member", member_ty());
    VarInfo e = fresh_var("E", builtin::o(), VarTag::Bound);
    Sequent ob = s;
    ob.goal = f_quant(Formula::Kind::Forall, {e},
                      f_imp(f_atom(app(member, {var(e), f.context()})), f_atom(app(member, {var(e), l2}))));
    r.goals.push_back(ob);
  }
  r.goals.push_back(main);
  return r;
}

std::optional<bool> verify_judgment(const KernelEnv& env, const Formula& obj, int depth) {
  std::vector<VarInfo> fv;
  collect_vars(obj, fv);
  if (!fv.empty()) return std::nullopt;
  return spec_search(env, obj.context(), obj.goal(), depth).has_value();
}

}  // namespace nabla
