#include "nabla/kernel.hpp"

#include <algorithm>

#include "nabla/signature.hpp"

namespace nabla {

namespace {

constexpr long kMaxSteps = 400000;

std::vector<Nom> as_vec(const NomSet& s) { return {s.begin(), s.end()}; }

std::vector<Nom> minus(const std::vector<Nom>& a, const std::vector<Nom>& b) {
  std::vector<Nom> out;
  for (const Nom& n : a)
    if (std::find(b.begin(), b.end(), n) == b.end()) out.push_back(n);
  return out;
}

Term raised_fresh(const VarInfo& b, const std::vector<Nom>& over, VarTag tag) {
  std::vector<Ty> tys;
  std::vector<Term> args;
  for (const Nom& n : over) {
    tys.push_back(n.ty);
    args.push_back(nominal(n));
  }
  VarInfo h = fresh_var(b.name, Ty::arrows(tys, b.ty), tag);
  return args.empty() ? var(h) : app(var(h), args);
}

bool head_is(const Term& t, const char* name, std::size_t n) {
  return t.spine_head().is_const() && t.spine_head().const_name() == name && t.spine_args().size() == n;
}

}  // namespace

bool Search::prove(const Sequent& s) {
  std::vector<Formula> hyps;
  for (const Hyp& h : s.hyps) hyps.push_back(h.f);
  taken_ = s.support();
  Unifier u(Unifier::Mode::Search);
  return run(hyps, s.goal, u, [](Unifier& v) { return !v.has_postponed(); });
}

bool Search::run(const std::vector<Formula>& hyps, const Formula& goal, Unifier& u, const Cont& k) {
  std::vector<Formula> hs = hyps;
  for (const Formula& h : hs) collect_support(h, taken_);
  collect_support(goal, taken_);
  return prove_f(hs, goal, u, depth_, k);
}

NomSet Search::used_support(const std::vector<Formula>& hyps, const Formula& goal, const Unifier& u) const {
  NomSet out = taken_;
  for (const Formula& h : hyps) collect_support(u.resolve(h), out);
  collect_support(u.resolve(goal), out);
  return out;
}

bool Search::from_hyps(std::vector<Formula>& hyps, const Formula& goal, Unifier& u, const Cont& k) {
  Formula g = u.resolve(goal);
  for (const Formula& h0 : hyps) {
    Formula h = u.resolve(h0);
    if (h.kind() != g.kind()) continue;
    for (const Permutation& p : candidate_perms(support(h), support(g))) {
      Unifier v = u;
      if (!unify_formula(v, g, apply_perm(p, h))) continue;
      if (k(v)) return true;
      if (steps_ > kMaxSteps) return false;
    }
  }
  return false;
}

bool Search::prove_f(std::vector<Formula>& hyps, const Formula& goal0, Unifier& u, int depth, const Cont& k) {
  using K = Formula::Kind;
  if (++steps_ > kMaxSteps) return false;
  for (const Formula& h : hyps)
    if (h.is(K::False)) return k(u);
  Formula g = u.resolve(goal0);
  switch (g.kind()) {
    case K::True: return k(u);
    case K::False: return from_hyps(hyps, g, u, k);
    case K::Atom: return prove_atom(hyps, g, u, depth, k);
    case K::Obj: return prove_obj(hyps, g.context(), g.goal(), g.restriction(), u, depth, k);
    case K::Eq: {
      Unifier v = u;
      if (v.unify(g.lhs(), g.rhs()) == UnifyOutcome::Ok && k(v)) return true;
      // An equation that does not unify may still be a hypothesis.
      return from_hyps(hyps, g, u, k);
    }
    default: break;
  }
  if (from_hyps(hyps, g, u, k)) return true;
  switch (g.kind()) {
    case K::And: {
      std::vector<Formula> saved = hyps;
      Formula right = g.right();
      return prove_f(hyps, g.left(), u, depth, [this, saved, right, depth, &k](Unifier& v) mutable {
        return prove_f(saved, right, v, depth, k);
      });
    }
    case K::Or: {
      Unifier v = u;
      if (prove_f(hyps, g.left(), v, depth, k)) return true;
      Unifier w = u;
      return prove_f(hyps, g.right(), w, depth, k);
    }
    case K::Imp: {
      std::vector<Formula> more = hyps;
      more.push_back(g.left());
      return prove_f(more, g.right(), u, depth, k);
    }
    case K::Forall: {
      std::vector<Nom> over = as_vec(support(g));
      std::vector<Term> ts;
      for (const VarInfo& b : g.binders()) ts.push_back(raised_fresh(b, over, VarTag::Eigen));
      return prove_f(hyps, instantiate(g, ts), u, depth, k);
    }
    case K::Nabla: {
      NomSet avoid = used_support(hyps, g, u);
      std::vector<Term> ts;
      for (const VarInfo& b : g.binders()) {
        Nom c = env_.fresh_nom(b.ty, avoid);
        avoid.insert(c);
        taken_.insert(c);
        ts.push_back(nominal(c));
      }
      return prove_f(hyps, instantiate(g, ts), u, depth, k);
    }
    case K::Exists: {
      std::vector<Nom> over = as_vec(support(g));
      std::vector<Term> ts;
      for (const VarInfo& b : g.binders()) ts.push_back(raised_fresh(b, over, VarTag::Logic));
      return prove_f(hyps, instantiate(g, ts), u, depth, k);
    }
    default: return false;
  }
}

bool Search::prove_atom(std::vector<Formula>& hyps, const Formula& g, Unifier& u, int depth, const Cont& k) {
  if (from_hyps(hyps, g, u, k)) return true;
  if (depth <= 0 || !g.restriction().is_none() || !env_.defs) return false;
  const DefinedPred* d = env_.defs->find(Definitions::pred_of(g.atom()));
  if (!d) return false;
  std::vector<Nom> a = as_vec(support(g));
  for (const Clause& c : d->clauses) {
    for (const std::vector<Nom>& sigma : nabla_assignments(c.nablas, a, {})) {
      ClauseInstance inst = instantiate_clause(c, minus(a, sigma), sigma, VarTag::Logic);
      Unifier v = u;
      if (v.unify(inst.head, g.atom()) != UnifyOutcome::Ok) continue;
      if (prove_f(hyps, inst.body, v, depth - 1, k)) return true;
      if (steps_ > kMaxSteps) return false;
    }
  }
  return false;
}

bool Search::prove_obj(std::vector<Formula>& hyps, const Term& ctx0, const Term& g0, const Restriction& r, Unifier& u,
                       int depth, const Cont& k) {
  using namespace builtin;
  if (++steps_ > kMaxSteps) return false;
  Term ctx = u.resolve(ctx0);
  Term g = u.resolve(g0);
  if (from_hyps(hyps, f_obj(ctx, g, r), u, k)) return true;
  if (g.is_const() && g.const_name() == "tt") return k(u);
  if (head_is(g, kAnd, 2)) {
    Term right = g.args()[1];
    std::vector<Formula> saved = hyps;
    return prove_obj(hyps, ctx, g.args()[0], r, u, depth, [this, saved, ctx, right, r, depth, &k](Unifier& v) mutable {
      return prove_obj(saved, ctx, right, r, v, depth, k);
    });
  }
  if (head_is(g, kImp, 2)) return prove_obj(hyps, cons(g.args()[0], ctx), g.args()[1], r, u, depth, k);
  if (g.is_app() && g.head().is_const() && is_pi_name(g.head().const_name()) && g.args().size() == 1) {
    const Term& body = g.args()[0];
    NomSet avoid = used_support(hyps, f_obj(ctx, g, r), u);
    Nom c = env_.fresh_nom(type_of(body).dom(), avoid);
    taken_.insert(c);
    return prove_obj(hyps, ctx, app(body, nominal(c)), r, u, depth, k);
  }
  if (!head_is(g, kAtm, 1)) return false;
  const Term atom = g.args()[0];

  // Members of the context, then hypotheses about its unknown tail.
  Term cur = ctx, hd, tl;
  while (as_cons(cur, hd, tl)) {
    Unifier v = u;
    if (v.unify(hd, atom) == UnifyOutcome::Ok && k(v)) return true;
    cur = u.resolve(tl);
  }
  if (!is_nil(cur)) {
    for (const Formula& h0 : hyps) {
      Formula h = u.resolve(h0);
      if (!h.is(Formula::Kind::Atom) || Definitions::pred_of(h.atom()) != "member") continue;
      const auto& args = h.atom().spine_args();
      if (args.size() != 2) continue;
      for (const Permutation& p : candidate_perms(support(h), support(atom))) {
        Unifier v = u;
        Term pe = apply_perm(p, args[0]), pl = apply_perm(p, args[1]);
        if (v.unify(pl, cur) != UnifyOutcome::Ok || v.unify(pe, atom) != UnifyOutcome::Ok) continue;
        if (k(v)) return true;
      }
    }
  }

  if (depth <= 0 || !env_.defs) return false;
  const DefinedPred* prog = env_.defs->find("prog");
  if (!prog) return false;
  NomSet over_set = support(atom);
  collect_support(ctx, over_set);
  std::vector<Nom> over = as_vec(over_set);
  for (const Clause& c : prog->clauses) {
    ClauseInstance inst = instantiate_clause(c, over, {}, VarTag::Logic);
    Unifier v = u;
    if (v.unify(inst.head.spine_args()[0], atom) != UnifyOutcome::Ok) continue;
    if (prove_obj(hyps, ctx, inst.head.spine_args()[1], Restriction::none(), v, depth - 1, k)) return true;
    if (steps_ > kMaxSteps) return false;
  }
  return false;
}

}  // namespace nabla
