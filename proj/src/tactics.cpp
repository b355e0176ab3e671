#include "nabla/tactics.hpp"

#include <algorithm>

#include "nabla/elaborate.hpp"
#include "nabla/error.hpp"
#include "nabla/printer.hpp"
#include "nabla/speclogic.hpp"

namespace nabla {

namespace {

std::vector<Nom> as_vec(const NomSet& s) { return {s.begin(), s.end()}; }

bool has_logic_vars(const Formula& f) {
  std::vector<VarInfo> fv;
  collect_vars(f, fv);
  return std::any_of(fv.begin(), fv.end(), [](const VarInfo& v) { return v.tag == VarTag::Logic; });
}

const std::vector<int>* input_order(const TacticContext& ctx) {
  const std::vector<int>* o = ctx.env.nominal_order;
  return o && !o->empty() ? o : nullptr;
}

Term elab_term(const TacticContext& ctx, const Sequent& s, const PExpr& e, std::optional<Ty> expected = {}) {
  Term t = Elaborator::term_in(*ctx.sig, e, s.names(), expected);
  const std::vector<int>* o = input_order(ctx);
  return o ? rename_nominals(t, *o) : t;
}

Formula elab_formula(const TacticContext& ctx, const Sequent& s, const PFormula& f) {
  Formula g = Elaborator::formula_in(*ctx.sig, f, s.names());
  const std::vector<int>* o = input_order(ctx);
  return o ? map_terms(g, [&](const Term& t) { return rename_nominals(t, *o); }) : g;
}

void require_goal(const Sequent& s, Formula::Kind k, const char* what) {
  if (!s.goal.is(k)) throw TacticError(std::string(what) + " does not apply to " + print_formula(s.goal));
}

}  // namespace

int rename_index(int k, const std::vector<int>& order) {
  return k >= 1 && k <= static_cast<int>(order.size()) ? order[k - 1] : k;
}

Term rename_nominals(const Term& t, const std::vector<int>& order) {
  // The permutation restricted to the cycles through the nominals of t.
  std::vector<Nom> from, to;
  for (const Nom& n : support(t)) {
    if (std::find(from.begin(), from.end(), n) != from.end()) continue;
    Nom cur = n;
    do {
      Nom next{rename_index(cur.index, order), cur.ty};
      from.push_back(cur);
      to.push_back(next);
      cur = next;
    } while (cur != n);
  }
  return from.empty() ? t : apply_perm(Permutation::from_pairs(from, to), t);
}

void LemmaStore::add(const std::string& name, const Formula& f) {
  if (lemmas_.count(name)) throw DefinitionError("a theorem named " + name + " already exists");
  std::vector<VarInfo> fv;
  collect_vars(f, fv);
  if (!fv.empty()) throw DefinitionError("theorem " + name + " has free variable " + fv[0].name);
  lemmas_[name] = f;
  order_.emplace_back(name, f);
}

const Formula* LemmaStore::find(const std::string& name) const {
  auto it = lemmas_.find(name);
  return it == lemmas_.end() ? nullptr : &it->second;
}

ProofState::ProofState(std::string name, Formula statement) : name_(std::move(name)), statement_(statement) {
  Sequent s;
  s.goal = statement;
  goals_.push_back(std::move(s));
}

void ProofState::undo() {
  if (history_.empty()) throw TacticError("nothing to undo");
  goals_ = std::move(history_.back().goals);
  trust_.resize(history_.back().trust);
  history_.pop_back();
  script_.pop_back();
}

void ProofState::step(const PTactic& t, const TacticContext& ctx, const std::string& text) {
  if (t.kind == PTactic::Kind::Undo) {
    undo();
    return;
  }
  if (t.kind == PTactic::Kind::Abort) throw TacticError("abort is handled by the session");
  if (goals_.empty()) throw TacticError("no subgoals remain");
  std::size_t trust_before = trust_.size();
  std::vector<Sequent> premises;
  try {
    premises = run(t, ctx, goals_.front());
  } catch (...) {
    trust_.resize(trust_before);
    throw;
  }
  history_.push_back({goals_, trust_before});
  script_.push_back(text);
  std::vector<Sequent> next = std::move(premises);
  next.insert(next.end(), goals_.begin() + 1, goals_.end());
  goals_ = std::move(next);
}

std::vector<Sequent> ProofState::run(const PTactic& t, const TacticContext& ctx, const Sequent& s) {
  using K = PTactic::Kind;
  const KernelEnv& env = ctx.env;
  auto record = [&](MetaResult r) {
    r.entry.subject = name_;
    if (ctx.verify_meta) {
      std::optional<bool> ok = verify_judgment(env, r.added, std::max(ctx.search_depth, 10));
      if (ok && !*ok) throw TacticError("--verify-meta: " + print_formula(r.added) + " is not derivable");
    }
    trust_.push_back(r.entry);
    return r.goals;
  };
  switch (t.kind) {
    case K::Intros: return {intros(s, env, t.names)};
    case K::Case: return rule_left(s, env, t.target, t.keep);
    case K::Induction: {
      if (t.numbers.size() != 1) throw TacticError("induction on several premises is not supported");
      return {nat_induct(s, t.numbers[0])};
    }
    case K::Apply: return apply(t, ctx, s);
    case K::Exists: {
      require_goal(s, Formula::Kind::Exists, "exists");
      Term w = elab_term(ctx, s, *t.term, s.goal.binders()[0].ty);
      return rule_right(s, env, w);
    }
    case K::Split: require_goal(s, Formula::Kind::And, "split"); return rule_right(s, env);
    case K::Left: require_goal(s, Formula::Kind::Or, "left"); return rule_right(s, env, {}, 1);
    case K::Right: require_goal(s, Formula::Kind::Or, "right"); return rule_right(s, env, {}, 2);
    case K::Search: {
      int depth = t.numbers.empty() ? ctx.search_depth : t.numbers[0];
      if (s.goal.is(Formula::Kind::Eq) && eq_right(s)) return {};
      for (const Hyp& h : s.hyps)
        if (rule_id(s, h.name)) return {};
      Search search(env, depth);
      if (!search.prove(s)) throw TacticError("search failed");
      return {};
    }
    case K::Unfold: {
      int clause = t.numbers.empty() ? -1 : t.numbers[0] - 1;
      std::optional<Sequent> p = def_right(s, env, clause);
      if (!p) throw TacticError("no clause of the definition matches the goal");
      return {*p};
    }
    case K::Assert: {
      Formula f = elab_formula(ctx, s, *t.formula);
      Sequent a = s, b = s;
      a.goal = f;
      b.add_hyp(f);
      return {a, b};
    }
    case K::Inst: {
      const Hyp* h = s.hyp(t.target);
      if (!h) throw TacticError("unknown hypothesis " + t.target);
      const std::string& nname = t.withs[0].first;
      if (nname.size() < 2 || nname[0] != 'n' || !std::all_of(nname.begin() + 1, nname.end(), ::isdigit))
        throw TacticError(nname + " is not a nominal constant");
      int index = std::stoi(nname.substr(1));
      if (const std::vector<int>* o = input_order(ctx)) index = rename_index(index, *o);
      Term by = elab_term(ctx, s, t.withs[0].second);
      std::optional<Nom> n;
      for (const Nom& c : support(h->f))
        if (c.index == index) n = c;
      if (!n) n = Nom{index, type_of(by)};
      return record(meta_inst(s, t.target, *n, by));
    }
    case K::Cut: return record(meta_cut(s, t.target, t.names.at(0)));
    case K::Monotone: {
      Term l2 = elab_term(ctx, s, *t.term, builtin::olist());
      return record(meta_monotone(s, t.target, l2));
    }
    case K::Clear: {
      Sequent a = s;
      for (const std::string& n : t.names) {
        if (!a.hyp(n)) throw TacticError("unknown hypothesis " + n);
        a.remove_hyp(n);
      }
      return {a};
    }
    case K::Undo:
    case K::Abort: break;
  }
  throw TacticError("unsupported tactic");
}

std::vector<Sequent> ProofState::apply(const PTactic& t, const TacticContext& ctx, const Sequent& s) {
  using FK = Formula::Kind;
  Formula f;
  if (const Hyp* h = s.hyp(t.target))
    f = h->f;
  else if (const Formula* l = ctx.lemmas ? ctx.lemmas->find(t.target) : nullptr)
    f = *l;
  else
    throw TacticError("unknown lemma or hypothesis " + t.target);

  std::vector<const Hyp*> args;
  NomSet arg_supp;
  for (const std::string& n : t.names) {
    if (n == "_") {
      args.push_back(nullptr);
      continue;
    }
    const Hyp* h = s.hyp(n);
    if (!h) throw TacticError("unknown hypothesis " + n);
    args.push_back(h);
    collect_support(h->f, arg_supp);
  }

  // Quantifier blocks in front of the premises.
  struct Block {
    FK kind;
    std::vector<VarInfo> binders;
  };
  std::vector<Block> blocks;
  Formula body = f;
  while (body.is(FK::Forall) || body.is(FK::Nabla)) {
    blocks.push_back({body.kind(), body.binders()});
    body = body.body();
  }
  std::vector<VarInfo> nablas;
  for (const Block& b : blocks)
    if (b.kind == FK::Nabla) nablas.insert(nablas.end(), b.binders.begin(), b.binders.end());

  std::vector<Nom> pool = as_vec(arg_supp);
  std::vector<Nom> fresh;
  NomSet avoid = s.support();
  collect_support(f, avoid);
  for (const VarInfo& z : nablas) {
    Nom c = ctx.env.fresh_nom(z.ty, avoid);
    avoid.insert(c);
    fresh.push_back(c);
  }

  std::string last_error = "the premises do not match the given hypotheses";
  for (const std::vector<Nom>& sigma : nabla_assignments(nablas, pool, fresh)) {
    std::vector<Nom> over;
    for (const Nom& c : pool)
      if (std::find(sigma.begin(), sigma.end(), c) == sigma.end()) over.push_back(c);
    Subst sub;
    std::map<std::string, Term> named;
    std::size_t zi = 0;
    for (const Block& b : blocks) {
      for (const VarInfo& x : b.binders) {
        if (b.kind == FK::Nabla) {
          sub[x.id] = nominal(sigma[zi++]);
          continue;
        }
        // Universals under a nabla may depend on its nominal.
        std::vector<Nom> scope = over;
        scope.insert(scope.end(), sigma.begin(), sigma.begin() + zi);
        auto [h, t_over] = raise_over(fresh_var(x.name, x.ty, VarTag::Logic), scope);
        sub[x.id] = t_over;
        named[x.name] = t_over;
      }
    }
    Formula inst = subst(body, sub);
    Unifier u(Unifier::Mode::Search);
    bool ok = true;
    for (const auto& [x, pe] : t.withs) {
      auto it = named.find(x);
      if (it == named.end()) throw TacticError("no quantified variable named " + x);
      Term w = elab_term(ctx, s, pe, type_of(it->second));
      if (u.unify(it->second, w) != UnifyOutcome::Ok) {
        ok = false;
        break;
      }
    }
    std::vector<Formula> pending;
    Formula rest = inst;
    for (const Hyp* h : args) {
      if (!ok) break;
      if (!rest.is(FK::Imp)) throw TacticError(t.target + " has fewer premises than arguments");
      if (h) {
        if (!unify_formula(u, rest.left(), h->f)) {
          ok = false;
          last_error = "premise " + print_formula(u.resolve(rest.left())) + " does not match " + h->name;
        }
      } else {
        pending.push_back(rest.left());
      }
      rest = rest.right();
    }
    if (!ok) continue;
    if (u.has_postponed()) throw NonPatternError("apply: unification left the pattern fragment");
    Formula concl = u.resolve(rest);
    if (has_logic_vars(concl)) throw TacticError("apply: cannot determine every variable of " + t.target);
    std::vector<Sequent> out;
    for (const Formula& p : pending) {
      Formula g = u.resolve(p);
      if (has_logic_vars(g)) throw TacticError("apply: cannot determine every variable of " + t.target);
      Sequent sg = s;
      sg.goal = g;
      out.push_back(sg);
    }
    Sequent main = s;
    main.add_hyp(concl);
    out.push_back(main);
    return out;
  }
  throw TacticError("apply " + t.target + ": " + last_error);
}

}  // namespace nabla
