#include "nabla/unify.hpp"

#include <algorithm>
#include <stdexcept>

#include "nabla/error.hpp"

namespace nabla {

namespace {

struct Clash {};
struct Postpone {};

const NomSet kEmpty;

bool subset(const NomSet& a, const NomSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

NomSet intersect(const NomSet& a, const NomSet& b) {
  NomSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

int find(const std::vector<Term>& xs, const Term& t) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == t) return static_cast<int>(i);
  return -1;
}

/// lam^n over the argument types of ty.
Term lams(const Ty& ty, int n, Term body) {
  std::vector<Ty> ts = ty.arg_types();
  for (int i = n - 1; i >= 0; --i) body = lam(ts[i], body, "x");
  return body;
}

}  // namespace

const NomSet& Unifier::support_of(std::uint64_t id) const {
  auto it = supp_.find(id);
  return it == supp_.end() ? kEmpty : it->second;
}

bool Unifier::flexible(const VarInfo& v) const {
  if (v.tag == VarTag::Logic) return true;
  return mode_ == Mode::Case && v.tag == VarTag::Eigen;
}

Term Unifier::whnf(const Term& t) const {
  Term cur = t;
  while (true) {
    const Term& h = cur.spine_head();
    if (!h.is_var()) return cur;
    auto it = bind_.find(h.var().id);
    if (it == bind_.end()) return cur;
    cur = cur.is_app() ? app(it->second, cur.args()) : it->second;
  }
}

Term Unifier::resolve(const Term& t) const {
  if (bind_.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = bind_.find(t.var().id);
      return it == bind_.end() ? t : resolve(it->second);
    }
    case Term::Kind::Const:
    case Term::Kind::Nom:
    case Term::Kind::BVar: return t;
    case Term::Kind::Lam: return lam(t.ty(), resolve(t.body()), t.hint());
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(resolve(a));
      return app(resolve(t.head()), std::move(args));
    }
  }
  return t;
}

Formula Unifier::resolve(const Formula& f) const {
  if (bind_.empty()) return f;
  return map_terms(f, [this](const Term& t) { return resolve(t); });
}

Subst Unifier::substitution() const {
  Subst s;
  for (const auto& [id, t] : bind_) s[id] = resolve(t);
  return s;
}

bool Unifier::is_flex(const Term& t) const {
  const Term& h = t.spine_head();
  return h.is_var() && flexible(h.var()) && !bind_.count(h.var().id);
}

bool Unifier::pattern_args(const VarInfo& x, const std::vector<Term>& args, int depth, std::vector<Term>& out) const {
  out.clear();
  const NomSet& sx = support_of(x.id);
  for (const Term& a0 : args) {
    Term a = eta_reduce(resolve(a0));
    if (a.is_bvar()) {
      if (a.bvar_index() >= depth) return false;
    } else if (a.is_nom()) {
      // A nominal that is both an argument and in the support makes the
      // solution ambiguous.
      if (sx.count(a.nom())) return false;
    } else {
      return false;
    }
    if (find(out, a) >= 0) return false;
    out.push_back(a);
  }
  return true;
}

VarInfo Unifier::fresh_like(const VarInfo& x, const Ty& ty, std::uint64_t ts, NomSet supp) {
  VarInfo v = fresh_var(x.name, ty, x.tag, ts);
  if (!supp.empty()) supp_[v.id] = std::move(supp);
  created_.push_back(v);
  return v;
}

void Unifier::bind(const VarInfo& x, const Term& t) {
  if (bind_.count(x.id)) throw std::logic_error("unifier: variable " + x.name + " bound twice");
  Term r = resolve(t);
  if (occurs_var(r, x.id)) throw Clash{};
  bind_[x.id] = r;
}

void Unifier::solve(const Term& a0, const Term& b0, int depth) {
  Term a = whnf(a0), b = whnf(b0);
  if (a.is_lam() || b.is_lam()) {
    Term ab = a.is_lam() ? a.body() : app(lift(a, 1), bvar(0));
    Term bb = b.is_lam() ? b.body() : app(lift(b, 1), bvar(0));
    solve(ab, bb, depth + 1);
    return;
  }
  bool fa = is_flex(a), fb = is_flex(b);
  if (fa && fb) return flex_flex(a, b, depth);
  if (fa) return flex_rigid(a, b, depth);
  if (fb) return flex_rigid(b, a, depth);
  const Term& ha = a.spine_head();
  const Term& hb = b.spine_head();
  if (!(ha == hb)) throw Clash{};
  const auto& xs = a.spine_args();
  const auto& ys = b.spine_args();
  if (xs.size() != ys.size()) throw Clash{};
  for (std::size_t i = 0; i < xs.size(); ++i) solve(xs[i], ys[i], depth);
}

void Unifier::flex_rigid(const Term& f, const Term& t, int depth) {
  const VarInfo& x = f.spine_head().var();
  std::vector<Term> args;
  if (!pattern_args(x, f.spine_args(), depth, args)) {
    postponed_.push_back({f, t, depth});
    return;
  }
  Term body;
  try {
    body = invert(resolve(t), x, args, depth, 0);
  } catch (const Postpone&) {
    postponed_.push_back({f, t, depth});
    return;
  }
  bind(x, lams(x.ty, static_cast<int>(args.size()), body));
}

Term Unifier::invert(const Term& t0, const VarInfo& x, const std::vector<Term>& args, int depth, int inner) {
  // Earlier siblings may have bound variables occurring here.
  const Term t = whnf(t0);
  const int k = static_cast<int>(args.size());
  const NomSet& sx = support_of(x.id);
  const bool ts_check = mode_ == Mode::Search;
  auto map_atom = [&](const Term& a) -> Term {
    if (a.is_bvar()) {
      int j = a.bvar_index();
      if (j < inner) return a;
      int p = find(args, bvar(j - inner));
      if (p < 0) throw Clash{};
      return bvar(inner + k - 1 - p);
    }
    if (a.is_nom()) {
      int p = find(args, a);
      if (p >= 0) return bvar(inner + k - 1 - p);
      if (sx.count(a.nom())) return a;
      throw Clash{};
    }
    if (a.is_var() && ts_check && a.var().ts > x.ts) throw Clash{};
    return a;
  };

  if (t.is_lam()) return lam(t.ty(), invert(t.body(), x, args, depth, inner + 1), t.hint());

  const Term& h = t.spine_head();
  const std::vector<Term>& targs = t.spine_args();
  if (h.is_var() && flexible(h.var())) {
    const VarInfo& y = h.var();
    if (y.id == x.id) throw Clash{};
    // Arguments of y that sit under the inner binders still count as bound.
    std::vector<Term> yargs;
    bool pattern = pattern_args(y, targs, depth + inner, yargs);
    std::uint64_t ts = ts_check ? std::min(x.ts, y.ts) : y.ts;
    NomSet sy = intersect(support_of(y.id), sx);
    // Nominals y may mention that x receives as arguments: y is raised over
    // them so that they can turn into x's bound variables.
    std::vector<Term> extra;
    for (const Nom& c : support_of(y.id))
      if (!sx.count(c) && find(args, nominal(c)) >= 0) extra.push_back(nominal(c));
    bool narrow = ts != y.ts || sy.size() != support_of(y.id).size();
    std::vector<Ty> ytys = y.ty.arg_types();
    if (pattern) {
      std::vector<int> keep;
      std::vector<Term> mapped;
      for (int i = 0; i < static_cast<int>(yargs.size()); ++i) {
        try {
          mapped.push_back(map_atom(yargs[i]));
          keep.push_back(i);
        } catch (const Clash&) {
        }
      }
      if (keep.size() == yargs.size() && !narrow) return app(h, mapped);
      std::vector<Ty> ktys;
      for (int i : keep) ktys.push_back(ytys[i]);
      for (const Term& c : extra) ktys.push_back(c.nom().ty);
      // Result type of y after all its pattern arguments.
      Ty res = y.ty;
      for (std::size_t i = 0; i < yargs.size(); ++i) res = res.cod();
      VarInfo y2 = fresh_like(y, Ty::arrows(ktys, res), ts, sy);
      int m = static_cast<int>(yargs.size());
      std::vector<Term> inner_args;
      for (int i : keep) inner_args.push_back(bvar(m - 1 - i));
      for (const Term& c : extra) {
        inner_args.push_back(c);
        mapped.push_back(map_atom(c));
      }
      bind(y, lams(y.ty, m, app(var(y2), inner_args)));
      return app(var(y2), mapped);
    }
    std::vector<Term> mapped;
    try {
      for (const Term& a : targs) mapped.push_back(invert(a, x, args, depth, inner));
    } catch (const Clash&) {
      throw Postpone{};
    }
    if (!narrow) return app(h, mapped);
    if (extra.empty()) {
      VarInfo y2 = fresh_like(y, y.ty, ts, sy);
      bind(y, var(y2));
      return app(var(y2), mapped);
    }
    int m = static_cast<int>(ytys.size());
    if (static_cast<int>(targs.size()) != m) throw Postpone{};
    std::vector<Ty> rtys = ytys;
    std::vector<Term> inner_args;
    for (int i = 0; i < m; ++i) inner_args.push_back(bvar(m - 1 - i));
    for (const Term& c : extra) {
      rtys.push_back(c.nom().ty);
      inner_args.push_back(c);
      mapped.push_back(map_atom(c));
    }
    VarInfo y2 = fresh_like(y, Ty::arrows(rtys, y.ty.result()), ts, sy);
    bind(y, lams(y.ty, m, app(var(y2), inner_args)));
    return app(var(y2), mapped);
  }
  Term nh = map_atom(h);
  if (targs.empty()) return nh;
  std::vector<Term> mapped;
  mapped.reserve(targs.size());
  for (const Term& a : targs) mapped.push_back(invert(a, x, args, depth, inner));
  return app(nh, mapped);
}

void Unifier::flex_flex(const Term& a, const Term& b, int depth) {
  const VarInfo& x = a.spine_head().var();
  const VarInfo& y = b.spine_head().var();
  std::vector<Term> xa, yb;
  bool px = pattern_args(x, a.spine_args(), depth, xa);
  bool py = pattern_args(y, b.spine_args(), depth, yb);
  if (x.id == y.id) {
    if (!px || !py) {
      if (a == b) return;
      postponed_.push_back({a, b, depth});
      return;
    }
    std::vector<int> keep;
    for (std::size_t i = 0; i < xa.size(); ++i)
      if (xa[i] == yb[i]) keep.push_back(static_cast<int>(i));
    if (keep.size() == xa.size()) return;
    std::vector<Ty> tys = x.ty.arg_types(), ktys;
    for (int i : keep) ktys.push_back(tys[i]);
    Ty res = x.ty;
    for (std::size_t i = 0; i < xa.size(); ++i) res = res.cod();
    VarInfo z = fresh_like(x, Ty::arrows(ktys, res), x.ts, support_of(x.id));
    int m = static_cast<int>(xa.size());
    std::vector<Term> zargs;
    for (int i : keep) zargs.push_back(bvar(m - 1 - i));
    bind(x, lams(x.ty, m, app(var(z), zargs)));
    return;
  }
  if (!px && !py) {
    postponed_.push_back({a, b, depth});
    return;
  }
  if (!px) return flex_rigid(b, a, depth);
  if (!py) return flex_rigid(a, b, depth);

  const NomSet& sx = support_of(x.id);
  const NomSet& sy = support_of(y.id);
  const bool ts_check = mode_ == Mode::Search;
  // Whether every argument of `from` is expressible on the `to` side.
  auto expressible = [](const std::vector<Term>& items, const std::vector<Term>& to_args, const NomSet& to_supp) {
    for (const Term& it : items)
      if (find(to_args, it) < 0 && !(it.is_nom() && to_supp.count(it.nom()))) return false;
    return true;
  };
  auto map_items = [](const std::vector<Term>& items, const std::vector<Term>& args) {
    std::vector<Term> out;
    int k = static_cast<int>(args.size());
    for (const Term& it : items) {
      int p = find(args, it);
      out.push_back(p >= 0 ? bvar(k - 1 - p) : it);
    }
    return out;
  };
  // Bind `v` (applied to vargs) to `w` applied to witems, when w needs nothing v lacks.
  auto try_direct = [&](const VarInfo& v, const std::vector<Term>& vargs, const NomSet& svs, const VarInfo& w,
                        const std::vector<Term>& wargs, const NomSet& sws) {
    if (!expressible(wargs, vargs, svs) || !subset(sws, svs)) return false;
    if (ts_check && w.ts > v.ts) return false;
    bind(v, lams(v.ty, static_cast<int>(vargs.size()), app(var(w), map_items(wargs, vargs))));
    return true;
  };
  // Prefer instantiating the younger variable so that older names survive.
  if (x.id > y.id) {
    if (try_direct(x, xa, sx, y, yb, sy)) return;
    if (try_direct(y, yb, sy, x, xa, sx)) return;
  } else {
    if (try_direct(y, yb, sy, x, xa, sx)) return;
    if (try_direct(x, xa, sx, y, yb, sy)) return;
  }

  std::vector<Term> items;
  std::vector<Ty> tys;
  std::vector<Ty> xt = x.ty.arg_types(), yt = y.ty.arg_types();
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const Term& it = xa[i];
    if (find(yb, it) >= 0 || (it.is_nom() && sy.count(it.nom()))) {
      items.push_back(it);
      tys.push_back(xt[i]);
    }
  }
  for (std::size_t i = 0; i < yb.size(); ++i) {
    const Term& it = yb[i];
    if (find(items, it) < 0 && it.is_nom() && sx.count(it.nom())) {
      items.push_back(it);
      tys.push_back(yt[i]);
    }
  }
  Ty res = x.ty;
  for (std::size_t i = 0; i < xa.size(); ++i) res = res.cod();
  VarInfo z = fresh_like(x.id < y.id ? x : y, Ty::arrows(tys, res), ts_check ? std::min(x.ts, y.ts) : x.ts,
                         intersect(sx, sy));
  bind(x, lams(x.ty, static_cast<int>(xa.size()), app(var(z), map_items(items, xa))));
  bind(y, lams(y.ty, static_cast<int>(yb.size()), app(var(z), map_items(items, yb))));
}

void Unifier::retry_postponed() {
  bool progress = true;
  while (progress && !postponed_.empty()) {
    progress = false;
    std::vector<Eq> pending;
    pending.swap(postponed_);
    std::size_t before = bind_.size();
    for (const Eq& e : pending) solve(e.a, e.b, e.depth);
    if (bind_.size() != before) progress = true;
  }
}

UnifyOutcome Unifier::unify(const Term& s, const Term& t) {
  try {
    std::size_t before = bind_.size();
    solve(s, t, 0);
    if (bind_.size() != before && !postponed_.empty()) retry_postponed();
  } catch (const Clash&) {
    return UnifyOutcome::NoSolution;
  }
  return UnifyOutcome::Ok;
}

UnifResult unify_pattern(const UnifProblem& p) {
  Unifier u(Unifier::Mode::Case);
  for (const auto& [id, s] : p.supports) u.set_support(id, s);
  for (const auto& [a, b] : p.equations) {
    Ty ta = type_of(a), tb = type_of(b);
    if (ta != tb) throw TypeError("malformed unification problem: " + ta.str() + " vs " + tb.str());
  }
  UnifResult r;
  for (const auto& [a, b] : p.equations) {
    if (u.unify(a, b) == UnifyOutcome::NoSolution) {
      r.outcome = UnifyOutcome::NoSolution;
      return r;
    }
  }
  if (u.has_postponed()) {
    r.outcome = UnifyOutcome::NonPattern;
    return r;
  }
  r.outcome = UnifyOutcome::Ok;
  r.mgu = u.substitution();
  return r;
}

std::pair<VarInfo, Term> raise_over(const VarInfo& v, const std::vector<Nom>& cs) {
  if (cs.empty()) return {v, var(v)};
  std::vector<Ty> tys;
  std::vector<Term> args;
  for (const Nom& c : cs) {
    tys.push_back(c.ty);
    args.push_back(nominal(c));
  }
  VarInfo h = fresh_var(v.name, Ty::arrows(tys, v.ty), v.tag, v.ts);
  return {h, app(var(h), args)};
}

std::vector<Permutation> candidate_perms(const NomSet& a, const NomSet& c) {
  std::map<Ty, std::vector<Nom>> by_type;
  NomSet all = a;
  all.insert(c.begin(), c.end());
  for (const Nom& n : all) by_type[n.ty].push_back(n);
  std::vector<std::vector<Nom>> groups;
  for (auto& [ty, ns] : by_type) groups.push_back(ns);

  std::vector<Permutation> out;
  std::vector<std::vector<Nom>> cur = groups;
  // Odometer over per-type permutations, each group starting from sorted order.
  std::function<void(std::size_t)> rec = [&](std::size_t g) {
    if (g == groups.size()) {
      std::vector<Nom> from, to;
      for (std::size_t i = 0; i < groups.size(); ++i) {
        from.insert(from.end(), groups[i].begin(), groups[i].end());
        to.insert(to.end(), cur[i].begin(), cur[i].end());
      }
      out.push_back(Permutation::from_pairs(from, to));
      return;
    }
    std::vector<Nom> p = groups[g];
    do {
      cur[g] = p;
      rec(g + 1);
    } while (std::next_permutation(p.begin(), p.end()));
  };
  rec(0);
  return out;
}

}  // namespace nabla
