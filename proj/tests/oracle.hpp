// Independent reference implementations used by the tests: a naive
// leftmost-outermost beta reducer and a brute-force unifier over a bounded
// term universe. None of this goes through the unifier under test.
#pragma once
#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>
#include "nabla/term.hpp"
#include "nabla/unify.hpp"

namespace oracle {

using namespace nabla;

// ------------------------------------------------------------------ beta

/// Shifts loose indices >= cutoff in a raw term.
inline RawTerm raw_shift(const RawTerm& t, int by, int cutoff) {
  switch (t.kind) {
    case RawTerm::Kind::Atom: return t;
    case RawTerm::Kind::BVar: return t.index >= cutoff ? RawTerm::bv(t.index + by) : t;
    case RawTerm::Kind::App: return RawTerm::ap(raw_shift(*t.fn, by, cutoff), raw_shift(*t.arg, by, cutoff));
    case RawTerm::Kind::Lam: return RawTerm::abs(t.ty, raw_shift(*t.body, by, cutoff + 1), t.hint);
  }
  return t;
}

/// body[j := s] for the binder at index j, lowering the indices above it.
inline RawTerm raw_subst(const RawTerm& body, int j, const RawTerm& s) {
  switch (body.kind) {
    case RawTerm::Kind::Atom: return body;
    case RawTerm::Kind::BVar:
      if (body.index == j) return raw_shift(s, j, 0);
      return body.index > j ? RawTerm::bv(body.index - 1) : body;
    case RawTerm::Kind::App: return RawTerm::ap(raw_subst(*body.fn, j, s), raw_subst(*body.arg, j, s));
    case RawTerm::Kind::Lam: return RawTerm::abs(body.ty, raw_subst(*body.body, j + 1, s), body.hint);
  }
  return body;
}

/// One leftmost-outermost beta step; false when t is normal.
inline bool raw_step(const RawTerm& t, RawTerm& out) {
  switch (t.kind) {
    case RawTerm::Kind::Atom:
    case RawTerm::Kind::BVar: return false;
    case RawTerm::Kind::App: {
      if (t.fn->kind == RawTerm::Kind::Lam) {
        out = raw_subst(*t.fn->body, 0, *t.arg);
        return true;
      }
      RawTerm r;
      if (raw_step(*t.fn, r)) {
        out = RawTerm::ap(r, *t.arg);
        return true;
      }
      if (raw_step(*t.arg, r)) {
        out = RawTerm::ap(*t.fn, r);
        return true;
      }
      return false;
    }
    case RawTerm::Kind::Lam: {
      RawTerm r;
      if (!raw_step(*t.body, r)) return false;
      out = RawTerm::abs(t.ty, r, t.hint);
      return true;
    }
  }
  return false;
}

/// Converts a redex-free raw term; app() never reduces here because no
/// application in a normal term has an abstraction in head position.
inline Term raw_to_term(const RawTerm& t) {
  switch (t.kind) {
    case RawTerm::Kind::Atom: return t.atom;
    case RawTerm::Kind::BVar: return bvar(t.index);
    case RawTerm::Kind::Lam: return lam(t.ty, raw_to_term(*t.body), t.hint);
    case RawTerm::Kind::App: {
      std::vector<RawTerm> args;
      const RawTerm* h = &t;
      while (h->kind == RawTerm::Kind::App) {
        args.push_back(*h->arg);
        h = h->fn.get();
      }
      std::reverse(args.begin(), args.end());
      std::vector<Term> as;
      for (const auto& a : args) as.push_back(raw_to_term(a));
      return app(raw_to_term(*h), as);
    }
  }
  return {};
}

inline std::optional<Term> naive_normalize(RawTerm t, int max_steps = 10000) {
  RawTerm next;
  for (int i = 0; i < max_steps; ++i) {
    if (!raw_step(t, next)) return raw_to_term(t);
    t = next;
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ small universe

/// Two constants (a : i, f : i -> i -> i) and two nominals of type i.
struct Universe {
  Ty i = Ty::base("i");
  Ty ii = Ty::arrow(Ty::base("i"), Ty::base("i"));
  Term a = constant("a", Ty::base("i"));
  Term f = constant("f", Ty::arrows({Ty::base("i"), Ty::base("i")}, Ty::base("i")));
  Nom n1{1, Ty::base("i")}, n2{2, Ty::base("i")};
  std::vector<Nom> noms() const { return {n1, n2}; }
};

/// All terms of type i with depth <= d (atoms have depth 1) over the atoms.
inline std::vector<Term> closed_terms(const Universe& u, const std::vector<Term>& atoms, int d) {
  std::vector<Term> level = atoms;
  for (int k = 2; k <= d; ++k) {
    std::vector<Term> next = atoms;
    for (const Term& x : level)
      for (const Term& y : level) next.push_back(app(u.f, {x, y}));
    level = std::move(next);
  }
  return level;
}

struct PVar {
  VarInfo v;
  NomSet supp;
};

struct Problem {
  std::vector<PVar> vars;
  std::vector<std::pair<Term, Term>> eqs;
  UnifProblem as_unif() const {
    UnifProblem p;
    p.equations = eqs;
    for (const auto& x : vars)
      if (!x.supp.empty()) p.supports[x.v.id] = x.supp;
    return p;
  }
};

/// Candidate instantiations of a problem variable within depth d.
inline std::vector<Term> candidates(const Universe& u, const PVar& x, int d) {
  std::vector<Term> atoms{u.a};
  for (const Nom& n : x.supp) atoms.push_back(nominal(n));
  if (x.v.ty == u.i) return closed_terms(u, atoms, d);
  atoms.push_back(bvar(0));
  std::vector<Term> out;
  for (const Term& b : closed_terms(u, atoms, d)) out.push_back(lam(u.i, b));
  return out;
}

inline bool same(const Term& s, const Term& t) { return eta_reduce(s) == eta_reduce(t); }

inline bool solves(const Problem& p, const Subst& th) {
  for (const auto& [l, r] : p.eqs)
    if (!same(apply_subst(l, th), apply_subst(r, th))) return false;
  return true;
}

/// Every ground unifier whose instantiations lie in the depth-d universe.
/// Equations are checked as soon as their variables are assigned.
inline std::vector<Subst> brute_force(const Universe& u, const Problem& p, int d) {
  std::vector<std::vector<Term>> cands;
  for (const auto& x : p.vars) cands.push_back(candidates(u, x, d));
  // Equation e can be checked once the last variable it mentions is assigned.
  std::vector<std::vector<std::size_t>> ready(p.vars.size());
  for (std::size_t e = 0; e < p.eqs.size(); ++e) {
    std::size_t last = 0;
    for (std::size_t k = 0; k < p.vars.size(); ++k)
      if (occurs_var(p.eqs[e].first, p.vars[k].v.id) || occurs_var(p.eqs[e].second, p.vars[k].v.id)) last = k;
    ready[last].push_back(e);
  }
  std::vector<Subst> out;
  Subst th;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == p.vars.size()) {
      out.push_back(th);
      return;
    }
    for (const Term& c : cands[k]) {
      th[p.vars[k].v.id] = c;
      bool ok = true;
      for (std::size_t e : ready[k]) {
        const auto& [l, r] = p.eqs[e];
        if (!same(apply_subst(l, th), apply_subst(r, th))) {
          ok = false;
          break;
        }
      }
      if (ok) rec(k + 1);
    }
    th.erase(p.vars[k].v.id);
  };
  rec(0);
  return out;
}

// ------------------------------------------------------------------ factoring

/// Matches pattern p (free variables flexible, applied to distinct bound
/// variables or nominals) against the ground term t, extending rho.
inline bool match(const Term& p0, const Term& t0, int depth, Subst& rho) {
  Term p = apply_subst(p0, rho), t = t0;
  if (p.is_lam()) {
    if (!t.is_lam()) t = lam(p.ty(), app(lift(t, 1), bvar(0)));
    return match(p.body(), t.body(), depth + 1, rho);
  }
  const Term& h = p.spine_head();
  if (h.is_var()) {
    const auto& args = p.spine_args();
    const int k = static_cast<int>(args.size());
    auto pos = [&](const Term& a) {
      for (int q = 0; q < k; ++q)
        if (args[q] == a) return q;
      return -1;
    };
    bool escape = false;
    std::function<Term(const Term&, int)> abs = [&](const Term& u, int inner) -> Term {
      if (u.is_lam()) return lam(u.ty(), abs(u.body(), inner + 1), u.hint());
      if (u.is_app()) {
        std::vector<Term> as;
        for (const auto& a : u.args()) as.push_back(abs(a, inner));
        return app(abs(u.head(), inner), as);
      }
      if (u.is_bvar()) {
        int j = u.bvar_index();
        if (j < inner) return u;
        int q = pos(bvar(j - inner));
        if (q < 0) {
          escape = true;
          return u;
        }
        return bvar(inner + k - 1 - q);
      }
      if (u.is_nom()) {
        int q = pos(u);
        return q < 0 ? u : bvar(inner + k - 1 - q);
      }
      return u;
    };
    Term body = abs(t, 0);
    if (escape) return false;
    std::vector<Ty> tys = h.var().ty.arg_types();
    Term cand = body;
    for (int q = k - 1; q >= 0; --q) cand = lam(tys[q], cand);
    rho[h.var().id] = cand;
    return true;
  }
  if (t.is_lam()) return false;
  if (!(h == t.spine_head()) || p.spine_args().size() != t.spine_args().size()) return false;
  for (std::size_t q = 0; q < p.spine_args().size(); ++q)
    if (!match(p.spine_args()[q], t.spine_args()[q], depth, rho)) return false;
  return true;
}

/// theta = rho . mgu on the problem variables for some rho; rho is built by
/// matching and then checked by direct substitution.
inline bool factors_through(const Problem& p, const Subst& mgu, const Subst& theta) {
  Subst rho;
  for (const auto& x : p.vars) {
    auto it = mgu.find(x.v.id);
    Term s = it == mgu.end() ? var(x.v) : it->second;
    if (!match(s, theta.at(x.v.id), 0, rho)) return false;
  }
  for (const auto& x : p.vars) {
    auto it = mgu.find(x.v.id);
    Term s = it == mgu.end() ? var(x.v) : it->second;
    if (!same(apply_subst(s, rho), theta.at(x.v.id))) return false;
  }
  return true;
}

// ------------------------------------------------------------------ generators

/// Random pattern problem: at most one variable of type i -> i, which only
/// ever appears applied to a bound variable or to a nominal outside its
/// support. Terms have depth <= 3.
inline Problem random_problem(const Universe& u, std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  Problem p;
  const int nv = 1 + pick(2);
  bool have_fun = false;
  for (int k = 0; k < nv; ++k) {
    bool fun = !have_fun && pick(2) == 0;
    have_fun = have_fun || fun;
    PVar x{fresh_var(fun ? "F" : (k == 0 ? "X" : "Y"), fun ? u.ii : u.i, VarTag::Eigen), {}};
    for (const Nom& n : u.noms())
      if (pick(2) == 0) x.supp.insert(n);
    p.vars.push_back(x);
  }
  // Leaves available at binder depth `bound` (0 or 1).
  auto leaf = [&](bool bound) -> Term {
    for (;;) {
      switch (pick(5)) {
        case 0: return u.a;
        case 1: return nominal(pick(2) == 0 ? u.n1 : u.n2);
        case 2:
          if (bound) return bvar(0);
          break;
        default: {
          const PVar& x = p.vars[pick(static_cast<int>(p.vars.size()))];
          if (x.v.ty == u.i) return var(x.v);
          std::vector<Term> args;
          if (bound) args.push_back(bvar(0));
          for (const Nom& n : u.noms())
            if (!x.supp.count(n)) args.push_back(nominal(n));
          if (args.empty()) break;
          return app(var(x.v), args[pick(static_cast<int>(args.size()))]);
        }
      }
    }
  };
  std::function<Term(int, bool)> gen = [&](int d, bool bound) -> Term {
    if (d <= 1 || pick(3) == 0) return leaf(bound);
    return app(u.f, {gen(d - 1, bound), gen(d - 1, bound)});
  };
  const int ne = 1 + pick(2);
  for (int e = 0; e < ne; ++e) {
    bool bound = pick(3) == 0;
    Term l = gen(3, bound), r = gen(3, bound);
    // Half of the equations are solvable by construction: the right side
    // is an instance of the left one.
    if (pick(2) == 0) {
      Subst th;
      for (const auto& x : p.vars)
        if (pick(2) == 0) {
          std::vector<Term> cs = candidates(u, x, 2);
          th[x.v.id] = cs[pick(static_cast<int>(cs.size()))];
        }
      r = apply_subst(l, th);
    }
    if (bound) {
      l = lam(u.i, l);
      r = lam(u.i, r);
    }
    p.eqs.emplace_back(l, r);
  }
  return p;
}

}  // namespace oracle
