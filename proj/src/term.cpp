#include "nabla/term.hpp"

#include <algorithm>
#include <atomic>

#include "nabla/error.hpp"

namespace nabla {

struct Term::Node {
  Kind kind;
  VarInfo var;        // Var
  std::string name;   // Const name / Lam hint
  Ty ty;              // Var, Const, Nom type; Lam binder type
  int index = 0;      // Nom index, BVar index
  Term head;          // App
  std::vector<Term> args;
  Term body;          // Lam
};

namespace {

std::atomic<std::uint64_t> g_var_counter{1};

const std::vector<Term> kNoArgs;

}  // namespace

VarInfo fresh_var(std::string name, Ty ty, VarTag tag) {
  std::uint64_t id = g_var_counter.fetch_add(1);
  return VarInfo{id, std::move(name), std::move(ty), tag, id};
}

VarInfo fresh_var(std::string name, Ty ty, VarTag tag, std::uint64_t ts) {
  std::uint64_t id = g_var_counter.fetch_add(1);
  return VarInfo{id, std::move(name), std::move(ty), tag, ts};
}

Term::Kind Term::kind() const { return node_->kind; }
const VarInfo& Term::var() const { return node_->var; }
const std::string& Term::const_name() const { return node_->name; }
Nom Term::nom() const { return Nom{node_->index, node_->ty}; }
int Term::bvar_index() const { return node_->index; }
const Ty& Term::ty() const { return node_->ty; }
const Term& Term::head() const { return node_->head; }
const std::vector<Term>& Term::args() const { return node_->args; }
const Term& Term::body() const { return node_->body; }
const std::string& Term::hint() const { return node_->name; }
const std::vector<Term>& Term::spine_args() const { return is_app() ? node_->args : kNoArgs; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return a.var().id == b.var().id;
    case Term::Kind::Const: return a.const_name() == b.const_name();
    case Term::Kind::Nom: return a.nom() == b.nom();
    case Term::Kind::BVar: return a.bvar_index() == b.bvar_index();
    case Term::Kind::Lam: return a.body() == b.body();
    case Term::Kind::App: {
      if (a.args().size() != b.args().size()) return false;
      if (a.head() != b.head()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (a.args()[i] != b.args()[i]) return false;
      return true;
    }
  }
  return false;
}

Term var(const VarInfo& v) {
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::Var;
  n->var = v;
  n->ty = v.ty;
  return Term(std::move(n));
}

Term constant(std::string name, Ty ty) {
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::Const;
  n->name = std::move(name);
  n->ty = std::move(ty);
  return Term(std::move(n));
}

Term nominal(const Nom& nm) {
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::Nom;
  n->index = nm.index;
  n->ty = nm.ty;
  return Term(std::move(n));
}

Term bvar(int index) {
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::BVar;
  n->index = index;
  return Term(std::move(n));
}

Term lam(Ty ty, Term body, std::string hint) {
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::Lam;
  n->ty = std::move(ty);
  n->body = std::move(body);
  n->name = std::move(hint);
  return Term(std::move(n));
}

namespace {

// Substitutes `arg` (closed relative to depth 0) for index `depth` and lowers
// the indices above it.
Term subst_bvar(const Term& t, int depth, const Term& arg) {
  switch (t.kind()) {
    case Term::Kind::BVar: {
      int i = t.bvar_index();
      if (i == depth) return lift(arg, depth);
      if (i > depth) return bvar(i - 1);
      return t;
    }
    case Term::Kind::Var:
    case Term::Kind::Const:
    case Term::Kind::Nom: return t;
    case Term::Kind::Lam: return lam(t.ty(), subst_bvar(t.body(), depth + 1, arg), t.hint());
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(subst_bvar(a, depth, arg));
      return app(subst_bvar(t.head(), depth, arg), std::move(args));
    }
  }
  return t;
}

}  // namespace

Term app(Term head, std::vector<Term> args) {
  if (args.empty()) return head;
  if (head.is_app()) {
    std::vector<Term> merged = head.args();
    merged.insert(merged.end(), args.begin(), args.end());
    return app(head.head(), std::move(merged));
  }
  if (head.is_lam()) {
    Term reduced = instantiate(head.body(), args.front());
    args.erase(args.begin());
    return app(std::move(reduced), std::move(args));
  }
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::App;
  n->head = std::move(head);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term instantiate(const Term& body, const Term& arg) { return subst_bvar(body, 0, arg); }

Term lift(const Term& t, int by, int cutoff) {
  if (by == 0) return t;
  switch (t.kind()) {
    case Term::Kind::BVar:
      return t.bvar_index() >= cutoff ? bvar(t.bvar_index() + by) : t;
    case Term::Kind::Var:
    case Term::Kind::Const:
    case Term::Kind::Nom: return t;
    case Term::Kind::Lam: return lam(t.ty(), lift(t.body(), by, cutoff + 1), t.hint());
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(lift(a, by, cutoff));
      return app(lift(t.head(), by, cutoff), std::move(args));
    }
  }
  return t;
}

bool has_loose_bvar(const Term& t, int index) {
  switch (t.kind()) {
    case Term::Kind::BVar: return t.bvar_index() == index;
    case Term::Kind::Lam: return has_loose_bvar(t.body(), index + 1);
    case Term::Kind::App:
      if (has_loose_bvar(t.head(), index)) return true;
      for (const auto& a : t.args())
        if (has_loose_bvar(a, index)) return true;
      return false;
    default: return false;
  }
}

Term eta_reduce(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Lam: {
      Term body = eta_reduce(t.body());
      if (body.is_app() && body.args().back().is_bvar() && body.args().back().bvar_index() == 0) {
        std::vector<Term> rest(body.args().begin(), body.args().end() - 1);
        bool free = has_loose_bvar(body.head(), 0);
        for (const auto& a : rest) free = free || has_loose_bvar(a, 0);
        if (!free) {
          // Lower every index by one; index 0 does not occur.
          Term reduced = rest.empty() ? body.head() : app(body.head(), rest);
          return instantiate(reduced, bvar(0));
        }
      }
      return lam(t.ty(), body, t.hint());
    }
    case Term::Kind::App: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(eta_reduce(a));
      return app(t.head(), std::move(args));
    }
    default: return t;
  }
}

Ty type_of(const Term& t, const std::vector<Ty>& ctx) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
    case Term::Kind::Nom: return t.ty();
    case Term::Kind::BVar: {
      int i = t.bvar_index();
      if (i < 0 || i >= static_cast<int>(ctx.size())) throw TypeError("loose bound variable");
      return ctx[ctx.size() - 1 - i];
    }
    case Term::Kind::Lam: {
      auto inner = ctx;
      inner.push_back(t.ty());
      return Ty::arrow(t.ty(), type_of(t.body(), inner));
    }
    case Term::Kind::App: {
      Ty h = type_of(t.head(), ctx);
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (!h.is_arrow()) throw TypeError("application of a non-function");
        h = h.cod();
      }
      return h;
    }
  }
  return {};
}

Term apply_subst(const Term& t, const Subst& s) {
  if (s.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = s.find(t.var().id);
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::Const:
    case Term::Kind::Nom:
    case Term::Kind::BVar: return t;
    case Term::Kind::Lam: {
      Term b = apply_subst(t.body(), s);
      return b == t.body() ? t : lam(t.ty(), b, t.hint());
    }
    case Term::Kind::App: {
      bool changed = false;
      Term h = apply_subst(t.head(), s);
      changed = !(h == t.head());
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) {
        args.push_back(apply_subst(a, s));
        if (!changed && !(args.back() == a)) changed = true;
      }
      return changed ? app(h, std::move(args)) : t;
    }
  }
  return t;
}

void collect_vars(const Term& t, std::vector<VarInfo>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      for (const auto& v : out)
        if (v.id == t.var().id) return;
      out.push_back(t.var());
      return;
    case Term::Kind::Lam: collect_vars(t.body(), out); return;
    case Term::Kind::App:
      collect_vars(t.head(), out);
      for (const auto& a : t.args()) collect_vars(a, out);
      return;
    default: return;
  }
}

bool occurs_var(const Term& t, std::uint64_t id) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.var().id == id;
    case Term::Kind::Lam: return occurs_var(t.body(), id);
    case Term::Kind::App:
      if (occurs_var(t.head(), id)) return true;
      for (const auto& a : t.args())
        if (occurs_var(a, id)) return true;
      return false;
    default: return false;
  }
}

void collect_support(const Term& t, NomSet& out) {
  switch (t.kind()) {
    case Term::Kind::Nom: out.insert(t.nom()); return;
    case Term::Kind::Lam: collect_support(t.body(), out); return;
    case Term::Kind::App:
      collect_support(t.head(), out);
      for (const auto& a : t.args()) collect_support(a, out);
      return;
    default: return;
  }
}

NomSet support(const Term& t) {
  NomSet s;
  collect_support(t, s);
  return s;
}

namespace {

Term replace_nom_at(const Term& t, const Nom& n, const Term& by, int depth) {
  switch (t.kind()) {
    case Term::Kind::Nom: return t.nom() == n ? lift(by, depth) : t;
    case Term::Kind::Lam: return lam(t.ty(), replace_nom_at(t.body(), n, by, depth + 1), t.hint());
    case Term::Kind::App: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(replace_nom_at(a, n, by, depth));
      return app(replace_nom_at(t.head(), n, by, depth), std::move(args));
    }
    default: return t;
  }
}

}  // namespace

Term replace_nom(const Term& t, const Nom& n, const Term& by) { return replace_nom_at(t, n, by, 0); }

Term abstract_nom(const Term& t, const Nom& n) {
  // Make room for the new binder, then point n at it.
  return replace_nom_at(lift(t, 1), n, bvar(0), 0);
}

Permutation Permutation::swap(const Nom& a, const Nom& b) {
  if (a.ty != b.ty) throw TypeError("permutation must preserve types");
  Permutation p;
  if (a == b) return p;
  p.map_[a] = b;
  p.map_[b] = a;
  return p;
}

Permutation Permutation::from_pairs(const std::vector<Nom>& from, const std::vector<Nom>& to) {
  if (from.size() != to.size()) throw Error("permutation: domain and image differ in size");
  Permutation p;
  NomSet image;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (from[i].ty != to[i].ty) throw TypeError("permutation must preserve types");
    if (!image.insert(to[i]).second) throw Error("permutation: not injective");
    if (from[i] != to[i]) p.map_[from[i]] = to[i];
  }
  NomSet dom(from.begin(), from.end());
  if (dom != image) throw Error("permutation: domain and image differ");
  return p;
}

Nom Permutation::operator()(const Nom& n) const {
  auto it = map_.find(n);
  return it == map_.end() ? n : it->second;
}

Permutation Permutation::inverse() const {
  Permutation p;
  for (const auto& [k, v] : map_) p.map_[v] = k;
  return p;
}

bool Permutation::is_identity() const { return map_.empty(); }

Term apply_perm(const Permutation& p, const Term& t) {
  if (p.is_identity()) return t;
  switch (t.kind()) {
    case Term::Kind::Nom: return nominal(p(t.nom()));
    case Term::Kind::Lam: return lam(t.ty(), apply_perm(p, t.body()), t.hint());
    case Term::Kind::App: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(apply_perm(p, a));
      return app(apply_perm(p, t.head()), std::move(args));
    }
    default: return t;
  }
}

Nom fresh_nominal(const Ty& ty, const NomSet& avoid, const std::vector<int>* order) {
  if (order) {
    for (int i : *order) {
      Nom n{i, ty};
      if (!avoid.count(n)) return n;
    }
  }
  for (int i = 1;; ++i) {
    if (order && std::find(order->begin(), order->end(), i) != order->end()) continue;
    Nom n{i, ty};
    if (!avoid.count(n)) return n;
  }
}

RawTerm RawTerm::of(Term atom) {
  RawTerm r;
  r.kind = Kind::Atom;
  r.atom = std::move(atom);
  return r;
}

RawTerm RawTerm::bv(int i) {
  RawTerm r;
  r.kind = Kind::BVar;
  r.index = i;
  return r;
}

RawTerm RawTerm::ap(RawTerm f, RawTerm a) {
  RawTerm r;
  r.kind = Kind::App;
  r.fn = std::make_shared<RawTerm>(std::move(f));
  r.arg = std::make_shared<RawTerm>(std::move(a));
  return r;
}

RawTerm RawTerm::abs(Ty ty, RawTerm body, std::string hint) {
  RawTerm r;
  r.kind = Kind::Lam;
  r.ty = std::move(ty);
  r.hint = std::move(hint);
  r.body = std::make_shared<RawTerm>(std::move(body));
  return r;
}

Ty raw_type_of(const RawTerm& t, const std::vector<Ty>& ctx) {
  switch (t.kind) {
    case RawTerm::Kind::Atom: return type_of(t.atom, ctx);
    case RawTerm::Kind::BVar:
      if (t.index < 0 || t.index >= static_cast<int>(ctx.size())) throw TypeError("loose bound variable");
      return ctx[ctx.size() - 1 - t.index];
    case RawTerm::Kind::Lam: {
      auto inner = ctx;
      inner.push_back(t.ty);
      return Ty::arrow(t.ty, raw_type_of(*t.body, inner));
    }
    case RawTerm::Kind::App: {
      Ty f = raw_type_of(*t.fn, ctx);
      Ty a = raw_type_of(*t.arg, ctx);
      if (!f.is_arrow()) throw TypeError("application of a term of type " + f.str());
      if (f.dom() != a) throw TypeError("argument type " + a.str() + " does not match " + f.dom().str());
      return f.cod();
    }
  }
  return {};
}

namespace {

Term normalize_checked(const RawTerm& t, const std::vector<Ty>& ctx) {
  switch (t.kind) {
    case RawTerm::Kind::Atom: return t.atom;
    case RawTerm::Kind::BVar: return bvar(t.index);
    case RawTerm::Kind::Lam: {
      auto inner = ctx;
      inner.push_back(t.ty);
      return lam(t.ty, normalize_checked(*t.body, inner), t.hint);
    }
    case RawTerm::Kind::App: return app(normalize_checked(*t.fn, ctx), normalize_checked(*t.arg, ctx));
  }
  return {};
}

}  // namespace

Term normalize(const RawTerm& t, const std::vector<Ty>& ctx) {
  raw_type_of(t, ctx);
  return normalize_checked(t, ctx);
}

}  // namespace nabla
