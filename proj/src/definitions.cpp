#include "nabla/definitions.hpp"

#include <algorithm>
#include <functional>

#include "nabla/error.hpp"
#include "nabla/printer.hpp"

namespace nabla {

std::string TrustEntry::str() const {
  switch (kind) {
    case Kind::Override: return "override " + subject + (detail.empty() ? "" : ": " + detail);
    case Kind::Inst: return "inst in " + subject + ": " + detail;
    case Kind::Cut: return "cut in " + subject + ": " + detail;
    case Kind::Monotone: return "monotone in " + subject + ": " + detail;
  }
  return "";
}

std::string Definitions::pred_of(const Term& atom) {
  const Term& h = atom.spine_head();
  return h.is_const() ? h.const_name() : std::string();
}

const DefinedPred* Definitions::find(const std::string& name) const {
  auto it = preds_.find(name);
  return it == preds_.end() ? nullptr : &it->second;
}

bool Definitions::same_block(const std::string& a, const std::string& b) const {
  const DefinedPred* pa = find(a);
  const DefinedPred* pb = find(b);
  return pa && pb && pa->block == pb->block;
}

void Definitions::add(const std::vector<std::pair<std::string, Ty>>& preds, std::vector<Clause> clauses,
                      bool override_strat) {
  std::map<std::string, Ty> names;
  for (const auto& [n, ty] : preds) {
    if (preds_.count(n)) throw DefinitionError("predicate " + n + " is already defined");
    if (ty.result() != Ty::prop()) throw DefinitionError("predicate " + n + " must have result type prop");
    names[n] = ty;
  }
  for (const Clause& c : clauses) {
    std::string p = pred_of(c.head);
    if (!names.count(p))
      throw DefinitionError("line " + std::to_string(c.line) + ": clause head " + print_term(c.head) +
                            " does not belong to this definition");
    if (!support(c.head).empty() || !support(c.body).empty())
      throw DefinitionError("line " + std::to_string(c.line) + ": nominal constants may not appear in clauses");
    // Body variables must be bound by the clause.
    std::vector<VarInfo> fv;
    collect_vars(c.body, fv);
    collect_vars(c.head, fv);
    for (const VarInfo& v : fv) {
      bool ok = std::any_of(c.vars.begin(), c.vars.end(), [&](const VarInfo& x) { return x.id == v.id; }) ||
                std::any_of(c.nablas.begin(), c.nablas.end(), [&](const VarInfo& x) { return x.id == v.id; });
      if (!ok) throw DefinitionError("line " + std::to_string(c.line) + ": unbound variable " + v.name);
    }
  }

  // Stratification: a negative occurrence must refer to a strictly lower level.
  int level = 0;
  std::vector<std::string> violations;
  std::function<void(const Formula&, bool)> walk = [&](const Formula& f, bool pos) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::And:
      case K::Or:
        walk(f.left(), pos);
        walk(f.right(), pos);
        return;
      case K::Imp:
        walk(f.left(), !pos);
        walk(f.right(), pos);
        return;
      case K::Forall:
      case K::Exists:
      case K::Nabla: walk(f.body(), pos); return;
      case K::Atom: {
        std::string q = pred_of(f.atom());
        if (names.count(q)) {
          if (!pos) violations.push_back(q);
          return;
        }
        const DefinedPred* d = find(q);
        int lq = d ? d->level : 0;
        level = std::max(level, pos ? lq : lq + 1);
        return;
      }
      case K::Obj: {
        const DefinedPred* d = find("seq");
        int lq = d ? d->level : 0;
        level = std::max(level, pos ? lq : lq + 1);
        return;
      }
      default: return;
    }
  };
  for (const Clause& c : clauses) walk(c.body, true);
  if (!violations.empty()) {
    std::string who = preds.size() == 1 ? preds[0].first : "block";
    if (!override_strat)
      throw DefinitionError("definition of " + who + " is not stratified: negative occurrence of " + violations[0] +
                            " (use 'Define override' to accept it as a trusted obligation)");
    std::string subject;
    for (const auto& [n, ty] : preds) subject += (subject.empty() ? "" : ", ") + n;
    overrides_.push_back(TrustEntry{TrustEntry::Kind::Override, subject, "negative occurrence of " + violations[0]});
  }

  int block = ++blocks_;
  for (const auto& [n, ty] : preds) {
    DefinedPred d;
    d.name = n;
    d.ty = ty;
    d.level = level;
    d.override_strat = override_strat;
    d.block = block;
    for (const Clause& c : clauses)
      if (pred_of(c.head) == n) d.clauses.push_back(c);
    preds_[n] = std::move(d);
  }
}

ClauseInstance instantiate_clause(const Clause& c, const std::vector<Nom>& over, const std::vector<Nom>& nabla_images,
                                  VarTag tag) {
  ClauseInstance out;
  Subst s;
  std::vector<Term> args;
  std::vector<Ty> tys;
  for (const Nom& n : over) {
    args.push_back(nominal(n));
    tys.push_back(n.ty);
  }
  for (const VarInfo& x : c.vars) {
    VarInfo h = fresh_var(x.name, Ty::arrows(tys, x.ty), tag);
    out.fresh.push_back(h);
    s[x.id] = args.empty() ? var(h) : app(var(h), args);
  }
  // Nabla variables stay abstract when no images are given.
  if (nabla_images.size() == c.nablas.size())
    for (std::size_t i = 0; i < c.nablas.size(); ++i) s[c.nablas[i].id] = nominal(nabla_images[i]);
  out.head = apply_subst(c.head, s);
  out.body = subst(c.body, s);
  return out;
}

Clause raise_clause(const Clause& c, const std::vector<Nom>& a) {
  Clause out = c;
  if (a.empty()) return out;
  ClauseInstance inst = instantiate_clause(c, a, {}, VarTag::Bound);
  out.vars = inst.fresh;
  out.head = inst.head;
  out.body = inst.body;
  return out;
}

std::vector<std::vector<Nom>> nabla_assignments(const std::vector<VarInfo>& zs, const std::vector<Nom>& pool,
                                                const std::vector<Nom>& fresh) {
  std::vector<std::vector<Nom>> out;
  std::vector<Nom> cur;
  std::vector<bool> used_pool(pool.size(), false), used_fresh(fresh.size(), false);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == zs.size()) {
      out.push_back(cur);
      return;
    }
    const Ty& ty = zs[i].ty;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (used_pool[j] || pool[j].ty != ty) continue;
      used_pool[j] = true;
      cur.push_back(pool[j]);
      rec(i + 1);
      cur.pop_back();
      used_pool[j] = false;
    }
    // Only the first unused fresh nominal of this type.
    for (std::size_t j = 0; j < fresh.size(); ++j) {
      if (used_fresh[j] || fresh[j].ty != ty) continue;
      used_fresh[j] = true;
      cur.push_back(fresh[j]);
      rec(i + 1);
      cur.pop_back();
      used_fresh[j] = false;
      break;
    }
  };
  rec(0);
  return out;
}

}  // namespace nabla
