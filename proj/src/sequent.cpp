#include "nabla/sequent.hpp"

#include <algorithm>
#include <set>

#include "nabla/error.hpp"
#include "nabla/unify.hpp"

namespace nabla {

const Hyp* Sequent::hyp(const std::string& name) const {
  for (const Hyp& h : hyps)
    if (h.name == name) return &h;
  return nullptr;
}

std::string Sequent::add_hyp(const Formula& f) {
  for (const Hyp& h : hyps)
    if (alpha_equal(h.f, f)) return h.name;
  std::string name;
  do name = "H" + std::to_string(next_hyp++);
  while (hyp(name));
  hyps.push_back({name, f});
  return name;
}

std::string Sequent::add_named(const std::string& name, const Formula& f) {
  if (hyp(name)) throw TacticError("hypothesis name " + name + " is already in use");
  hyps.push_back({name, f});
  return name;
}

void Sequent::remove_hyp(const std::string& name) {
  hyps.erase(std::remove_if(hyps.begin(), hyps.end(), [&](const Hyp& h) { return h.name == name; }), hyps.end());
}

void Sequent::replace_hyp(const std::string& name, const Formula& f) {
  for (Hyp& h : hyps)
    if (h.name == name) h.f = f;
}

NomSet Sequent::support() const {
  NomSet out;
  for (const Hyp& h : hyps) collect_support(h.f, out);
  if (goal.valid()) collect_support(goal, out);
  return out;
}

std::map<std::string, Term> Sequent::names() const {
  std::map<std::string, Term> out;
  for (const VarInfo& v : vars) out[v.name] = var(v);
  return out;
}

std::string Sequent::unique_name(const std::string& base0) const {
  // Strip a numeric suffix so that renaming M1 yields M2 rather than M11.
  std::string base = base0;
  while (base.size() > 1 && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
  auto taken = [&](const std::string& n) {
    return std::any_of(vars.begin(), vars.end(), [&](const VarInfo& v) { return v.name == n; });
  };
  if (!taken(base0)) return base0;
  for (int i = 1;; ++i) {
    std::string n = base + std::to_string(i);
    if (!taken(n)) return n;
  }
}

VarInfo Sequent::new_var(const std::string& base, const Ty& ty) {
  VarInfo v = fresh_var(unique_name(base), ty, VarTag::Eigen);
  vars.push_back(v);
  return v;
}

void Sequent::apply(const Subst& s) {
  if (s.empty()) return;
  for (Hyp& h : hyps) h.f = subst(h.f, s);
  goal = subst(goal, s);
  refresh_vars();
}

void Sequent::apply(const Unifier& u, bool refresh) {
  for (Hyp& h : hyps) h.f = u.resolve(h.f);
  goal = u.resolve(goal);
  if (refresh) refresh_vars();
}

void Sequent::refresh_vars() {
  std::vector<VarInfo> seen;
  for (const Hyp& h : hyps) collect_vars(h.f, seen);
  collect_vars(goal, seen);
  std::set<std::uint64_t> occurring;
  for (const VarInfo& v : seen) occurring.insert(v.id);
  std::vector<VarInfo> kept;
  std::set<std::uint64_t> known;
  for (const VarInfo& v : vars)
    if (occurring.count(v.id)) {
      kept.push_back(v);
      known.insert(v.id);
    }
  vars = kept;
  Subst rename;
  for (const VarInfo& v : seen) {
    if (known.count(v.id)) continue;
    known.insert(v.id);
    std::string n = unique_name(v.name);
    if (n == v.name && v.tag == VarTag::Eigen) {
      vars.push_back(v);
    } else {
      VarInfo w = fresh_var(n, v.ty, v.tag == VarTag::Logic ? VarTag::Logic : VarTag::Eigen, v.ts);
      vars.push_back(w);
      rename[v.id] = var(w);
    }
  }
  if (!rename.empty()) {
    for (Hyp& h : hyps) h.f = subst(h.f, rename);
    goal = subst(goal, rename);
  }
}

}  // namespace nabla
