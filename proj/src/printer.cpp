#include "nabla/printer.hpp"

#include <set>
#include <sstream>

#include "nabla/signature.hpp"

namespace nabla {
namespace {

class TermPrinter {
 public:
  TermPrinter(Style style, std::set<std::string> used) : style_(style), used_(std::move(used)) {}

  // Levels: 0 top (lambda, infix allowed), 1 infix operand, 2 application argument.
  std::string term(const Term& t, int level) {
    switch (t.kind()) {
      case Term::Kind::Var: return t.var().tag == VarTag::Logic ? "?" + t.var().name : t.var().name;
      case Term::Kind::Const: return const_name(t);
      case Term::Kind::Nom: return t.nom().str();
      case Term::Kind::BVar: {
        int i = t.bvar_index();
        if (i < static_cast<int>(names_.size())) return names_[names_.size() - 1 - static_cast<std::size_t>(i)];
        return "#" + std::to_string(i);
      }
      case Term::Kind::Lam: {
        std::string name = bind(t.hint());
        std::string body = term(t.body(), 0);
        unbind();
        return wrap(name + "\\ " + body, level >= 1);
      }
      case Term::Kind::App: return application(t, level);
    }
    return "?";
  }

  // Specification goal syntax.
  std::string goal(const Term& g, int level) {
    const Term& h = g.spine_head();
    const auto& args = g.spine_args();
    if (h.is_const()) {
      const std::string& n = h.const_name();
      if (n == builtin::kAtm && args.size() == 1) return term(args[0], level);
      if (n == builtin::kAnd && args.size() == 2)
        return wrap(goal(args[0], 1) + " & " + goal(args[1], 0), level >= 1);
      if (n == builtin::kImp && args.size() == 2) {
        bool conj_right = is_conj(args[1]);
        std::string r = goal(args[1], conj_right ? 1 : 0);
        return wrap(term(args[0], 1) + " => " + r, level >= 1);
      }
      if (builtin::is_pi_name(n) && args.size() == 1 && args[0].is_lam()) {
        std::string name = bind(args[0].hint());
        std::string body = goal(args[0].body(), 0);
        unbind();
        return wrap("pi " + name + "\\ " + body, level >= 1);
      }
    }
    return term(g, level);
  }

 private:
  static bool is_conj(const Term& g) {
    return g.spine_head().is_const() && g.spine_head().const_name() == builtin::kAnd && g.spine_args().size() == 2;
  }

  std::string const_name(const Term& t) const {
    if (builtin::is_pi_name(t.const_name())) return "pi";
    return t.const_name();
  }

  std::string wrap(const std::string& s, bool parens) const {
    if (style_ == Style::Wire || parens) return "(" + s + ")";
    return s;
  }

  std::string application(const Term& t, int level) {
    const Term& h = t.head();
    if (h.is_const() && h.const_name() == builtin::kCons && t.args().size() == 2)
      return wrap(term(t.args()[0], 1) + " :: " + term(t.args()[1], 0), level >= 1);
    std::string s = term(h, 2);
    for (const auto& a : t.args()) s += " " + term(a, 2);
    return wrap(s, level >= 2);
  }

  std::string bind(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    std::string name = base;
    for (int i = 1; used_.count(name) || in_scope(name); ++i) name = base + std::to_string(i);
    names_.push_back(name);
    return name;
  }
  void unbind() { names_.pop_back(); }
  bool in_scope(const std::string& n) const {
    for (const auto& s : names_)
      if (s == n) return true;
    return false;
  }

  Style style_;
  std::set<std::string> used_;
  std::vector<std::string> names_;
};

void used_names(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: out.insert(t.var().name); return;
    case Term::Kind::Const: out.insert(t.const_name()); return;
    case Term::Kind::Nom: out.insert(t.nom().str()); return;
    case Term::Kind::Lam: used_names(t.body(), out); return;
    case Term::Kind::App:
      used_names(t.head(), out);
      for (const auto& a : t.args()) used_names(a, out);
      return;
    default: return;
  }
}

std::set<std::string> used_names(const Term& t) {
  std::set<std::string> s;
  used_names(t, s);
  return s;
}

class FormulaPrinter {
 public:
  explicit FormulaPrinter(Style style) : style_(style) {}

  // Levels: 0 top, 1 disjunct, 2 conjunct, 3 operand needing parens for any connective.
  std::string formula(const Formula& f, int level) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True: return "true";
      case K::False: return "false";
      case K::And: return wrap(formula(f.left(), 3) + " /\\ " + formula(f.right(), 2), level > 2);
      case K::Or: return wrap(formula(f.left(), 2) + " \\/ " + formula(f.right(), 1), level > 1);
      case K::Imp: return wrap(formula(f.left(), 1) + " -> " + formula(f.right(), 0), level > 0);
      case K::Forall:
      case K::Exists:
      case K::Nabla: {
        std::string q = f.kind() == K::Forall ? "forall" : f.kind() == K::Exists ? "exists" : "nabla";
        // A binder must not print like a free variable of its body.
        std::vector<VarInfo> fv;
        collect_vars(f.body(), fv);
        std::set<std::string> taken;
        for (const auto& v : fv) taken.insert(v.name);
        Subst ren;
        for (const auto& b : f.binders()) {
          std::string name = b.name;
          for (int i = 1; taken.count(name); ++i) name = b.name + std::to_string(i);
          taken.insert(name);
          // Wire output carries binder types so that it re-elaborates alone.
          q += style_ == Style::Wire ? " (" + name + " : " + b.ty.str() + ")" : " " + name;
          if (name != b.name) {
            ren[b.id] = var(fresh_var(name, b.ty, VarTag::Bound));
          }
        }
        Formula body = ren.empty() ? f.body() : subst(f.body(), ren);
        return wrap(q + ", " + formula(body, 0), level > 0);
      }
      case K::Eq: return wrap(term(f.lhs(), 1) + " = " + term(f.rhs(), 1), level > 2);
      case K::Atom: return term(f.atom(), 0) + suffix(f.restriction());
      case K::Obj: {
        std::set<std::string> used = used_names(f.context());
        used_names(f.goal(), used);
        TermPrinter tp(style_, used);
        std::string g = tp.goal(f.goal(), 0);
        std::string s = builtin::is_nil(f.context()) ? "{" + g + "}" : "{" + tp.term(f.context(), 0) + " |- " + g + "}";
        return s + suffix(f.restriction());
      }
    }
    return "?";
  }

 private:
  std::string term(const Term& t, int level) {
    TermPrinter tp(style_, used_names(t));
    return tp.term(t, level);
  }
  std::string wrap(const std::string& s, bool parens) const {
    if (parens || (style_ == Style::Wire)) return "(" + s + ")";
    return s;
  }
  static std::string suffix(const Restriction& r) { return r.is_none() ? "" : " " + r.str(); }

  Style style_;
};

}  // namespace

std::string print_term(const Term& t, Style style) {
  TermPrinter p(style, used_names(t));
  return p.term(t, 0);
}

std::string print_goal(const Term& g, Style style) {
  TermPrinter p(style, used_names(g));
  return p.goal(g, 0);
}

std::string print_formula(const Formula& f, Style style) {
  FormulaPrinter p(style);
  return p.formula(f, 0);
}

}  // namespace nabla
