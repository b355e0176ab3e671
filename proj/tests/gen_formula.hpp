// Random closed formulas over the stlc signature, as source text, plus the
// kernel-level derivations used for the nabla structural checks.
#pragma once
#include <random>
#include <string>
#include <vector>

#include "nabla/kernel.hpp"

namespace genf {

using namespace nabla;

struct FormulaGen {
  std::mt19937 rng;
  int next = 0;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::string term(const std::vector<std::string>& vs, int d) {
    int k = pick(d > 0 ? 4 : 2);
    if (k == 0 && !vs.empty()) return vs[pick(static_cast<int>(vs.size()))];
    if (k <= 1) return "(abs i u\\u)";
    if (k == 2) return "(app " + term(vs, d - 1) + " " + term(vs, d - 1) + ")";
    return "(abs (arr i i) u\\" + term(vs, d - 1) + ")";
  }

  std::string atom(const std::vector<std::string>& vs) {
    switch (pick(4)) {
      case 0: return "{of " + term(vs, 1) + (pick(2) ? " i}" : " (arr i i)}");
      case 1: return term(vs, 1) + " = " + term(vs, 1);
      case 2: return "{value " + term(vs, 1) + "}";
      default: return "name " + term(vs, 1);
    }
  }

  /// A formula whose free term variables are among vs.
  std::string formula(std::vector<std::string> vs, int d) {
    if (d == 0) return atom(vs);
    switch (pick(6)) {
      case 0: return "(" + formula(vs, d - 1) + " /\\ " + formula(vs, d - 1) + ")";
      case 1: return "(" + formula(vs, d - 1) + " \\/ " + formula(vs, d - 1) + ")";
      case 2: return "(" + formula(vs, d - 1) + " -> " + formula(vs, d - 1) + ")";
      case 3:
      case 4: {
        std::string z = "z" + std::to_string(next++);
        vs.push_back(z);
        return std::string("(") + (pick(2) ? "forall " : "exists ") + "(" + z + " : tm), " + formula(vs, d - 1) + ")";
      }
      default: return atom(vs);
    }
  }
};

/// Derives `hyp -> goal` at the kernel level: implication right, left rules on
/// the nabla hypothesis, nabla right rules on the goal, then bounded search.
inline bool derive_imp(const KernelEnv& env, const Formula& imp, int depth = 4) {
  Sequent s;
  s.goal = imp;
  std::vector<Sequent> r = rule_right(s, env);
  if (r.size() != 1) return false;
  Sequent t = r[0];
  std::string h = t.hyps.back().name;
  if (t.hyp(h)->f.is(Formula::Kind::Nabla)) {
    std::vector<Sequent> l = rule_left(t, env, h);
    if (l.size() != 1) return false;
    t = l[0];
  }
  while (t.goal.is(Formula::Kind::Nabla)) t = rule_right(t, env)[0];
  return Search(env, depth).prove(t);
}

}  // namespace genf
