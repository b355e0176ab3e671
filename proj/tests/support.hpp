// Helpers shared by the tests: a session over the corpus specification and
// parsing of formulas and goals in its signature.
#pragma once
#include <string>

#include "doctest.h"
#include "nabla/elaborate.hpp"
#include "nabla/parser.hpp"
#include "nabla/session.hpp"

namespace support {

using namespace nabla;

inline std::string corpus(const std::string& f) { return std::string(NABLA_CORPUS) + "/" + f; }

/// Runs text that must succeed.
inline void run(Session& s, const std::string& text) {
  ExecResult r = s.exec(text, "<test>", NABLA_CORPUS);
  INFO(text);
  INFO(r.error);
  REQUIRE(r.ok());
}

/// A session with stlc.spec loaded and the specification logic installed.
inline Session stlc(SessionOptions o = {}) {
  Session s(o);
  run(s, "Specification \"stlc.spec\".");
  run(s, "Query type i.");
  return s;
}

inline Formula formula(const Session& s, const std::string& text) {
  Parser p = Parser::of(text);
  PFormula f = p.formula();
  return Elaborator::formula_in(s.signature(), f, {});
}

inline Term goal(const Session& s, const std::string& text) {
  Parser p = Parser::of(text);
  PExpr e = p.goal();
  Elaborator el(s.signature());
  el.add_goal(e);
  el.solve();
  return el.goal(e);
}

inline Term term(const Session& s, const std::string& text) {
  Parser p = Parser::of(text);
  return Elaborator::term_in(s.signature(), p.term(), {});
}

inline KernelEnv env(const Session& s) {
  KernelEnv e;
  e.sig = &s.signature();
  e.defs = &s.definitions();
  return e;
}

}  // namespace support
