#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nabla/formula.hpp"

namespace nabla {

struct Token {
  enum class Kind { Ident, Number, String, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0;
  std::size_t begin = 0, end = 0;  // byte offsets in the source
  bool is(const char* sym) const { return kind == Kind::Sym && text == sym; }
  bool is_word(const char* w) const { return kind == Kind::Ident && text == w; }
};

/// Splits source text into tokens; `%` starts a line comment, `/* */` a block comment.
std::vector<Token> tokenize(const std::string& src, int first_line = 1);

/// Untyped pre-terms as written by the user.
struct PExpr {
  enum class Kind { Ident, App, Lam, Cons, GoalAnd, GoalImp, GoalPi, Paren };
  Kind kind = Kind::Ident;
  std::string name;          // Ident / binder name of Lam and GoalPi
  std::vector<PExpr> kids;   // App: head then args; Lam/GoalPi: body; binary: lhs, rhs
  int line = 0;
};

struct PBinder {
  std::string name;
  std::optional<Ty> ty;
};

struct PFormula {
  enum class Kind { True, False, And, Or, Imp, Forall, Exists, Nabla, Eq, Atom, Obj };
  Kind kind = Kind::True;
  std::vector<PBinder> binders;
  std::vector<PFormula> kids;
  PExpr t1, t2;             // Eq sides; Atom term in t1; Obj context (t1, if has_ctx) and goal (t2)
  bool has_ctx = false;
  Restriction restriction;
  int line = 0;
};

/// One clause of a Define block: `[nabla x..,] head [:= body]`.
struct PClause {
  std::vector<std::string> nablas;
  PExpr head;
  std::optional<PFormula> body;
  int line = 0;
};

/// Tactic syntax.
struct PTactic {
  enum class Kind {
    Intros, Case, Induction, Apply, Exists, Split, Left, Right, Search, Unfold, Assert,
    Inst, Cut, Monotone, Clear, Undo, Abort
  };
  Kind kind = Kind::Intros;
  std::vector<std::string> names;   // hypotheses, intros names, clear targets
  std::string target;               // apply: lemma or hypothesis; inst/cut/monotone: hypothesis
  std::vector<int> numbers;         // induction positions, search depth, unfold clause
  bool keep = false;
  std::vector<std::pair<std::string, PExpr>> withs;  // apply ... with X = t; inst ... with n = t
  std::optional<PExpr> term;        // exists witness, monotone context, cut partner is in names
  std::optional<PFormula> formula;  // assert
  int line = 0;
};

/// A top-level statement of a `.thm` script.
struct PCommand {
  enum class Kind { Specification, Kind, Type, Define, Theorem, Query, Set, Tactic };
  Kind kind = Kind::Tactic;
  std::string name;                 // theorem name / spec path / set key
  std::vector<std::string> names;   // Kind / Type declared names
  std::optional<Ty> ty;             // Type declaration
  std::vector<std::pair<std::string, Ty>> preds;  // Define
  bool override_strat = false;
  std::vector<PClause> clauses;
  std::optional<PFormula> formula;  // Theorem statement
  std::optional<PExpr> goal;        // Query
  std::string value;                // Set value
  PTactic tactic;
  int line = 0;
  std::string text;                 // source text of the statement
};

/// Signature and clause declarations of a specification file.
struct PSpecDecl {
  bool is_kind = false;
  std::vector<std::string> names;
  std::optional<Ty> ty;
  int line = 0;
};
struct PSpecClause {
  PExpr body;                   // goal-syntax expression (may be `G => D`)
  std::optional<PExpr> premise; // from `head :- premise`
  int line = 0;
};
struct PSpec {
  std::vector<PSpecDecl> decls;
  std::vector<PSpecClause> clauses;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks, std::string source = {})
      : toks_(std::move(toks)), source_(std::move(source)) {}
  static Parser of(const std::string& src, int first_line = 1) { return Parser(tokenize(src, first_line), src); }

  PExpr term();
  PExpr goal();
  PFormula formula();
  Ty type();
  PTactic tactic();
  /// Parses one statement terminated by `.`; nullopt at end of input.
  std::optional<PCommand> command();
  PSpec spec();

  bool at_end() const { return peek().kind == Token::Kind::End; }
  const Token& peek(int ahead = 0) const;
  void expect_end();
  void expect(const char* sym);

 private:
  const Token& next();
  bool accept(const char* sym);
  bool accept_word(const char* w);
  std::string ident();
  [[noreturn]] void fail(const std::string& msg) const;

  PExpr app_term();
  bool starts_aexp() const;
  PExpr aexp();
  PExpr goal_imp();
  PExpr goal_unit();
  PFormula imp_formula();
  PFormula or_formula();
  PFormula and_formula();
  PFormula unit_formula();
  PFormula quant_formula();
  PFormula term_unit();
  Restriction restriction();
  std::vector<PBinder> binders();
  PClause clause();

  std::vector<Token> toks_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace nabla
