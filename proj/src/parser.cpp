#include "nabla/parser.hpp"

#include <cctype>

#include "nabla/error.hpp"

namespace nabla {
namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '?'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '?' || c == '!';
}

const char* const kSymbols[] = {":=", ":-", "::", "->", "=>", "/\\", "\\/", "|-", "(", ")", "{", "}", "[", "]",
                                ",",  ".",  ":",  ";",  "\\", "=",  "&",   "*",   "@"};

}  // namespace

std::vector<Token> tokenize(const std::string& src, int first_line) {
  std::vector<Token> out;
  int line = first_line;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      i += 2;
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      i += 2;
      continue;
    }
    Token t;
    t.line = line;
    t.begin = i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Number;
      t.text = src.substr(i, j - i);
      i = j;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"') ++j;
      if (j >= src.size()) throw ParseError("unterminated string", line);
      t.kind = Token::Kind::String;
      t.text = src.substr(i + 1, j - i - 1);
      i = j + 1;
    } else {
      bool matched = false;
      for (const char* sym : kSymbols) {
        std::string s(sym);
        if (src.compare(i, s.size(), s) == 0) {
          t.kind = Token::Kind::Sym;
          t.text = s;
          i += s.size();
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line);
    }
    t.end = i;
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.begin = end.end = src.size();
  out.push_back(end);
  return out;
}

const Token& Parser::peek(int ahead) const {
  std::size_t i = std::min(pos_ + static_cast<std::size_t>(ahead), toks_.size() - 1);
  return toks_[i];
}

const Token& Parser::next() {
  const Token& t = toks_[pos_];
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool Parser::accept(const char* sym) {
  if (peek().is(sym)) {
    next();
    return true;
  }
  return false;
}

bool Parser::accept_word(const char* w) {
  if (peek().is_word(w)) {
    next();
    return true;
  }
  return false;
}

void Parser::expect(const char* sym) {
  if (!accept(sym)) fail(std::string("expected '") + sym + "'");
}

void Parser::expect_end() {
  if (!at_end()) fail("unexpected trailing input");
}

std::string Parser::ident() {
  if (peek().kind != Token::Kind::Ident) fail("expected an identifier");
  return next().text;
}

void Parser::fail(const std::string& msg) const {
  const Token& t = peek();
  std::string near = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(msg + " near " + near, t.line);
}

// ---------------------------------------------------------------- types

Ty Parser::type() {
  Ty dom;
  if (accept("(")) {
    dom = type();
    expect(")");
  } else {
    dom = Ty::base(ident());
  }
  if (accept("->")) return Ty::arrow(dom, type());
  return dom;
}

// ---------------------------------------------------------------- terms

namespace {

const char* const kReserved[] = {"forall", "exists", "nabla", "true", "false", "pi", "by", "with", "to", "on"};

bool reserved(const std::string& s) {
  for (const char* r : kReserved)
    if (s == r) return true;
  return false;
}

PExpr mk(PExpr::Kind k, int line) {
  PExpr e;
  e.kind = k;
  e.line = line;
  return e;
}

}  // namespace

PExpr Parser::term() {
  PExpr head = app_term();
  if (peek().is("::")) {
    int line = next().line;
    PExpr e = mk(PExpr::Kind::Cons, line);
    e.kids.push_back(std::move(head));
    e.kids.push_back(term());
    return e;
  }
  return head;
}

bool Parser::starts_aexp() const {
  const Token& t = peek();
  if (t.is("(")) return true;
  if (t.kind != Token::Kind::Ident) return false;
  return !reserved(t.text) || t.text == "pi";
}

PExpr Parser::aexp() {
  const Token& t = peek();
  if (t.is("(")) {
    next();
    PExpr inner = term();
    expect(")");
    return inner;
  }
  if (t.kind == Token::Kind::Ident && peek(1).is("\\")) {
    PExpr e = mk(PExpr::Kind::Lam, t.line);
    e.name = next().text;
    next();
    e.kids.push_back(term());
    return e;
  }
  if (t.kind != Token::Kind::Ident || (reserved(t.text) && t.text != "pi")) fail("expected a term");
  PExpr e = mk(PExpr::Kind::Ident, t.line);
  e.name = next().text;
  return e;
}

PExpr Parser::app_term() {
  PExpr head = aexp();
  if (head.kind == PExpr::Kind::Lam) return head;
  if (!starts_aexp()) return head;
  PExpr e = mk(PExpr::Kind::App, head.line);
  e.kids.push_back(std::move(head));
  while (starts_aexp()) {
    PExpr a = aexp();
    bool lam = a.kind == PExpr::Kind::Lam;
    e.kids.push_back(std::move(a));
    if (lam) break;
  }
  return e;
}

// ---------------------------------------------------------------- goals

PExpr Parser::goal() {
  PExpr lhs = goal_imp();
  if (peek().is(",") || peek().is("&")) {
    int line = next().line;
    PExpr e = mk(PExpr::Kind::GoalAnd, line);
    e.kids.push_back(std::move(lhs));
    e.kids.push_back(goal());
    return e;
  }
  return lhs;
}

PExpr Parser::goal_imp() {
  if (peek().is_word("pi") && peek(1).kind == Token::Kind::Ident && peek(2).is("\\")) {
    int line = next().line;
    PExpr e = mk(PExpr::Kind::GoalPi, line);
    e.name = next().text;
    next();
    e.kids.push_back(goal());
    return e;
  }
  PExpr lhs = goal_unit();
  if (peek().is("=>")) {
    int line = next().line;
    PExpr e = mk(PExpr::Kind::GoalImp, line);
    e.kids.push_back(std::move(lhs));
    e.kids.push_back(goal_imp());
    return e;
  }
  return lhs;
}

PExpr Parser::goal_unit() {
  if (peek().is("(")) {
    std::size_t save = pos_;
    try {
      next();
      PExpr inner = goal();
      expect(")");
      const Token& t = peek();
      bool continues = t.kind == Token::Kind::Ident || t.is("(") || t.is("::");
      if (!continues) {
        PExpr p = mk(PExpr::Kind::Paren, inner.line);
        p.kids.push_back(std::move(inner));
        return p;
      }
    } catch (const ParseError&) {
    }
    pos_ = save;
  }
  return term();
}

// ---------------------------------------------------------------- formulas

Restriction Parser::restriction() {
  Restriction r;
  while (peek().is("*") || peek().is("@")) {
    bool star = next().text == "*";
    Restriction::Kind k = star ? Restriction::Kind::Smaller : Restriction::Kind::Equal;
    if (r.kind != Restriction::Kind::None && r.kind != k) fail("mixed annotation");
    r.kind = k;
    ++r.level;
  }
  return r;
}

std::vector<PBinder> Parser::binders() {
  std::vector<PBinder> out;
  while (true) {
    if (peek().is("(")) {
      next();
      PBinder b;
      b.name = ident();
      expect(":");
      b.ty = type();
      expect(")");
      out.push_back(std::move(b));
    } else if (peek().kind == Token::Kind::Ident && !reserved(peek().text)) {
      out.push_back(PBinder{next().text, std::nullopt});
    } else {
      break;
    }
  }
  if (out.empty()) fail("expected binder");
  return out;
}

PFormula Parser::formula() {
  if (peek().is_word("forall") || peek().is_word("exists") || peek().is_word("nabla")) return quant_formula();
  return imp_formula();
}

PFormula Parser::quant_formula() {
  PFormula f;
  f.line = peek().line;
  std::string q = next().text;
  f.kind = q == "forall" ? PFormula::Kind::Forall : q == "exists" ? PFormula::Kind::Exists : PFormula::Kind::Nabla;
  f.binders = binders();
  expect(",");
  f.kids.push_back(formula());
  return f;
}

PFormula Parser::imp_formula() {
  PFormula lhs = or_formula();
  if (peek().is("->")) {
    PFormula f;
    f.line = next().line;
    f.kind = PFormula::Kind::Imp;
    f.kids.push_back(std::move(lhs));
    f.kids.push_back(formula());
    return f;
  }
  return lhs;
}

PFormula Parser::or_formula() {
  PFormula lhs = and_formula();
  if (peek().is("\\/")) {
    PFormula f;
    f.line = next().line;
    f.kind = PFormula::Kind::Or;
    f.kids.push_back(std::move(lhs));
    f.kids.push_back(peek().is_word("forall") || peek().is_word("exists") || peek().is_word("nabla") ? quant_formula()
                                                                                                      : or_formula());
    return f;
  }
  return lhs;
}

PFormula Parser::and_formula() {
  PFormula lhs = unit_formula();
  if (peek().is("/\\")) {
    PFormula f;
    f.line = next().line;
    f.kind = PFormula::Kind::And;
    f.kids.push_back(std::move(lhs));
    f.kids.push_back(peek().is_word("forall") || peek().is_word("exists") || peek().is_word("nabla") ? quant_formula()
                                                                                                      : and_formula());
    return f;
  }
  return lhs;
}

PFormula Parser::unit_formula() {
  const Token& t = peek();
  PFormula f;
  f.line = t.line;
  if (t.is_word("forall") || t.is_word("exists") || t.is_word("nabla")) return quant_formula();
  if (t.is_word("true")) {
    next();
    f.kind = PFormula::Kind::True;
    return f;
  }
  if (t.is_word("false")) {
    next();
    f.kind = PFormula::Kind::False;
    return f;
  }
  if (t.is("{")) {
    next();
    f.kind = PFormula::Kind::Obj;
    std::size_t save = pos_;
    bool ctx = false;
    try {
      PExpr c = term();
      if (accept("|-")) {
        f.t1 = std::move(c);
        ctx = true;
      }
    } catch (const ParseError&) {
    }
    if (!ctx) pos_ = save;
    f.has_ctx = ctx;
    f.t2 = goal();
    expect("}");
    f.restriction = restriction();
    return f;
  }
  if (t.is("(")) {
    std::size_t save = pos_;
    try {
      next();
      PFormula inner = formula();
      expect(")");
      const Token& n = peek();
      bool continues = n.kind == Token::Kind::Ident || n.is("(") || n.is("::") || n.is("=");
      if (!continues) return inner;
    } catch (const ParseError&) {
    }
    pos_ = save;
  }
  return term_unit();
}

PFormula Parser::term_unit() {
  PFormula f;
  f.line = peek().line;
  PExpr lhs = term();
  if (accept("=")) {
    f.kind = PFormula::Kind::Eq;
    f.t1 = std::move(lhs);
    f.t2 = term();
    return f;
  }
  f.kind = PFormula::Kind::Atom;
  f.t1 = std::move(lhs);
  f.restriction = restriction();
  return f;
}

// ---------------------------------------------------------------- tactics

PTactic Parser::tactic() {
  PTactic t;
  t.line = peek().line;
  std::string w = ident();
  using K = PTactic::Kind;
  auto hyp_names = [&] {
    std::vector<std::string> out;
    while (peek().kind == Token::Kind::Ident && !reserved(peek().text)) out.push_back(next().text);
    return out;
  };
  if (w == "intros") {
    t.kind = K::Intros;
    t.names = hyp_names();
  } else if (w == "case") {
    t.kind = K::Case;
    t.target = ident();
    if (accept("(")) {
      if (!accept_word("keep")) fail("expected keep");
      expect(")");
      t.keep = true;
    }
  } else if (w == "induction") {
    t.kind = K::Induction;
    if (!accept_word("on")) fail("expected 'on'");
    while (peek().kind == Token::Kind::Number) t.numbers.push_back(std::stoi(next().text));
    if (t.numbers.empty()) fail("expected a hypothesis position");
  } else if (w == "apply") {
    t.kind = K::Apply;
    t.target = ident();
    if (accept_word("to")) t.names = hyp_names();
    if (accept_word("with")) {
      do {
        std::string x = ident();
        expect("=");
        t.withs.emplace_back(x, term());
      } while (accept(","));
    }
  } else if (w == "exists" || w == "witness") {
    t.kind = K::Exists;
    t.term = term();
  } else if (w == "split") {
    t.kind = K::Split;
  } else if (w == "left") {
    t.kind = K::Left;
  } else if (w == "right") {
    t.kind = K::Right;
  } else if (w == "search") {
    t.kind = K::Search;
    if (peek().kind == Token::Kind::Number) t.numbers.push_back(std::stoi(next().text));
  } else if (w == "unfold") {
    t.kind = K::Unfold;
    if (peek().kind == Token::Kind::Number) t.numbers.push_back(std::stoi(next().text));
  } else if (w == "assert") {
    t.kind = K::Assert;
    t.formula = formula();
  } else if (w == "inst") {
    t.kind = K::Inst;
    t.target = ident();
    if (!accept_word("with")) fail("expected 'with'");
    std::string n = ident();
    expect("=");
    t.withs.emplace_back(n, term());
  } else if (w == "cut") {
    t.kind = K::Cut;
    t.target = ident();
    if (!accept_word("with")) fail("expected 'with'");
    t.names.push_back(ident());
  } else if (w == "monotone") {
    t.kind = K::Monotone;
    t.target = ident();
    if (!accept_word("with")) fail("expected 'with'");
    t.term = term();
  } else if (w == "clear") {
    t.kind = K::Clear;
    t.names = hyp_names();
  } else if (w == "undo") {
    t.kind = K::Undo;
  } else if (w == "abort") {
    t.kind = K::Abort;
  } else {
    throw ParseError("unknown tactic '" + w + "'", t.line);
  }
  return t;
}

// ---------------------------------------------------------------- commands

PClause Parser::clause() {
  PClause c;
  c.line = peek().line;
  if (accept_word("nabla")) {
    while (peek().kind == Token::Kind::Ident) c.nablas.push_back(next().text);
    expect(",");
  }
  c.head = term();
  if (accept(":=")) c.body = formula();
  return c;
}

std::optional<PCommand> Parser::command() {
  if (at_end()) return std::nullopt;
  PCommand c;
  const Token& first = peek();
  c.line = first.line;
  std::size_t begin = first.begin;
  using K = PCommand::Kind;
  if (first.is_word("Specification")) {
    next();
    if (peek().kind != Token::Kind::String) fail("expected a file name");
    c.kind = K::Specification;
    c.name = next().text;
  } else if (first.is_word("Kind")) {
    next();
    c.kind = K::Kind;
    do c.names.push_back(ident());
    while (accept(","));
    if (!accept_word("type")) fail("expected 'type'");
  } else if (first.is_word("Type")) {
    next();
    c.kind = K::Type;
    do c.names.push_back(ident());
    while (accept(","));
    c.ty = type();
  } else if (first.is_word("Define")) {
    next();
    c.kind = K::Define;
    if (accept_word("override")) c.override_strat = true;
    do {
      std::string n = ident();
      expect(":");
      c.preds.emplace_back(n, type());
    } while (accept(","));
    if (!accept_word("by")) fail("expected 'by'");
    if (!peek().is(".")) {
      do c.clauses.push_back(clause());
      while (accept(";"));
    }
  } else if (first.is_word("Theorem")) {
    next();
    c.kind = K::Theorem;
    c.name = ident();
    expect(":");
    c.formula = formula();
  } else if (first.is_word("Query")) {
    next();
    c.kind = K::Query;
    c.goal = goal();
  } else if (first.is_word("Set")) {
    next();
    c.kind = K::Set;
    c.name = ident();
    if (peek().kind != Token::Kind::Ident && peek().kind != Token::Kind::Number) fail("expected a value");
    c.value = next().text;
  } else {
    c.kind = K::Tactic;
    c.tactic = tactic();
  }
  if (!peek().is(".")) fail("expected '.'");
  std::size_t end = peek().end;
  next();
  if (!source_.empty()) c.text = source_.substr(begin, end - begin);
  return c;
}

PSpec Parser::spec() {
  PSpec s;
  while (!at_end()) {
    int line = peek().line;
    if (peek().is_word("sig") || peek().is_word("module")) {
      next();
      if (peek().kind == Token::Kind::Ident) next();
      expect(".");
      continue;
    }
    if (accept_word("kind")) {
      PSpecDecl d;
      d.is_kind = true;
      d.line = line;
      do d.names.push_back(ident());
      while (accept(","));
      expect(".");
      s.decls.push_back(std::move(d));
      continue;
    }
    // `a, b : T.` declarations are recognized by the colon after a name list.
    std::size_t save = pos_;
    bool is_decl = false;
    if (peek().kind == Token::Kind::Ident) {
      std::size_t k = 0;
      while (peek(static_cast<int>(k)).kind == Token::Kind::Ident && peek(static_cast<int>(k + 1)).is(",")) k += 2;
      is_decl = peek(static_cast<int>(k)).kind == Token::Kind::Ident && peek(static_cast<int>(k + 1)).is(":");
    }
    if (is_decl) {
      PSpecDecl d;
      d.line = line;
      do d.names.push_back(ident());
      while (accept(","));
      expect(":");
      d.ty = type();
      expect(".");
      s.decls.push_back(std::move(d));
      continue;
    }
    pos_ = save;
    PSpecClause c;
    c.line = line;
    c.body = goal();
    if (accept(":-")) c.premise = goal();
    expect(".");
    s.clauses.push_back(std::move(c));
  }
  return s;
}

}  // namespace nabla
