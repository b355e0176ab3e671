#include "nabla/session.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nabla/elaborate.hpp"
#include "nabla/error.hpp"
#include "nabla/parser.hpp"
#include "nabla/printer.hpp"

namespace nabla {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kPermutedNominals = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_spec_file(const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  return ext == ".spec" || ext == ".sig" || ext == ".mod";
}

std::string var_list(const Sequent& s) {
  std::string out;
  for (const VarInfo& v : s.vars) out += (out.empty() ? "" : " ") + v.name;
  return out;
}

}  // namespace

std::string format_sequent(const Sequent& s, Style style) {
  std::string out;
  if (!s.vars.empty()) out += "  Variables: " + var_list(s) + "\n";
  for (const Hyp& h : s.hyps) out += "  " + h.name + " : " + print_formula(h.f, style) + "\n";
  out += "  ============================\n";
  out += "   " + print_formula(s.goal, style) + "\n";
  return out;
}

Session::Session(SessionOptions opts) : opts_(opts) {
  if (opts_.perm_seed) {
    order_.resize(kPermutedNominals);
    for (int i = 0; i < kPermutedNominals; ++i) order_[i] = i + 1;
    std::mt19937 rng(*opts_.perm_seed);
    std::shuffle(order_.begin(), order_.end(), rng);
  }
}

TacticContext Session::tactic_context() const {
  TacticContext ctx;
  ctx.sig = const_cast<Signature*>(&sig_);
  ctx.defs = &defs_;
  ctx.lemmas = &lemmas_;
  ctx.env = KernelEnv{&sig_, &defs_, order_.empty() ? nullptr : &order_};
  ctx.search_depth = opts_.search_depth;
  ctx.verify_meta = opts_.verify_meta;
  return ctx;
}

Term Session::rename_input(const Term& t) const { return order_.empty() ? t : rename_nominals(t, order_); }

void Session::ensure_seq() {
  if (!defs_.defined("seq")) install_seq(sig_, defs_, {});
}

std::vector<TrustEntry> Session::trust_report() const {
  std::vector<TrustEntry> out = defs_.overrides();
  out.insert(out.end(), trust_.begin(), trust_.end());
  return out;
}

ExecResult Session::load(const std::string& path) {
  ExecResult r;
  r.file = path;
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    r.status = ExecResult::Status::ProofFailure;
    r.error = e.what();
    return r;
  }
  if (is_spec_file(path)) {
    std::string dir = fs::path(path).parent_path().string();
    return exec("Specification \"" + fs::path(path).filename().string() + "\".", path, dir.empty() ? "." : dir);
  }
  std::string dir = fs::path(path).parent_path().string();
  return exec(text, path, dir.empty() ? "." : dir);
}

ExecResult Session::exec(const std::string& text, const std::string& file, const std::string& base_dir) {
  ExecResult r;
  r.file = file;
  Parser parser = Parser::of(text);
  while (true) {
    std::optional<PCommand> cmd;
    try {
      cmd = parser.command();
    } catch (const ParseError& e) {
      r.status = ExecResult::Status::ParseError;
      r.error = e.what();
      r.line = e.line();
      return r;
    }
    if (!cmd) break;
    try {
      run_command(*cmd, base_dir, r.output);
      transcript_.push_back(cmd->text);
    } catch (const ParseError& e) {
      r.status = ExecResult::Status::ParseError;
      r.error = e.what();
      r.line = e.line() ? e.line() : cmd->line;
      return r;
    } catch (const std::exception& e) {
      r.status = ExecResult::Status::ProofFailure;
      r.error = e.what();
      r.line = cmd->line;
      if (proof_) r.output.push_back(display());
      return r;
    }
  }
  return r;
}

ExecResult Session::undo() {
  ExecResult r;
  if (!proof_ || !proof_->can_undo()) {
    r.status = ExecResult::Status::ProofFailure;
    r.error = "nothing to undo";
    return r;
  }
  proof_->undo();
  transcript_.push_back("undo.");
  r.output.push_back(display());
  return r;
}

void Session::run_command(const PCommand& c, const std::string& base_dir, std::vector<std::string>& out) {
  using K = PCommand::Kind;
  switch (c.kind) {
    case K::Specification: {
      fs::path p = fs::path(base_dir) / c.name;
      if (!fs::exists(p) && fs::exists(fs::path(p.string() + ".spec"))) p = p.string() + ".spec";
      // Re-reading the same specification is a no-op, so a reloaded script
      // fails on its first duplicate name instead.
      if (spec_loaded_ && fs::exists(p) && fs::equivalent(p, spec_path_)) {
        out.push_back("Specification already loaded.");
        return;
      }
      if (spec_loaded_ || defs_.defined("seq"))
        throw DefinitionError("a specification must be loaded once, before any definition or theorem");
      std::string src = read_file(p.string());
      CompiledSpec spec;
      try {
        spec = compile_spec(sig_, src);
      } catch (const ParseError& e) {
        throw ParseError(p.string() + ": " + e.what(), c.line);
      }
      install_seq(sig_, defs_, spec.clauses);
      spec_loaded_ = true;
      spec_path_ = p;
      out.push_back("Loaded " + std::to_string(spec.clauses.size()) + " specification clauses.");
      return;
    }
    case K::Kind:
      for (const std::string& n : c.names) sig_.add_kind(n);
      return;
    case K::Type:
      for (const std::string& n : c.names) sig_.add_const(n, *c.ty);
      return;
    case K::Define: {
      if (proof_) throw DefinitionError("definitions are not allowed inside a proof");
      ensure_seq();
      for (const auto& [n, ty] : c.preds)
        if (defs_.defined(n) || sig_.has_const(n)) throw DefinitionError(n + " is already declared");
      // Declarations only take effect when the definition is accepted.
      Signature sig = sig_;
      for (const auto& [n, ty] : c.preds) sig.add_const(n, ty);
      defs_.add(c.preds, elaborate_clauses(sig, c.clauses), c.override_strat);
      sig_ = std::move(sig);
      return;
    }
    case K::Theorem: {
      if (proof_) throw DefinitionError("finish or abort the current proof first");
      if (lemmas_.find(c.name)) throw DefinitionError("a theorem named " + c.name + " already exists");
      ensure_seq();
      Formula f = Elaborator::formula_in(sig_, *c.formula, {});
      proof_.emplace(c.name, f);
      out.push_back(display());
      return;
    }
    case K::Query: {
      if (proof_) throw DefinitionError("queries are not allowed inside a proof");
      ensure_seq();
      Elaborator el(sig_);
      el.allow_implicit(VarTag::Logic);
      el.add_goal(*c.goal);
      el.solve();
      Term g = rename_input(el.goal(*c.goal));
      std::optional<Unifier> u = spec_search(tactic_context().env, builtin::nil(), g, opts_.search_depth);
      if (!u) {
        out.push_back("No.");
        return;
      }
      std::string msg = "Yes.";
      for (const VarInfo& v : el.implicits()) msg += "\n  " + v.name + " = " + print_term(u->resolve(var(v)));
      out.push_back(msg);
      return;
    }
    case K::Set: {
      if (c.name == "search_depth") {
        try {
          opts_.search_depth = std::stoi(c.value);
        } catch (const std::exception&) {
          throw ParseError("search_depth expects a number", c.line);
        }
        if (opts_.search_depth < 0) throw ParseError("search_depth must be non-negative", c.line);
        return;
      }
      throw ParseError("unknown setting " + c.name, c.line);
    }
    case K::Tactic: {
      if (!proof_) throw TacticError("no proof in progress");
      if (c.tactic.kind == PTactic::Kind::Abort) {
        proof_.reset();
        out.push_back("Proof aborted.");
        return;
      }
      proof_->step(c.tactic, tactic_context(), c.text);
      if (proof_->done()) {
        lemmas_.add(proof_->name(), proof_->statement());
        trust_.insert(trust_.end(), proof_->trust().begin(), proof_->trust().end());
        out.push_back("Proof of " + proof_->name() + " completed.");
        proof_.reset();
      } else {
        out.push_back(display());
      }
      return;
    }
  }
}

std::string Session::display() const {
  if (!proof_) return "No proof in progress.";
  const auto& goals = proof_->goals();
  if (goals.empty()) return "Proof completed.";
  std::string out = proof_->name() + ": subgoal 1 of " + std::to_string(goals.size()) + "\n\n";
  out += format_sequent(goals.front());
  for (std::size_t i = 1; i < goals.size(); ++i)
    out += "\nSubgoal " + std::to_string(i + 1) + " is:\n " + print_formula(goals[i].goal) + "\n";
  return out;
}

std::string Session::snapshot_json() const {
  json j;
  j["theorem"] = nullptr;
  j["subgoals"] = json::array();
  if (proof_) {
    j["theorem"] = proof_->name();
    j["statement"] = print_formula(proof_->statement(), Style::Wire);
    for (const Sequent& s : proof_->goals()) {
      json g;
      g["vars"] = json::array();
      for (const VarInfo& v : s.vars) g["vars"].push_back({{"name", v.name}, {"type", v.ty.str()}});
      g["hyps"] = json::array();
      for (const Hyp& h : s.hyps) g["hyps"].push_back({{"name", h.name}, {"formula", print_formula(h.f, Style::Wire)}});
      g["goal"] = print_formula(s.goal, Style::Wire);
      j["subgoals"].push_back(g);
    }
  }
  j["lemmas"] = json::array();
  for (const auto& [n, f] : lemmas_.all()) j["lemmas"].push_back({{"name", n}, {"statement", print_formula(f, Style::Wire)}});
  j["trust"] = json::array();
  for (const TrustEntry& t : trust_report()) j["trust"].push_back(t.str());
  return j.dump();
}

// ------------------------------------------------------------------ protocol

std::shared_ptr<ProtocolServer::Entry> ProtocolServer::find(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string ProtocolServer::handle(const std::string& conn, const std::string& line) {
  json reply = {{"v", 1}};
  auto fail = [&](const std::string& msg) {
    reply["ok"] = false;
    reply["error"] = {{"message", msg}};
    return reply.dump();
  };
  json req;
  try {
    req = json::parse(line);
  } catch (const json::exception& e) {
    return fail(std::string("malformed message: ") + e.what());
  }
  if (!req.is_object()) return fail("malformed message: expected an object");
  if (req.contains("id")) reply["id"] = req["id"];
  if (!req.contains("v") || req["v"] != 1) return fail("unsupported protocol version");
  if (!req.contains("op") || !req["op"].is_string()) return fail("malformed message: missing op");
  const std::string op = req["op"];

  if (op == "open") {
    auto e = std::make_shared<Entry>();
    e->session = std::make_unique<Session>(opts_);
    e->writer = conn;
    std::string id;
    {
      std::lock_guard<std::mutex> lock(mu_);
      id = "s" + std::to_string(next_id_++);
      sessions_[id] = e;
    }
    reply["ok"] = true;
    reply["session"] = id;
    reply["state"] = json::parse(e->session->snapshot_json());
    return reply.dump();
  }

  if (!req.contains("session") || !req["session"].is_string()) return fail("malformed message: missing session");
  const std::string id = req["session"];
  std::shared_ptr<Entry> e = find(id);
  if (!e) return fail("unknown session " + id);
  reply["session"] = id;
  std::lock_guard<std::mutex> lock(e->mu);
  auto is_writer = [&] { return e->writer == conn; };

  if (op == "state") {
    reply["ok"] = true;
    reply["state"] = json::parse(e->session->snapshot_json());
    reply["display"] = e->session->display();
    return reply.dump();
  }
  if (op == "attach") {
    if (!e->writer.empty() && !is_writer()) return fail("session " + id + " already has a writer");
    e->writer = conn;
    reply["ok"] = true;
    reply["state"] = json::parse(e->session->snapshot_json());
    return reply.dump();
  }
  if (!is_writer()) return fail("not the writer of session " + id);
  if (op == "exec" || op == "undo") {
    ExecResult r;
    if (op == "exec") {
      if (!req.contains("text") || !req["text"].is_string()) return fail("malformed message: missing text");
      r = e->session->exec(req["text"].get<std::string>());
    } else {
      r = e->session->undo();
    }
    reply["ok"] = r.ok();
    reply["output"] = r.output;
    if (!r.ok()) {
      reply["error"] = {{"message", r.error},
                        {"line", r.line},
                        {"kind", r.status == ExecResult::Status::ParseError ? "parse" : "proof"}};
    }
    reply["state"] = json::parse(e->session->snapshot_json());
    reply["display"] = e->session->display();
    return reply.dump();
  }
  if (op == "close") {
    {
      std::lock_guard<std::mutex> lock2(mu_);
      sessions_.erase(id);
    }
    reply["ok"] = true;
    return reply.dump();
  }
  return fail("unknown op " + op);
}

void ProtocolServer::disconnect(const std::string& conn) {
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& [id, e] : sessions_) {
    std::lock_guard<std::mutex> l(e->mu);
    if (e->writer == conn) e->writer.clear();
  }
}

}  // namespace nabla
