#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nabla/printer.hpp"
#include "nabla/speclogic.hpp"
#include "nabla/tactics.hpp"

namespace nabla {

/// Outcome of executing statements.
struct ExecResult {
  enum class Status { Ok, ProofFailure, ParseError };
  Status status = Status::Ok;
  std::vector<std::string> output;
  std::string error;
  std::string file;
  int line = 0;
  bool ok() const { return status == Status::Ok; }
};

struct SessionOptions {
  int search_depth = 5;
  bool verify_meta = false;
  /// When set, nominal constants are drawn in a permuted order and nominal
  /// names in user input are renamed accordingly.
  std::optional<unsigned> perm_seed;
};

class Session {
 public:
  explicit Session(SessionOptions opts = {});

  /// Loads a specification (.sig/.mod/.spec) or a script.
  ExecResult load(const std::string& path);
  /// Executes script text. `base_dir` resolves Specification paths.
  ExecResult exec(const std::string& text, const std::string& file = "<input>", const std::string& base_dir = ".");
  /// Undoes the last tactic of the current proof.
  ExecResult undo();

  bool in_proof() const { return proof_.has_value(); }
  const ProofState* proof() const { return proof_ ? &*proof_ : nullptr; }
  const LemmaStore& lemmas() const { return lemmas_; }
  const Signature& signature() const { return sig_; }
  const Definitions& definitions() const { return defs_; }
  /// Overridden definitions followed by trusted-rule uses of completed proofs.
  std::vector<TrustEntry> trust_report() const;
  /// Successfully executed statements, replayable as a script.
  const std::vector<std::string>& transcript() const { return transcript_; }
  const SessionOptions& options() const { return opts_; }
  /// The nominal index order used for fresh names (empty when unpermuted).
  const std::vector<int>& nominal_order() const { return order_; }

  /// Human-readable focused subgoal (and the count of the others).
  std::string display() const;
  /// Structured snapshot with wire-syntax terms (JSON text).
  std::string snapshot_json() const;

 private:
  void run_command(const PCommand& c, const std::string& base_dir, std::vector<std::string>& out);
  void ensure_seq();
  TacticContext tactic_context() const;
  Term rename_input(const Term& t) const;

  SessionOptions opts_;
  Signature sig_;
  Definitions defs_;
  LemmaStore lemmas_;
  std::optional<ProofState> proof_;
  std::vector<std::string> proof_text_;  // statements of the current proof
  std::vector<TrustEntry> trust_;
  std::vector<std::string> transcript_;
  std::vector<int> order_;
  Permutation input_perm_;
  bool spec_loaded_ = false;
  std::filesystem::path spec_path_;
};

std::string format_sequent(const Sequent& s, Style style = Style::Human);

/// Line-delimited JSON protocol over sessions. Each request and reply is one
/// JSON object carrying "v": 1. A session accepts commands from one
/// connection (its writer) at a time.
class ProtocolServer {
 public:
  explicit ProtocolServer(SessionOptions opts = {}) : opts_(opts) {}
  /// Handles one request from connection `conn`; returns the reply line.
  std::string handle(const std::string& conn, const std::string& line);
  /// Releases every session held by the connection.
  void disconnect(const std::string& conn);
  /// Serves HTTP on the port: POST /rpc carries one request per body.
  /// Blocks until the process is stopped.
  void serve(int port);

 private:
  struct Entry {
    std::unique_ptr<Session> session;
    std::string writer;
    std::mutex mu;
  };
  std::shared_ptr<Entry> find(const std::string& id);

  SessionOptions opts_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  int next_id_ = 1;
};

}  // namespace nabla
