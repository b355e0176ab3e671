#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nabla/session.hpp"

namespace {

int exit_code(const nabla::ExecResult& r) {
  switch (r.status) {
    case nabla::ExecResult::Status::Ok: return 0;
    case nabla::ExecResult::Status::ProofFailure: return 1;
    case nabla::ExecResult::Status::ParseError: return 2;
  }
  return 1;
}

void report(const nabla::ExecResult& r, bool verbose) {
  if (verbose || !r.ok())
    for (const std::string& line : r.output) std::cout << line << "\n";
  if (!r.ok()) std::cerr << r.file << ":" << r.line << ": error: " << r.error << "\n";
}

void print_trust(const nabla::Session& s) {
  auto trust = s.trust_report();
  std::cout << "Trust report: " << trust.size() << (trust.size() == 1 ? " entry" : " entries") << "\n";
  for (const auto& t : trust) std::cout << "  " << t.str() << "\n";
}

int repl(nabla::Session& s) {
  std::string buffer, line;
  std::cout << "> " << std::flush;
  while (std::getline(std::cin, line)) {
    buffer += line + "\n";
    std::string trimmed = buffer.substr(0, buffer.find_last_not_of(" \t\r\n") + 1);
    if (!trimmed.empty() && trimmed.back() == '.') {
      nabla::ExecResult r = s.exec(buffer, "<stdin>");
      for (const std::string& out : r.output) std::cout << out << "\n";
      if (!r.ok()) std::cout << "Error: " << r.error << "\n";
      buffer.clear();
    }
    std::cout << (buffer.empty() ? "> " : "  ") << std::flush;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive prover for the two-level logic of definitions and nabla"};
  std::vector<std::string> files;
  bool batch = false, verbose = false, trust = false;
  int port = 0;
  nabla::SessionOptions opts;
  unsigned seed = 0;
  app.add_option("files", files, "Specification files and proof scripts, loaded in order");
  app.add_flag("--batch", batch, "Replay the files non-interactively and exit");
  app.add_option("--search-depth", opts.search_depth, "Default search depth")->check(CLI::NonNegativeNumber);
  app.add_flag("--verify-meta", opts.verify_meta, "Re-derive closed instances of trusted rules");
  app.add_option("--serve", port, "Serve the session protocol over HTTP on this port");
  auto* seed_opt = app.add_option("--permute-nominals", seed, "Draw fresh nominal names in an order shuffled by SEED");
  app.add_flag("-v,--verbose", verbose, "Print the proof state after each statement");
  app.add_flag("--trust-report", trust, "Print the trust report after loading");
  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) opts.perm_seed = seed;

  if (port) {
    nabla::ProtocolServer server(opts);
    std::cerr << "serving on port " << port << "\n";
    server.serve(port);
    return 0;
  }

  nabla::Session session(opts);
  for (const std::string& f : files) {
    nabla::ExecResult r = session.load(f);
    report(r, verbose);
    if (!r.ok()) return exit_code(r);
  }
  if (batch) {
    if (session.in_proof()) {
      std::cerr << "error: proof of " << session.proof()->name() << " is incomplete\n";
      std::cout << session.display() << "\n";
      return 1;
    }
    std::cout << "ok: " << session.lemmas().all().size() << " theorems proved\n";
    if (trust || !session.trust_report().empty()) print_trust(session);
    return 0;
  }
  if (trust) print_trust(session);
  return repl(session);
}
