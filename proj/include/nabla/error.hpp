#pragma once

#include <stdexcept>
#include <string>

namespace nabla {

/// Base of all errors raised by the prover.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0) : Error(msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A tactic or rule could not be applied; the proof state is left unchanged.
class TacticError : public Error {
 public:
  using Error::Error;
};

/// The unifier left the higher-order pattern fragment.
class NonPatternError : public Error {
 public:
  using Error::Error;
};

class DefinitionError : public Error {
 public:
  using Error::Error;
};

}  // namespace nabla
