#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diter {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EdgeListError : public Error {
 public:
  enum class Kind { Malformed, IdOverflow, EmptyInput };

  EdgeListError(Kind kind, std::size_t line, const std::string& what)
      : Error(what), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  // 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

// A dense system is singular to working precision.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// The requested method has no meaning for the given parameters
// (D-iteration with a non-vanishing source at d = 1).
class UndefinedMethodError : public Error {
 public:
  using Error::Error;
};

// Residual fluid grew far beyond its initial mass.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// An oracle or estimator failed to reach its tolerance.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

// Independent solves of the same problem disagree beyond their targets.
class AgreementError : public Error {
 public:
  using Error::Error;
};

}  // namespace diter
