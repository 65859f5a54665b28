#pragma once

#include <stdexcept>
#include <string>

namespace karamata {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An integral or running-sup construction is infinite at the queried point.
class DivergentValue : public Error {
 public:
  explicit DivergentValue(const std::string& what) : Error(what) {}
};

/// An adaptive scheme exhausted its subdivision budget above tolerance.
class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string& what) : Error(what) {}
};

/// A documented precondition of the called operation does not hold.
class PreconditionFailed : public Error {
 public:
  explicit PreconditionFailed(const std::string& what) : Error(what) {}
};

/// alpha = 0 (limits) or alpha = -1 (integrals): slow variation alone does
/// not determine the behaviour, so no verdict is possible.
class UndeterminedLimitingCase : public Error {
 public:
  explicit UndeterminedLimitingCase(const std::string& what) : Error(what) {}
};

/// A tilde/hat style construction is infinite everywhere on the grid.
class DivergentConstruction : public Error {
 public:
  explicit DivergentConstruction(const std::string& what) : Error(what) {}
};

/// One-sided values or derivatives disagree at the recombination point.
class GlueMismatch : public Error {
 public:
  explicit GlueMismatch(const std::string& what) : Error(what) {}
};

/// Kernel derivative tables would exceed exactly representable integers.
class CoefficientOverflow : public Error {
 public:
  explicit CoefficientOverflow(const std::string& what) : Error(what) {}
};

/// Expression text rejected by the DSL parser.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column,
             std::string expected)
      : Error(what), line_(line), column_(column),
        expected_(std::move(expected)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::string expected_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

class SchemaMismatch : public Error {
 public:
  explicit SchemaMismatch(const std::string& what) : Error(what) {}
};

}  // namespace karamata
