#pragma once

#include <stdexcept>
#include <string>

namespace qipm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct SingularMatrix : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct SingularNewtonMatrix : Error {
  using Error::Error;
};

struct EmptyGraph : Error {
  using Error::Error;
};

struct ZeroVector : Error {
  using Error::Error;
};

struct NoFeasibleSeed : Error {
  using Error::Error;
};

struct PathDistanceViolation : Error {
  using Error::Error;
};

struct TomographyFailure : Error {
  using Error::Error;
};

// Thrown by audited solver steps; `clause` names the violated check.
struct AuditFailure : Error {
  AuditFailure(const std::string& clause_name, const std::string& what)
      : Error(what), clause(clause_name) {}
  std::string clause;
};

// File-format errors carry the 1-based line number of the offending line.
struct ParseError : Error {
  ParseError(int line_number, const std::string& what)
      : Error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
  int line;
};

}  // namespace qipm
