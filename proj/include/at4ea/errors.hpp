#pragma once

#include <stdexcept>
#include <string>

namespace at4ea {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries a location that callers may include in
/// diagnostics; `what()` already contains the formatted "file:line: msg".
struct ParseError : Error {
  ParseError(std::string file_, int line_, const std::string& msg)
      : Error(file_ + ":" + std::to_string(line_) + ": " + msg),
        file(std::move(file_)),
        line(line_) {}

  std::string file;
  int line = 0;
};

/// File could not be opened or written.
struct IoError : Error {
  using Error::Error;
};

/// An operation was called on inputs that violate its preconditions
/// (unvalidated tree, unbound parameters, bad argument values).
struct ContractError : Error {
  using Error::Error;
};

/// Tree unification failed (root mismatch or conflicting scenario bodies).
struct MergeError : Error {
  using Error::Error;
};

/// Parameter binding is incomplete or ambiguous.
struct BindingError : Error {
  using Error::Error;
};

/// Mitigation overlay could not be applied (broken weight normalization,
/// unknown mitigation name in a combination).
struct MitigationError : Error {
  using Error::Error;
};

}  // namespace at4ea
