#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tolquot {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed structure text. `position()` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::string const& message, std::size_t position)
      : Error(message + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A structure violates one of its invariants (empty multi-operation value,
// out-of-range index, table length mismatch, non-symmetric relation, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Caller passed arguments that do not fit the structure: unknown operation
// name, wrong arity, mismatched universe sizes.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A configured size limit would be exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

// A configured evaluation or search budget was exhausted before an answer.
class ResourceExceeded : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed. Never expected; signals a bug.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace tolquot
