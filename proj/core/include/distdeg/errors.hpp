#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distdeg {

/// Malformed polynomial text. `position()` is the 0-based character offset
/// of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Raised when an input cannot be turned into a valid problem description
/// (bad codimension, incompatible formulation, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An implicit norm branch has no positive real root at the requested point.
class BranchError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Point is not on the variety within the membership tolerance.
class NotOnVarietyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine gave up. Carries enough context for a retry hint.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace distdeg
