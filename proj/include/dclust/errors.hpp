#pragma once

#include <stdexcept>
#include <string>

namespace dclust {

// Bad argument values (non-positive radius, epsilon out of range, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Query outside the operation's domain (u == v for a cut level, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input file. line() is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Input that parses but violates a model invariant (e.g. triangle inequality).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Oracle or solver refused because the instance exceeds its size cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// No feasible answer exists under the given budget.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dclust
