#pragma once

#include <stdexcept>
#include <string>

namespace wsheet {

/// Malformed arguments: wrong dimensions, wrong vector counts.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a map (e.g. projecting a non-lightlike vector).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Geometric hypotheses fail at a point (singular metric, non-timelike normal, rank loss).
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression syntax errors. `offset` is the 0-based byte position in the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Expression evaluated outside a function domain; carries the offending subexpression.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string subexpr)
      : std::runtime_error(what + " in '" + subexpr + "'"), subexpr_(std::move(subexpr)) {}
  const std::string& subexpression() const noexcept { return subexpr_; }

 private:
  std::string subexpr_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad run configuration (schema, dimensions, grid sizes).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsheet
