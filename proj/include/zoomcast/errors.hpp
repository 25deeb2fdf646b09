#pragma once

#include <stdexcept>
#include <string>

namespace zoomcast {

// Raised when a caller breaks an operation's precondition (bad level index,
// non-positive size, unsorted users, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when internal bookkeeping disagrees with itself, e.g. a decision
// journal that does not replay against its own cost table.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A located error in a scenario or trace document.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string field, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", " + field + ": " +
                           message),
        line_(line),
        field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace zoomcast
