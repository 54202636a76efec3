#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmatch {

/// A numeric argument violates an operation's precondition.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input object has the wrong shape (e.g. not bipartite, zero mean).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter lies outside the supported regime (e.g. cuckoo with k < 3).
class UnsupportedParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact computation would exceed its size budget. Callers are expected
/// to fall back to the sampling estimators.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text input could not be parsed. `where()` is a 1-based line number for
/// edge lists and a 1-based token position for distribution specs.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t where)
      : std::runtime_error(what + " (at " + std::to_string(where) + ")"),
        where_(where) {}

  std::size_t where() const noexcept { return where_; }

 private:
  std::size_t where_;
};

}  // namespace mmatch
