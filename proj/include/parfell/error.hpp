#pragma once

#include <stdexcept>
#include <string>

namespace parfell {

// Input that cannot be interpreted at all (bad indices, wrong sizes, bad JSON).
class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but violates an operation's stated precondition.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A group element that the data at hand does not cover.
class UndeclaredElement : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A numerical procedure could not reach its guaranteed accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parfell
