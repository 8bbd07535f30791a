#pragma once

#include <stdexcept>
#include <string>

namespace rectiscope {

// Base class for all library errors. The CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad files, dimension mismatches, invalid parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold for the given data.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

// A computation would exceed its configured work budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace rectiscope
