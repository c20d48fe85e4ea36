#pragma once

#include <stdexcept>
#include <string>

namespace sdkey {

/// Invalid input: malformed tables, unknown variables, out-of-range parameters.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact enumeration would exceed the configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sdkey
