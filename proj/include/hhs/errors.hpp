#pragma once

#include <stdexcept>
#include <string>

namespace hhs {

// Malformed input (JSON shape, unknown ids, bad numbers).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structure or cover that violates a type invariant at construction time.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hhs
