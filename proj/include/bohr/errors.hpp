#pragma once

#include <stdexcept>
#include <string>

namespace bohr {

// Integer overflow in exact arithmetic (index products, convolutions,
// matrix application). Always thrown, never wrapped silently.
struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested tolerance cannot be met within the configured search space
// (e.g. rational-approximation quality within the Q budget).
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point/work budget was exhausted before the computation finished.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A floating-point certificate failed: a value landed too close to a
// decision threshold to classify reliably. Never rounded through.
struct MarginError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bohr
