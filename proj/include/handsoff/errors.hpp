#pragma once

#include <stdexcept>
#include <string>

namespace handsoff {

/// Malformed or inconsistent input: dimension mismatch, non-finite data,
/// out-of-range settings.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver (iteration cap, singular basis).
/// Distinct from an infeasible problem, which is reported through status.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation refused because it would exceed its enumeration budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace handsoff
