#pragma once

#include <stdexcept>
#include <string>

namespace drgoal {

/// Argument outside the mathematical domain of an operation (t <= 0 for a
/// quantile, a > b for a layer, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A modelling assumption required by a solver does not hold
/// (continuity of a marginal, non-trivial goal level, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed: root not bracketed, divergent integral, grid
/// cap binding.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace drgoal
