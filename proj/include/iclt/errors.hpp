#pragma once

#include <stdexcept>
#include <string>

namespace iclt {

/// Input outside the mathematical domain of an operation (zero outside the
/// disk, |lambda| >= 1, divergent sequence where a summable one is required).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A stated precondition on indices, orderings or sizes does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not reach its accuracy contract.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iclt
