#pragma once

#include <stdexcept>
#include <string>

namespace bergerkit {

// Operands live in spaces of different dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A vector or matrix is not in the subspace/algebra it is claimed to be in.
class MembershipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A set of matrices is not closed under the commutator.
class ClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a documented precondition of an operation.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical procedure failed to reach its tolerance within its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bergerkit
