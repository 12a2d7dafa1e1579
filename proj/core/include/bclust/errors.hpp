#pragma once

#include <stdexcept>

namespace bclust {

/// Malformed or out-of-range user input. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Size bounds that cannot hold for the given n and k. The CLI maps this to
/// exit code 3.
class InfeasibleBoundsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural invariant of a flow or assignment was violated.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Min-cost rounding met a cycle or path with nonzero alternating cost, which
/// means the flow handed to it was not optimal.
class OptimalityError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

}  // namespace bclust
