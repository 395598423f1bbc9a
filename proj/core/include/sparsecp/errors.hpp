#pragma once

#include <stdexcept>
#include <string>

namespace sparsecp {

// Input outside the mathematical domain of an operation (log of a
// non-positive number, parameter outside a curve's range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed: bracketing, overflow, no usable samples.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparsecp
