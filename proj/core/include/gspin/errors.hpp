#pragma once

#include <stdexcept>
#include <string>

namespace gspin {

// Input rejected by a precondition (dimension mismatch, non-unit direction, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problem size exceeds a memory or range guard.
class GuardViolation : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A numerical decision could not be made reliably (e.g. no spectral gap).
class IndeterminateResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gspin
