#pragma once

#include <stdexcept>
#include <string>

namespace pbphase {

// Raised when two states or operators are built on incompatible truncations.
class ConfigMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure: non-convergence, degenerate heralding, exhausted search
// windows, insufficient statistics.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateHerald : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LowInformation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pbphase
