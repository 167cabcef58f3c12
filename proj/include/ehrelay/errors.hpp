#pragma once

#include <stdexcept>
#include <string>

namespace ehrelay {

// Argument outside the mathematical domain of a function (x <= 0 for K1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parameter set violating a documented range (lambda outside (0,1), ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A numerical routine failed to meet its tolerance or produced an
// out-of-range value that cannot be attributed to rounding.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Monte Carlo estimate too noisy for the requested post-processing.
class InsufficientSamplesError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ehrelay
