#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pelab {

// Invalid input to a mathematical operation (bad permutation, NaN sample,
// out-of-range parameter, infeasible grid cell, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A series is shorter than an operation requires. Carries the minimum
// length that would have been accepted.
class SignalTooShort : public DomainError {
 public:
  SignalTooShort(const std::string& what, std::size_t required)
      : DomainError(what), required_(required) {}

  std::size_t required_length() const noexcept { return required_; }

 private:
  std::size_t required_;
};

// A demodulator input whose length is not a whole number of symbols.
class FramingError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Unknown scheme names, malformed files, inconsistent tables.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pelab
