#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rc {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument value (out of range, inconsistent parameters, bad vocabulary).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Incompatible matrix/vector shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Closed-loop prediction needs readout target dimension == model input dimension.
class ClosedLoopDimensionError : public DimensionError {
 public:
  using DimensionError::DimensionError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : Error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

// Spectral radius is zero, so no scale factor reaches a positive target.
class CannotRescaleError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

class NumericOverflowError : public Error {
 public:
  NumericOverflowError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Malformed model container or config file; `section()` names the failing block.
class FormatError : public Error {
 public:
  FormatError(const std::string& section, const std::string& what)
      : Error(section + ": " + what), section_(section) {}
  const std::string& section() const noexcept { return section_; }

 private:
  std::string section_;
};

}  // namespace rc
