#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lightstore {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid physical parameters, schedules, grids or configuration values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Integration failure (NaN, divergence, singular response).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::size_t step = 0)
      : Error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No detectable signal where an observable needs one.
class NoSignalError : public Error {
 public:
  using Error::Error;
};

/// A pulse was expected to lie inside the cell but touches a boundary.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// Interpolation or displacement queried outside the supplied support.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

}  // namespace lightstore
