#pragma once

#include <stdexcept>
#include <string>

namespace hypercross {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Tensor shape does not match the requested dyadic level.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A quadrature rule failed to reach its tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A linear system that must be uniquely solvable was singular.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// A least-squares fit could not be performed.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypercross
