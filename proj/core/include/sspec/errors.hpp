#pragma once

#include <stdexcept>
#include <string>

namespace sspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A palindromic ensemble was requested at odd dimension, or a dimension was zero.
class IncompatibleDimension : public Error {
 public:
  using Error::Error;
};

/// A parameter vector does not have the free-parameter count of its ensemble.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// The tridiagonal QL iteration failed to deflate an off-diagonal element.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A brute-force enumeration would exceed its tuple budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace sspec
