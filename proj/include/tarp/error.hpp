#pragma once

#include <stdexcept>
#include <string>

namespace tarp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its valid range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed, missing or has incompatible shape.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (non-convergence, loss of definiteness).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tarp
