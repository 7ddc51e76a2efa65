#pragma once

#include <stdexcept>
#include <string>

namespace ramified {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (mismatched curvature tags, antipodal points, alpha out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data violates an invariant (negative mass, unequal total mass,
/// unbalanced path, malformed nested collection, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A problem exceeds a configured size limit of an exact enumeration.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace ramified
