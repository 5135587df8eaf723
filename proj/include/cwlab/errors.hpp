#pragma once

#include <stdexcept>
#include <string>

namespace cwlab {

/// Precondition violation on caller-supplied parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds a configured size or enumeration limit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quantifier ranged over an empty set where a witness was required.
class EmptySetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cache key collision with a differing value, or a corrupt cache file.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cwlab
