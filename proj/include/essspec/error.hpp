#pragma once

#include <stdexcept>
#include <string>

namespace essspec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input violates a structural condition (orders, decay, schema).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A resolvent denominator vanished at the evaluation point.
class PoleError : public Error {
public:
  using Error::Error;
};

}  // namespace essspec
