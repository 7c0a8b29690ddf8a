#pragma once

#include <stdexcept>
#include <string>

namespace ptstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (negative V, non-finite input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exponent or power that would exceed the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// dpsi/d(V^p) vanished, so the reciprocal gain is undefined.
class SingularGainError : public Error {
 public:
  using Error::Error;
};

/// Invalid construction parameters or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptstab
