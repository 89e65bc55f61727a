#pragma once

#include <stdexcept>
#include <string>

namespace hydrofel {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A value lies outside the range where the model is valid.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent scenario configuration. `key()` names the
// offending entry (empty when the problem is not tied to one key).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key = {})
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// The integrator produced a non-finite value.
class NumericalBlowup : public Error {
 public:
  using Error::Error;
};

}  // namespace hydrofel
