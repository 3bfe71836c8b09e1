#pragma once

#include <stdexcept>
#include <string>

namespace dtc {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (|Q| > 1, bad N, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Canonical (Q, P) chart evaluated at or next to |Q| = 1 where dP/dt diverges.
class PoleError : public Error {
public:
  using Error::Error;
};

/// A linear-algebra kernel failed to converge or produced non-finite output.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Evolution left its trusted regime (truncation budget or norm drift exceeded).
class AccuracyError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

}  // namespace dtc
