#pragma once

#include <stdexcept>
#include <string>

namespace reshape {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or invalid configuration (grid/comb mismatch, bad parameter).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Comb span reaches the grid Nyquist frequency.
class AliasingError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

/// Analytic pulse does not fit inside one grid window.
class TruncationError : public Error {
public:
  using Error::Error;
};

/// Metric undefined for the given inputs (zero energy).
class MetricError : public Error {
public:
  using Error::Error;
};

/// Non-finite field values during propagation.
class NumericalError : public Error {
public:
  NumericalError(const std::string& what, double z)
      : Error(what + " (z = " + std::to_string(z) + ")"), z_(z) {}

  double z() const noexcept { return z_; }

private:
  double z_;
};

} // namespace reshape
