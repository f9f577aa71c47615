#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace symcap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimension, non-finite entries, violated preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Bad experiment or body description (unknown kind, missing field, ...).
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical procedure failed to reach its tolerance. Carries the residual
/// (or duality gap / bracket width) observed when it gave up.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Input matrix too close to singular / indefinite for the requested factorization.
class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace symcap
