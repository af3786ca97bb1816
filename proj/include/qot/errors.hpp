#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qot {

/// Input outside the validity domain of a model (e.g. wavelength off the band plan).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The physical model cannot be evaluated for the given parameters.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric procedure (bisection, root bracketing) failed.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration; `field()` carries the dotted key path when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qot
