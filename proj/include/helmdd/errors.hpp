#pragma once

#include <stdexcept>
#include <string>

namespace helmdd {

// Invalid user input: bad configuration values, inconsistent geometry.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class BudgetError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularPivotError : public NumericalError {
 public:
  SingularPivotError(const std::string& what, long row)
      : NumericalError(what + " (row " + std::to_string(row) + ")"), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

}  // namespace helmdd
