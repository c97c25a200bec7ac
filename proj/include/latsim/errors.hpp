#pragma once

#include <stdexcept>
#include <string>

namespace latsim {

/// Input violates an operation's contract (bad dimensions, empty lists, ...).
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix required to have full column rank does not.
class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix required to be numerically nonsingular is singular.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumeration or codebook work exceeded its budget. This is a hard error:
/// silently approximating would corrupt the probability estimates built on
/// top of the enumeration results.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough usable data points for a fit or interpolation.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latsim
