#pragma once

#include <stdexcept>
#include <string>

namespace subnls {

/// Argument outside the mathematical domain of an operation (eps not in (0,1), p <= 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature did not reach its tolerance within the subdivision budget.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Backtracking exhausted while the energy still increased; indicates an inconsistent gradient.
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Luxemburg modular was not finite at any tested scale.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or schema-violating configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subnls
