#pragma once

#include <stdexcept>
#include <string>

namespace diverge {

/// Argument outside the domain of a fundamental diagram (e.g. rho > jam density).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A (demand, supply) pair that is not a point of the diagram's supply-demand curve.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Diverge-model or simulator parameters that violate their constraints.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mismatched inputs to a comparison (grids, step counts).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Densities left [0, jam density]; points at a CFL or flux bug.
class NumericalStabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver result violated one of its own guarantees.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed run-configuration file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diverge
