#pragma once

#include <stdexcept>
#include <string>

namespace nclb {

/// Non-finite input to a scalar kernel.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested derivative order is not available for this kernel or instance.
class UnsupportedOrder : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operation is not meaningful for this instance variant.
class UnsupportedVariant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Violated precondition on a parameter (non-positive budget, d < 2T, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The scaling formulas produce T < 1; the lower bound is vacuous there.
class DegenerateBudget : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Distance variant with sigma > D.
class VacuousBound : public DegenerateBudget {
 public:
  using DegenerateBudget::DegenerateBudget;
};

/// Numerical solver failure (root finder, orthogonal completion).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized input (instance files, CSV, config files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nclb
