#pragma once

#include <stdexcept>
#include <string>

namespace goe_transit {

/// Invalid model parameter or argument (bad dimension, non-positive scale, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a closed form (on a branch cut, evanescent channel, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure: eigensolver non-convergence, singular linear system, pole hit.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A probability-zero degenerate realization (D = 0, singular channel system, on-pole
/// self-energy). Ensembles skip and record these instead of aborting.
class SingularRealizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PoleError : public SingularRealizationError {
 public:
  using SingularRealizationError::SingularRealizationError;
};

}  // namespace goe_transit
