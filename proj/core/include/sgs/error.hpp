#pragma once

#include <stdexcept>
#include <string>

namespace sgs {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied a value outside the documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A sampling design that cannot be realized with the given inputs.
class DesignError : public Error {
 public:
  using Error::Error;
};

// Budget or allocation exceeds what a stratum can supply.
class InfeasibleDesign : public DesignError {
 public:
  using DesignError::DesignError;
};

// Design quantities that are undefined (zero denominators, empty strata).
class DegenerateDesign : public DesignError {
 public:
  using DesignError::DesignError;
};

// Surrogate specificity below 0.5; the complement surrogate should be used.
class SpecificityTooLow : public DesignError {
 public:
  explicit SpecificityTooLow(double specificity);
};

// Numerical procedures that did not reach a usable answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class CalibrationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// AUC or rate requested on data that cannot define it (e.g. one class only).
class UndefinedMetric : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sgs
