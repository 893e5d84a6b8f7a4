#pragma once

#include <stdexcept>
#include <string>

namespace torharm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// bad user input: malformed files, out-of-range options
struct ConfigError : Error {
  using Error::Error;
};

// a numerical procedure left its validity domain
struct NumericalError : Error {
  using Error::Error;
};

struct ImmersionFailure : NumericalError {
  using NumericalError::NumericalError;
};

struct AxisIntersection : NumericalError {
  using NumericalError::NumericalError;
};

struct SingularFrame : NumericalError {
  using NumericalError::NumericalError;
};

struct AxisProximity : NumericalError {
  using NumericalError::NumericalError;
};

struct IncompatibleDatum : NumericalError {
  using NumericalError::NumericalError;
};

struct IllConditioned : NumericalError {
  using NumericalError::NumericalError;
};

struct TooCloseToBoundary : NumericalError {
  using NumericalError::NumericalError;
};

struct CirculationDrift : NumericalError {
  using NumericalError::NumericalError;
};

struct NotTransverse : NumericalError {
  using NumericalError::NumericalError;
};

struct NotLinearized : NumericalError {
  using NumericalError::NumericalError;
};

struct NonzeroAverage : NumericalError {
  using NumericalError::NumericalError;
};

struct SmallDivisorOverflow : NumericalError {
  using NumericalError::NumericalError;
};

struct NotDiophantineUpTo : NumericalError {
  long q;
  explicit NotDiophantineUpTo(long q_, const std::string& msg)
      : NumericalError(msg), q(q_) {}
};

struct StepFailure : NumericalError {
  using NumericalError::NumericalError;
};

// a validation run finished but missed its tolerance
struct AcceptanceFailure : Error {
  using Error::Error;
};

}  // namespace torharm
