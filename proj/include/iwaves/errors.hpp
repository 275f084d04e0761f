#pragma once

#include <stdexcept>
#include <string>

namespace iwaves {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, invalid configuration, violated
/// preconditions on arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateCurveError : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedDomainError : public InputError {
 public:
  using InputError::InputError;
};

/// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two roots of the boundary derivative fell inside a single grid cell.
class RefinementError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The domain is not lambda-simple, so the boundary involutions are undefined.
class NotSimpleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A small divisor 1 - exp(2 pi i k alpha) vanished to working precision.
class ResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RationalRotationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConjugacyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TargetUnreachableError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace iwaves
