#pragma once

#include <stdexcept>
#include <string>

namespace cavgrover {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its admissible range.
class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// An argument does not fit the call (wrong level, negative amplitude, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// The mixing matrix handed to the collective transform is not usable.
class InvalidTransform : public Error {
public:
  using Error::Error;
};

/// Evaluation point outside the domain of a function (e.g. time outside a pulse window).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Mixing angle requested with both pulses off.
class UndefinedAngle : public Error {
public:
  using Error::Error;
};

/// Explicit integrator lost unitarity; carries a suggested step count.
class StepSizeFailure : public Error {
public:
  StepSizeFailure(const std::string& what, long suggested_steps)
      : Error(what), suggested_steps_(suggested_steps) {}

  long suggested_steps() const noexcept { return suggested_steps_; }

private:
  long suggested_steps_;
};

}  // namespace cavgrover
