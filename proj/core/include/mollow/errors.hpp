#pragma once

#include <stdexcept>
#include <string>

namespace mollow {

/// Base of every error raised by the library. kind() is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define MOLLOW_DEFINE_ERROR(Name, tag)                      \
  class Name : public Error {                               \
   public:                                                  \
    using Error::Error;                                     \
    const char* kind() const noexcept override { return tag; } \
  };

MOLLOW_DEFINE_ERROR(InvalidDimension, "invalid-dimension")
MOLLOW_DEFINE_ERROR(InvalidParameter, "invalid-parameter")
MOLLOW_DEFINE_ERROR(DomainError, "domain-error")
MOLLOW_DEFINE_ERROR(NoUniqueSteadyState, "no-unique-steady-state")
MOLLOW_DEFINE_ERROR(ConvergenceError, "non-convergence")
MOLLOW_DEFINE_ERROR(WindowTooShort, "window-too-short")
MOLLOW_DEFINE_ERROR(FitError, "fit-error")
MOLLOW_DEFINE_ERROR(InsufficientData, "insufficient-data")
MOLLOW_DEFINE_ERROR(SweepFailed, "sweep-failed")

#undef MOLLOW_DEFINE_ERROR

}  // namespace mollow
