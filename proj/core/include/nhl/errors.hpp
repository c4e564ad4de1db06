#pragma once

#include <stdexcept>
#include <string>

namespace nhl {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something outside a documented precondition
// (bad site count, off-boundary parameter, malformed config, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A numerical procedure could not deliver its contract.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}

  // Worst residual (or the diagnostic quantity that tripped the check).
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Reflection amplitude denominator vanished: a resonance, not a number.
class PoleError : public NumericalError {
 public:
  PoleError(const std::string& what, double k, double denominator)
      : NumericalError(what, denominator), k_(k) {}
  double k() const noexcept { return k_; }

 private:
  double k_;
};

// Lead fit window carries no usable amplitude.
class NoSignalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Iterative solver hit its iteration cap.
class NotConvergedError : public NumericalError {
 public:
  NotConvergedError(const std::string& what, double residual, int iterations)
      : NumericalError(what, residual), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

// A dynamics run violated its own validity conditions (wavefront hit the
// far wall, analysis window overlaps the front, ill-conditioned basis).
class InvalidRunError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace nhl
