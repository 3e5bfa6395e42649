#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace o2lyap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or violated precondition on plain inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A coefficient left its admissible range (e.g. a non-positive diffusion weight).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An adaptive ODE integration gave up (step budget exhausted or the
/// right-hand side went non-finite). `reached` is the last accepted abscissa.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double reached)
      : Error(what), reached_(reached) {}
  double reached() const noexcept { return reached_; }

 private:
  double reached_;
};

/// A characteristic curve left the escape bound before the requested endpoint.
/// Raised by constructions that need the curve to exist globally.
class CharacteristicEscape : public Error {
 public:
  CharacteristicEscape(const std::string& what, double at) : Error(what), at_(at) {}
  /// Abscissa (u or x, depending on the construction) where the bound was crossed.
  double at() const noexcept { return at_; }

 private:
  double at_;
};

/// Non-finite or out-of-bounds state in a grid computation.
class NonFiniteState : public Error {
 public:
  NonFiniteState(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Newton shooting did not locate a periodic characteristic.
class NoPeriodicOrbit : public Error {
 public:
  using Error::Error;
};

/// A Lagrangian evaluation failed at a grid point of a field.
class GridEvaluationError : public Error {
 public:
  GridEvaluationError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace o2lyap
