#pragma once

#include <stdexcept>
#include <string>

namespace sapg {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot fell below tolerance: the matrix is not (numerically)
/// positive definite. For stiffness matrices this signals a design outside
/// the positive-definite domain.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// The iterative eigensolver exhausted its sweep budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// The requested feasible set contains no points.
class EmptySet : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Degenerate or kinematically unstable ground-structure geometry.
class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

/// The volume budget cannot accommodate every bar at the lower area bound.
class InfeasibleVolumeBudget : public Error {
 public:
  using Error::Error;
};

/// A solver iterate, gradient, or objective value became non-finite.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// Lyapunov diagnostics require the full state history, which was not retained.
class MissingStates : public Error {
 public:
  using Error::Error;
};

/// Config-file error carrying the offending line (0 when not line-specific).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace sapg
