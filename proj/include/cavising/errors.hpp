#ifndef CAVISING_ERRORS_HPP
#define CAVISING_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cavising {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Physical or structural parameters outside their allowed range.
class InvalidParameters : public Error {
 public:
  explicit InvalidParameters(const std::string& msg) : Error(msg) {}
};

/// A numerical routine could not deliver a result at the requested accuracy.
/// `operation()` names the routine that failed so callers can report it.
class NumericalError : public Error {
 public:
  NumericalError(std::string operation, const std::string& msg)
      : Error(operation + ": " + msg), operation_(std::move(operation)) {}

  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string operation_;
};

class QuadratureError : public NumericalError {
 public:
  explicit QuadratureError(const std::string& msg)
      : NumericalError("field_axis_magnetization", msg) {}
};

class DerivativeError : public NumericalError {
 public:
  DerivativeError(const std::string& msg, double location)
      : NumericalError("dsx_dbx", msg), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

class ResolutionError : public NumericalError {
 public:
  explicit ResolutionError(const std::string& msg)
      : NumericalError("find_fixed_points", msg) {}
};

class NotFoundError : public NumericalError {
 public:
  NotFoundError(std::string operation, const std::string& msg)
      : NumericalError(std::move(operation), msg) {}
};

class DegeneracyError : public NumericalError {
 public:
  explicit DegeneracyError(const std::string& msg)
      : NumericalError("biorthogonal_eigvecs", msg) {}
};

class FitWindowError : public NumericalError {
 public:
  explicit FitWindowError(const std::string& msg)
      : NumericalError("critical_exponent_fit", msg) {}
};

}  // namespace cavising

#endif
