#pragma once

#include <stdexcept>
#include <string>

namespace fracstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed system definition text. Carries the 1-based line (0 if unknown)
/// and the dotted field path that failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string field)
      : Error(what), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Input that is well-formed but violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Commensurate polynomial would exceed the supported degree.
class DegreeError : public ValidationError {
 public:
  DegreeError(const std::string& what, long long required)
      : ValidationError(what), required_(required) {}
  long long required_degree() const noexcept { return required_; }

 private:
  long long required_;
};

/// Root finder hit its iteration cap without meeting the residual bound.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

}  // namespace fracstab
