#pragma once

#include <stdexcept>
#include <string>

namespace dictapp {

/// Position in a source file; line and column are 1-based, 0 means unknown.
struct Span {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
};

/// Base class of every diagnostic the toolchain raises.
///
/// `exit_code()` maps the error onto the CLI's exit status convention:
/// 1 for type and safety errors, 2 for usage and parse errors, 3 for an
/// internal bound (fuel, closure size, recursion depth, variant limit).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, std::string message, Span span = {})
      : std::runtime_error(message),
        kind_(std::move(kind)),
        message_(std::move(message)),
        span_(span) {}

  const std::string &kind() const { return kind_; }
  const std::string &message() const { return message_; }
  const Span &span() const { return span_; }
  virtual int exit_code() const = 0;

 private:
  std::string kind_;
  std::string message_;
  Span span_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, Span span)
      : Error("SyntaxError", std::move(message), span) {}
  int exit_code() const override { return 2; }
};

/// Well-formedness failures detected while loading a program
/// (DuplicateName, UnknownClass, OverlappingInstances, ...).
class ValidationError : public Error {
 public:
  ValidationError(std::string kind, std::string message, Span span = {})
      : Error(std::move(kind), std::move(message), span) {}
  int exit_code() const override { return 2; }
};

/// Source and target typing failures: UnificationFail, OccursCheck,
/// UnboundVar, Mismatch, NotAFunction, NotAForall, UnsolvableConstraint,
/// AmbiguousPrincipalType, SkolemEscape, UnspecifiedType.
class TypeError : public Error {
 public:
  TypeError(std::string kind, std::string message, Span span = {})
      : Error(std::move(kind), std::move(message), span) {}
  int exit_code() const override { return 1; }
};

/// Raised when an explicit dictionary application fails the coherence
/// safety condition.
class SafetyViolation : public Error {
 public:
  SafetyViolation(std::string message, Span span)
      : Error("SafetyViolation", std::move(message), span) {}
  int exit_code() const override { return 1; }
};

/// DepthExceeded, ClosureExploded, FuelExhausted, LimitExceeded.
class BoundExceeded : public Error {
 public:
  BoundExceeded(std::string kind, std::string message, Span span = {})
      : Error(std::move(kind), std::move(message), span) {}
  int exit_code() const override { return 3; }
};

}  // namespace dictapp
