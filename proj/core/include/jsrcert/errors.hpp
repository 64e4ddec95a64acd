#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jsrcert {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A switching symbol outside {1, ..., M}.
class InvalidModeError : public Error {
 public:
  using Error::Error;
};

// Matrix or vector dimensions inconsistent with the declared system.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input rejected before any computation (bad ranges, degenerate data, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Derived quantity left its admissible range (e.g. a target rate outside (0,1)).
class ParameterInfeasibleError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// Word enumeration would exceed the configured budget. Carries how far we got.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::uint64_t required, std::uint64_t budget,
              int depth_reached)
      : Error(what), required_(required), budget_(budget), depth_reached_(depth_reached) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }
  // Largest word length fully processed before hitting the cap (0 if none).
  int depth_reached() const { return depth_reached_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
  int depth_reached_;
};

// A window Gram matrix was numerically singular where a positive definite one
// is required (rank-deficient observability window).
class SingularGramError : public Error {
 public:
  using Error::Error;
};

// The inner feasibility solve exhausted its sweep budget while still making
// progress: neither feasible nor provably stuck. Carries the probe value.
class IndeterminateError : public Error {
 public:
  IndeterminateError(const std::string& what, double probe_gamma)
      : Error(what), probe_gamma_(probe_gamma) {}

  double probe_gamma() const { return probe_gamma_; }

 private:
  double probe_gamma_;
};

// File or serialization problems.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace jsrcert
