#pragma once

#include <stdexcept>
#include <string>

namespace carleman {

enum class ErrorKind {
  NonFinite,
  DegenerateFit,
  RingOutsideWindow,
  Overflow,
  SolverDivergence,
  ZeroObservation,
  SupportViolation,
  ToleranceExceeded,
  RepairInfeasible,
  VerificationFailure,
  InvalidArgument,
  Config,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the toolkit; the kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // True for failures of the numerics themselves (exit code 3 in the CLI).
  bool is_numeric() const noexcept {
    return kind_ == ErrorKind::NonFinite || kind_ == ErrorKind::Overflow ||
           kind_ == ErrorKind::SolverDivergence || kind_ == ErrorKind::DegenerateFit ||
           kind_ == ErrorKind::ZeroObservation;
  }

 private:
  ErrorKind kind_;
};

}  // namespace carleman
