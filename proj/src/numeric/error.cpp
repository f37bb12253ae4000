#include "carleman/error.hpp"

namespace carleman {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::RingOutsideWindow: return "RingOutsideWindow";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::SolverDivergence: return "SolverDivergence";
    case ErrorKind::ZeroObservation: return "ZeroObservation";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::ToleranceExceeded: return "ToleranceExceeded";
    case ErrorKind::RepairInfeasible: return "RepairInfeasible";
    case ErrorKind::VerificationFailure: return "VerificationFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace carleman
