#include "qgeom/errors.hpp"

namespace qgeom {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::OutOfChartRange: return "OutOfChartRange";
    case ErrorKind::VerificationFailure: return "VerificationFailure";
    case ErrorKind::DegenerateSupport: return "DegenerateSupport";
    case ErrorKind::SingularState: return "SingularState";
    case ErrorKind::PureState: return "PureState";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorKind::FitFailure: return "FitFailure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace qgeom
