#include "modspec/error.hpp"

namespace modspec {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveDim: return "NonPositiveDim";
    case ErrorKind::WeightMismatch: return "WeightMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::NotStrictlyPositive: return "NotStrictlyPositive";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NonPositiveEps: return "NonPositiveEps";
    case ErrorKind::TraceMismatchUnresolvable: return "TraceMismatchUnresolvable";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadFlux: return "BadFlux";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace modspec
