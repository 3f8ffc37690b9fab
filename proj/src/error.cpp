#include "ffif/error.hpp"

namespace ffif {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::InvalidLevels: return "INVALID_LEVELS";
    case ErrorCode::InvalidMembership: return "INVALID_MEMBERSHIP";
    case ErrorCode::NonNormal: return "NON_NORMAL";
    case ErrorCode::NonConvexLevels: return "NON_CONVEX_LEVELS";
    case ErrorCode::UnboundedSupport: return "UNBOUNDED_SUPPORT";
    case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::DegenerateInterval: return "DEGENERATE_INTERVAL";
    case ErrorCode::OutOfInterval: return "OUT_OF_INTERVAL";
    case ErrorCode::OutOfDomain: return "OUT_OF_DOMAIN";
    case ErrorCode::ScaleOutOfRange: return "SCALE_OUT_OF_RANGE";
    case ErrorCode::MatchingNotVerified: return "MATCHING_NOT_VERIFIED";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::InvalidTauChoice: return "INVALID_TAU_CHOICE";
    case ErrorCode::NonPositiveExponent: return "NON_POSITIVE_EXPONENT";
    case ErrorCode::InsufficientResolution: return "INSUFFICIENT_RESOLUTION";
    case ErrorCode::ConfigParse: return "CONFIG_PARSE";
    case ErrorCode::SchemaViolation: return "SCHEMA_VIOLATION";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoConvergence: return 3;
    case ErrorCode::Io: return 4;
    default: return 2;
  }
}

}  // namespace ffif
