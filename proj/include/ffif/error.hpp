#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffif {

enum class ErrorCode {
  InvalidArgument,
  InvalidLevels,
  InvalidMembership,
  NonNormal,
  NonConvexLevels,
  UnboundedSupport,
  GridMismatch,
  LengthMismatch,
  DegenerateInterval,
  OutOfInterval,
  OutOfDomain,
  ScaleOutOfRange,
  MatchingNotVerified,
  NoConvergence,
  InvalidTauChoice,
  NonPositiveExponent,
  InsufficientResolution,
  ConfigParse,
  SchemaViolation,
  Io,
};

/// Stable upper-snake identifier, used in CLI output and JSON reports.
std::string_view to_string(ErrorCode code) noexcept;

/// Process exit status for a failure of the given kind:
/// 2 validation failure, 3 convergence failure, 4 I/O error.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ffif
