#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace archivesafe {

enum class ErrorCode {
  // keyless wrap / solver
  DifficultyOutOfRange,
  CannotReduceDifficulty,
  ExhaustedNoSolution,
  SaltRequired,
  Cancelled,
  SolveTimeout,
  // kdf
  UnknownSuite,
  // symmetric layer
  PaddingInvalid,
  MessageTooLarge,
  // container
  BadMagic,
  UnsupportedVersion,
  TruncatedInput,
  ChecksumMismatch,
  MalformedLengths,
  MalformedFlags,
  // outsourcing
  MalformedRequest,
  DifficultyTooHigh,
  ServerReturnedInvalidSeed,
  Transport,
  // generic
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library carries one of the codes above so
/// callers (the CLI, the solver service) can map it to a stable exit status
/// or HTTP status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace archivesafe
