#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kpp {

enum class ErrorCode {
  InvalidProfile,
  NonPositiveProfile,
  InvalidInputs,
  PreconditionViolated,
  NoConvergence,
  GridMisaligned,
  InvalidConfig,
  UnstableBlowup,
  DomainExhausted,
  LevelNotReached,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorCode::InvalidInputs: return "InvalidInputs";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GridMisaligned: return "GridMisaligned";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnstableBlowup: return "UnstableBlowup";
    case ErrorCode::DomainExhausted: return "DomainExhausted";
    case ErrorCode::LevelNotReached: return "LevelNotReached";
  }
  return "Unknown";
}

/// Numeric/domain failure raised by every library module. `what()` is
/// prefixed with the error name so callers can surface it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace kpp
