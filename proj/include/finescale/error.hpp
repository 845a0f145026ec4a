#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finescale {

enum class ErrorCode {
  // input / usage errors
  InvalidSpec,
  InvalidDegree,
  InvalidR,
  TooShort,
  TooFewPoints,
  NonPositiveCount,
  MismatchedWindows,
  Usage,
  // numeric and capacity guards
  MagnitudeGuard,
  NotIncreasing,
  NonPositiveValue,
  WindowTooWide,
  DegenerateWindow,
  CapacityGuard,
  TooLarge,
  BudgetExceeded,
  ZeroDifference,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::InvalidR: return "InvalidR";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonPositiveCount: return "NonPositiveCount";
    case ErrorCode::MismatchedWindows: return "MismatchedWindows";
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::MagnitudeGuard: return "MagnitudeGuard";
    case ErrorCode::NotIncreasing: return "NotIncreasing";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::WindowTooWide: return "WindowTooWide";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
    case ErrorCode::CapacityGuard: return "CapacityGuard";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ZeroDifference: return "ZeroDifference";
  }
  return "Unknown";
}

/// True for errors raised by precision, capacity or budget guards (as opposed
/// to malformed input).
inline constexpr bool is_guard(ErrorCode code) {
  return code >= ErrorCode::MagnitudeGuard;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace finescale
