#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwalab {

enum class ErrorCode {
  InconsistentPresentation,
  SizeCap,
  UnknownName,
  NotInSubgroup,
  NotDivisible,
  PrecisionExhausted,
  BadUnit,
  NoConvergence,
  IncompleteTable,
  NotVirtual,
  NotAUnit,
  NoTruncation,
  OutOfModel,
  ConfigError,
  GroupTooLarge,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
  case ErrorCode::InconsistentPresentation: return "InconsistentPresentation";
  case ErrorCode::SizeCap: return "SizeCap";
  case ErrorCode::UnknownName: return "UnknownName";
  case ErrorCode::NotInSubgroup: return "NotInSubgroup";
  case ErrorCode::NotDivisible: return "NotDivisible";
  case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
  case ErrorCode::BadUnit: return "BadUnit";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::IncompleteTable: return "IncompleteTable";
  case ErrorCode::NotVirtual: return "NotVirtual";
  case ErrorCode::NotAUnit: return "NotAUnit";
  case ErrorCode::NoTruncation: return "NoTruncation";
  case ErrorCode::OutOfModel: return "OutOfModel";
  case ErrorCode::ConfigError: return "ConfigError";
  case ErrorCode::GroupTooLarge: return "GroupTooLarge";
  case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// reports can distinguish mathematical failures from precision exhaustion.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace iwalab
