#pragma once

#include <stdexcept>
#include <string>

namespace fairrec {

// Structured error codes; every throw site names the violated constraint.
enum class ErrorCode {
  NonFiniteRelevance,
  NegativeRelevance,
  KOutOfRange,
  TooFewSlots,
  AlphaOutOfRange,
  IndexOutOfRange,
  InconsistentState,
  EmptyExposure,
  LengthMismatch,
  TooLarge,
  ParseError,
  NegativeScore,
  DuplicatePair,
  MissingCoordinate,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteRelevance: return "NonFiniteRelevance";
    case ErrorCode::NegativeRelevance: return "NegativeRelevance";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::TooFewSlots: return "TooFewSlots";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InconsistentState: return "InconsistentState";
    case ErrorCode::EmptyExposure: return "EmptyExposure";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NegativeScore: return "NegativeScore";
    case ErrorCode::DuplicatePair: return "DuplicatePair";
    case ErrorCode::MissingCoordinate: return "MissingCoordinate";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fairrec
