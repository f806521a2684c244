#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sstc {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  IoError,
  EmptyDocument,
  DuplicateName,
  CycleDetected,
  MultipleRoots,
  UnknownFeature,
  PatternTooSmall,
  PatternTooLarge,
  FeatureNotInPattern,
  TooFewInstances,
  EmptyEnsemble,
  EmptyInput,
  InvalidP,
  InvalidQ,
  InvalidSpec,
  InvalidSpecPair,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::PatternTooSmall: return "PatternTooSmall";
    case ErrorCode::PatternTooLarge: return "PatternTooLarge";
    case ErrorCode::FeatureNotInPattern: return "FeatureNotInPattern";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::InvalidQ: return "InvalidQ";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidSpecPair: return "InvalidSpecPair";
  }
  return "Unknown";
}

}  // namespace sstc
