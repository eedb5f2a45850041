#pragma once

#include <stdexcept>
#include <string>

namespace hacdyn {

enum class ErrorCode {
  DimensionMismatch,
  RankDeficient,
  SingularQ,
  BandwidthOutOfRange,
  NonPsdLrv,
  InsufficientData,
  InsufficientHistory,
  ExplosiveSpec,
  InvalidArgument,
  ParseError,
  InvalidFlagValue,
  IoError,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI, the Monte Carlo harness, the Python bindings) can branch
// on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SingularQ: return "SingularQ";
    case ErrorCode::BandwidthOutOfRange: return "BandwidthOutOfRange";
    case ErrorCode::NonPsdLrv: return "NonPsdLrv";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::ExplosiveSpec: return "ExplosiveSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidFlagValue: return "InvalidFlagValue";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hacdyn
