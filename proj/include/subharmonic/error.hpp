#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subharmonic {

/// Stable error codes. The names returned by `code_name` are part of the CLI's
/// machine-readable error output and must not change.
enum class ErrorCode {
  InvalidInput,
  TooFewRows,
  ConstantColumn,
  RankDeficient,
  NumericalRankLoss,
  TooManyModels,
  DivergentIntegral,
  NonConvergent,
  NullModelForbidden,
  DomainError,
  PerfectFit,
  MomentDiverges,
  UnsupportedFamily,
  NumericalMismatch,
  EmptyModelSet,
  NegativeWeight,
  InvalidPrior,
  ParseError,
  EmptyFile,
  IoError,
  InvalidConfig,
};

constexpr std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NumericalRankLoss: return "NumericalRankLoss";
    case ErrorCode::TooManyModels: return "TooManyModels";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::NullModelForbidden: return "NullModelForbidden";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PerfectFit: return "PerfectFit";
    case ErrorCode::MomentDiverges: return "MomentDiverges";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::NumericalMismatch: return "NumericalMismatch";
    case ErrorCode::EmptyModelSet: return "EmptyModelSet";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::InvalidPrior: return "InvalidPrior";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace subharmonic
