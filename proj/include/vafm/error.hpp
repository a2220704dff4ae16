#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vafm {

enum class ErrorCode {
  NoAtoms,
  MalformedRecord,
  InvalidAccession,
  NetworkError,
  NotFound,
  NoGeometry,
  IndexOutOfRange,
  DegenerateExtent,
  NonWatertight,
  TooLarge,
  InvalidArgument,
  IoError,
  FormatError,
  SchemaError,
  MissingFile,
  DimensionMismatch,
  TooSmall,
  UnpairedFile,
  EmptyDirectory,
  OutputExists,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoAtoms: return "NoAtoms";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::InvalidAccession: return "InvalidAccession";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::NoGeometry: return "NoGeometry";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateExtent: return "DegenerateExtent";
    case ErrorCode::NonWatertight: return "NonWatertight";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::UnpairedFile: return "UnpairedFile";
    case ErrorCode::EmptyDirectory: return "EmptyDirectory";
    case ErrorCode::OutputExists: return "OutputExists";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vafm
