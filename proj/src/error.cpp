#include "actdis/error.hpp"

namespace actdis {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingHeader: return "MissingHeader";
    case ErrorCode::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorCode::NegativePower: return "NegativePower";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::AllGaps: return "AllGaps";
    case ErrorCode::UnknownAppliance: return "UnknownAppliance";
    case ErrorCode::InvalidActivityMap: return "InvalidActivityMap";
    case ErrorCode::WrongWindowLength: return "WrongWindowLength";
    case ErrorCode::MissingTemperature: return "MissingTemperature";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::NotStandardized: return "NotStandardized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::MalformedModelFile: return "MalformedModelFile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewWindows: return "TooFewWindows";
    case ErrorCode::TimestampMismatch: return "TimestampMismatch";
    case ErrorCode::EmptyCounts: return "EmptyCounts";
    case ErrorCode::NoCompleteDays: return "NoCompleteDays";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::ReducibleChain: return "ReducibleChain";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidPeriod: return "InvalidPeriod";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace actdis
