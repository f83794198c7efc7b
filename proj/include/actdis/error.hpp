#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace actdis {

enum class ErrorCode {
  // ingest
  MissingHeader,
  NonMonotoneTimestamps,
  DuplicateTimestamp,
  NegativePower,
  MalformedCsv,
  NoOverlap,
  AllGaps,
  UnknownAppliance,
  InvalidActivityMap,
  // features
  WrongWindowLength,
  MissingTemperature,
  EmptyMatrix,
  // svm
  NotStandardized,
  DimensionMismatch,
  VersionMismatch,
  MalformedModelFile,
  InvalidArgument,
  // eval
  TooFewWindows,
  TimestampMismatch,
  EmptyCounts,
  // activity_model
  NoCompleteDays,
  GridMismatch,
  SequenceTooShort,
  ReducibleChain,
  ZeroRow,
  // synth
  InvalidConfig,
  InvalidPeriod,
  // io
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace actdis
