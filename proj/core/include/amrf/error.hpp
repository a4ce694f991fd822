#pragma once

#include <stdexcept>
#include <string>

namespace amrf {

enum class ErrorCode {
  FileNotFound,
  DecodeError,
  NonBinaryValues,
  IoError,
  EmptyMask,
  DimensionMismatch,
  ValueOutOfRange,
  NoRegionFound,
  EmptyTrainingSet,
  MaskNotFound,
  SingleClassTrainingSet,
  EmptyCrop,
  EmptyManifest,
  StaleVerdicts,
  ConfigError,
};

const char* to_string(ErrorCode code);

/// Library-wide exception carrying a stable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace amrf
