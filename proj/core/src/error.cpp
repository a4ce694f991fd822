#include "amrf/error.hpp"

namespace amrf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::NonBinaryValues: return "NonBinaryValues";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::NoRegionFound: return "NoRegionFound";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::MaskNotFound: return "MaskNotFound";
    case ErrorCode::SingleClassTrainingSet: return "SingleClassTrainingSet";
    case ErrorCode::EmptyCrop: return "EmptyCrop";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::StaleVerdicts: return "StaleVerdicts";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace amrf
