#include "discordkit/errors.hpp"

namespace discordkit {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::OptimizationFailed: return "OptimizationFailed";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::DegeneratePoint: return "DegeneratePoint";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace discordkit
