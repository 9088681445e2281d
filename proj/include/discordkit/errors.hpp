#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace discordkit {

enum class ErrorCode {
  NotHermitian,
  TraceNotOne,
  NotPositive,
  OptimizationFailed,
  ParamOutOfRange,
  DegeneratePoint,
  NoRoot,
  EmptyInput,
  FileNotFound,
  SchemaError,
  InvalidConfig,
};

std::string_view error_name(ErrorCode code);

// Domain error carrying the name of the violated contract. The message
// always starts with that name so it can be surfaced verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace discordkit
