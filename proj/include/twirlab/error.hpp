#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twirlab {

enum class ErrorCode {
  DimensionMismatch,
  RangeViolation,
  ValidationFailure,
  NotAGroup,
  LabelMismatch,
  CertificationError,
  UnsupportedSize,
  ActionNotPhysical,
  InconsistentWorlds,
  TrivialAction,
  NotSeparable,
  PreconditionViolation,
  BadParam,
  SchemaError,
  DimensionError,
  UnknownBuiltin,
  NonFinite,
  EmptyInput,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {})
      : std::runtime_error(message), code_(code), path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  // Location inside a model document (e.g. "group.elements[1].matrices.A"),
  // empty when the error is not tied to input.
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message,
                              std::string path = {}) {
  throw Error(code, message, std::move(path));
}

}  // namespace twirlab
