#pragma once

#include <stdexcept>
#include <string>

namespace toda {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  InvalidStructureMatrix,
  SingularMatrix,
  InvalidSpec,
  ForbiddenBlock,
  ConstraintViolation,
  IncompatibleBlocks,
  ResourceLimit,
  BlowUp,
  CornerMismatch,
  Parse,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace toda
