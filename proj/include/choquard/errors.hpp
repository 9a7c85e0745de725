#pragma once

#include <stdexcept>
#include <string>

namespace chq {

enum class ErrorCode {
  InvalidInput,
  OutOfScope,
  WrongRegime,
  GridMismatch,
  ZeroField,
  InvalidAlpha,
  RootNotBracketed,
  SideConditionViolated,
  NonPositive,
  Diverged,
  MaxIters,
  FiberDegenerate,
  Io
};

const char* to_string(ErrorCode code);

class LabError : public std::runtime_error {
public:
  LabError(ErrorCode code, const std::string& what);
  ErrorCode code() const { return m_code; }

private:
  ErrorCode m_code;
};

//! Process exit status: 2 invalid input, 3 numerical failure, 4 side condition.
int exit_status(ErrorCode code);

} // namespace chq
