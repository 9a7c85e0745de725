#include "choquard/errors.hpp"

namespace chq {

const char* to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidInput: return "InvalidInput";
  case ErrorCode::OutOfScope: return "OutOfScope";
  case ErrorCode::WrongRegime: return "WrongRegime";
  case ErrorCode::GridMismatch: return "GridMismatch";
  case ErrorCode::ZeroField: return "ZeroField";
  case ErrorCode::InvalidAlpha: return "InvalidAlpha";
  case ErrorCode::RootNotBracketed: return "RootNotBracketed";
  case ErrorCode::SideConditionViolated: return "SideConditionViolated";
  case ErrorCode::NonPositive: return "NonPositive";
  case ErrorCode::Diverged: return "Diverged";
  case ErrorCode::MaxIters: return "MaxIters";
  case ErrorCode::FiberDegenerate: return "FiberDegenerate";
  case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

LabError::LabError(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), m_code(code) {}

int exit_status(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidInput:
  case ErrorCode::OutOfScope:
  case ErrorCode::WrongRegime:
  case ErrorCode::GridMismatch:
  case ErrorCode::InvalidAlpha:
  case ErrorCode::Io:
    return 2;
  case ErrorCode::SideConditionViolated:
  case ErrorCode::NonPositive:
    return 4;
  default:
    return 3;
  }
}

} // namespace chq
