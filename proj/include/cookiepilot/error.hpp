#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cookiepilot {

enum class ErrorCode {
  kSelectorSyntax,
  kSelectorUnresolvable,
  kEmptyPage,
  kDriverUnreachable,
  kSessionRejected,
  kProtocolError,
  kNavTimeout,
  kPageCrashed,
  kContainerGone,
  kClassifierUnavailable,
  kExplorationBudgetExceeded,
  kProbeAborted,
  kEmptyModel,
  kPlanRejected,
  kPlanSyntaxError,
  kUnknownTag,
  kValidationFailed,
  kStaleWrite,
  kEmptyRegion,
  kBundleInvalid,
  kConfig,
};

std::string_view error_code_name(ErrorCode code);

// All pipeline failures surface as this type. `cause` carries the
// underlying failure when one error wraps another (e.g. a
// DriverUnreachable caused by a ProtocolError).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string cause = {})
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        cause_(std::move(cause)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& cause() const noexcept { return cause_; }

 private:
  ErrorCode code_;
  std::string cause_;
};

}  // namespace cookiepilot
