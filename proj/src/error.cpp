#include "cookiepilot/error.hpp"

namespace cookiepilot {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSelectorSyntax: return "SelectorSyntax";
    case ErrorCode::kSelectorUnresolvable: return "SelectorUnresolvable";
    case ErrorCode::kEmptyPage: return "EmptyPage";
    case ErrorCode::kDriverUnreachable: return "DriverUnreachable";
    case ErrorCode::kSessionRejected: return "SessionRejected";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kNavTimeout: return "NavTimeout";
    case ErrorCode::kPageCrashed: return "PageCrashed";
    case ErrorCode::kContainerGone: return "ContainerGone";
    case ErrorCode::kClassifierUnavailable: return "ClassifierUnavailable";
    case ErrorCode::kExplorationBudgetExceeded: return "ExplorationBudgetExceeded";
    case ErrorCode::kProbeAborted: return "ProbeAborted";
    case ErrorCode::kEmptyModel: return "EmptyModel";
    case ErrorCode::kPlanRejected: return "PlanRejected";
    case ErrorCode::kPlanSyntaxError: return "PlanSyntaxError";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kStaleWrite: return "StaleWrite";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kBundleInvalid: return "BundleInvalid";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

}  // namespace cookiepilot
