#pragma once

#include <string>
#include <string_view>

#include "cookiepilot/analyze/notice_model.hpp"

namespace cookiepilot::decide {

// Single-line text form of a probed notice:
//
//   input := view (" ** " view)* " <end>"
//   view  := entry (" || " entry)*
//   entry := tag " - " label (", " state)?     state only on switches
//   state := "selected" | "not selected"
//
// The parser also accepts " , " before the state and arbitrary extra
// whitespace around separators.
struct SerializedNotice {
  std::string text;
  NoticeModel model_ref;
};

// Throws Error(kValidationFailed) when an element lacks a role and
// Error(kEmptyModel) when no serializable element remains.
SerializedNotice serialize(const NoticeModel& model);

// Label as it appears in the text: lowercase, single-spaced, with the
// separator sequences ("||", "**", "<end>") neutralized.
std::string sanitize_label(std::string_view label);

// Rebuilds a model from serialized text. Roles are inferred: switches are
// Type A; buttons with MORE_OPTIONS semantics are Type B and open the
// next view; buttons whose semantics conclude the interaction are Type D;
// everything else is Type C. Throws Error(kPlanSyntaxError).
NoticeModel parse_serialized(std::string_view text, std::string domain = {});

}  // namespace cookiepilot::decide
