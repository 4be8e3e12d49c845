#pragma once

#include <string_view>

#include "cookiepilot/analyze/notice_model.hpp"

namespace cookiepilot::decide {

enum class LabelSemantics {
  kRejectAll,
  kAcceptAll,
  kSaveConfirm,
  kMoreOptions,
  kEssentialOnlyPositive,  // "only necessary cookies": selecting it disables the rest
  kNegatedConsent,         // "do not allow ...": SELECTED means disabled
  kNeutral,
};

std::string_view semantics_name(LabelSemantics s);

// Lexicon and phrase rules, checked in the order of the enum comment in
// semantics.cpp. Input is expected lowercase; it is lowercased anyway.
LabelSemantics classify_label_semantics(std::string_view label);

// "object to legitimate interests" style controls.
bool objects_to_legitimate_interest(std::string_view label);

// Category switches for cookies the site needs to function.
bool essential_category(std::string_view label);

// Close / dismiss controls that neither accept nor reject explicitly.
bool is_dismissal(std::string_view label);

// Which switch state leaves the category's non-essential cookies off.
SettingState disabled_state(std::string_view switch_label);

// No Type A/B/C element and every Type D element is accept-like.
bool is_accept_only(const NoticeModel& model);

}  // namespace cookiepilot::decide
