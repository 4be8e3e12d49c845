#include "cookiepilot/decide/semantics.hpp"

#include <algorithm>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "cookiepilot/text.hpp"

namespace cookiepilot::decide {
namespace {

using Words = std::vector<std::string>;

bool has_word(const Words& ws, std::string_view w) {
  return std::find(ws.begin(), ws.end(), w) != ws.end();
}

bool has_any(const Words& ws, std::initializer_list<std::string_view> options) {
  return std::any_of(options.begin(), options.end(), [&](auto w) { return has_word(ws, w); });
}

bool has_prefix_word(const Words& ws, std::string_view prefix) {
  return std::any_of(ws.begin(), ws.end(), [&](const std::string& w) { return w.rfind(prefix, 0) == 0; });
}

bool has_phrase(const Words& ws, std::initializer_list<std::string_view> phrase) {
  const std::size_t n = phrase.size();
  if (n == 0 || ws.size() < n) return false;
  for (std::size_t i = 0; i + n <= ws.size(); ++i) {
    std::size_t k = 0;
    for (auto p : phrase) {
      if (ws[i + k] != p) break;
      ++k;
    }
    if (k == n) return true;
  }
  return false;
}

// "essential"/"necessary"/"required" not preceded by "non"/"un".
bool mentions_essential(const Words& ws) {
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const std::string& w = ws[i];
    bool hit = w == "essential" || w == "necessary" || w == "required" || w == "strictly";
    if (!hit) continue;
    if (i > 0 && (ws[i - 1] == "non" || ws[i - 1] == "not")) continue;
    return true;
  }
  return false;
}

bool negated_consent(const Words& ws) {
  static const std::set<std::string> kVerbs = {"allow", "sell", "share", "track", "use",
                                               "consent", "want", "personalise", "personalize"};
  for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
    bool neg = (ws[i] == "do" && i + 2 < ws.size() && ws[i + 1] == "not" &&
                kVerbs.count(ws[i + 2])) ||
               (ws[i] == "don't" && kVerbs.count(ws[i + 1]));
    if (neg) return true;
  }
  return false;
}

bool essential_only(const Words& ws) {
  if (!mentions_essential(ws)) return false;
  if (has_any(ws, {"only", "just"})) return true;
  return has_phrase(ws, {"accept", "necessary"}) || has_phrase(ws, {"allow", "necessary"}) ||
         has_phrase(ws, {"accept", "essential"}) || has_phrase(ws, {"allow", "essential"}) ||
         has_phrase(ws, {"use", "necessary"}) || has_phrase(ws, {"use", "essential"});
}

bool reject_like(const Words& ws) {
  if (has_any(ws, {"reject", "decline", "refuse", "deny", "disagree", "sorry", "diet"})) {
    return true;
  }
  return has_phrase(ws, {"opt", "out"}) || has_phrase(ws, {"no", "thanks"}) ||
         has_phrase(ws, {"disable", "all"}) || has_phrase(ws, {"do", "not", "accept"}) ||
         has_phrase(ws, {"don't", "accept"}) || has_phrase(ws, {"do", "not", "agree"}) ||
         has_phrase(ws, {"don't", "agree"}) || has_phrase(ws, {"deny", "all"});
}

bool save_like(const Words& ws) {
  if (has_any(ws, {"save", "confirm", "submit", "apply"})) return true;
  return has_phrase(ws, {"accept", "selection"}) || has_phrase(ws, {"accept", "selected"}) ||
         has_phrase(ws, {"allow", "selection"}) || has_phrase(ws, {"allow", "selected"}) ||
         has_phrase(ws, {"accept", "my", "choices"}) ||
         has_phrase(ws, {"update", "preferences"}) || has_phrase(ws, {"update", "settings"});
}

// Short affirmative phrases made only of acceptance vocabulary.
bool accept_like(const Words& ws) {
  static const std::set<std::string> kCore = {"accept", "agree", "allow", "ok",    "okay",
                                              "got",    "sweet", "yes",   "sure",  "understand",
                                              "understood", "consent", "enable", "continue"};
  static const std::set<std::string> kFiller = {
      "i",   "it",    "all",  "cookies", "cookie", "and",     "close", "proceed", "everything",
      "fine", "great", "thanks", "thank", "you",  "to",      "the",   "use",     "of",
      "we",  "that's", "that", "me",   "recommended", "settings", "continue", "&", "with", "a",
      "lot", "'"};
  if (ws.empty()) return false;
  bool core = false;
  for (const auto& w : ws) {
    if (kCore.count(w)) {
      core = true;
    } else if (!kFiller.count(w)) {
      return false;
    }
  }
  return core;
}

bool more_options_like(const Words& ws) {
  if (has_any(ws, {"customize", "customise", "settings", "preferences", "preference", "options",
                   "manage", "purposes", "configure", "details", "choose"})) {
    return true;
  }
  return has_prefix_word(ws, "personalis") || has_prefix_word(ws, "personaliz") ||
         has_phrase(ws, {"more", "information"}) || has_phrase(ws, {"more", "info"}) ||
         has_phrase(ws, {"show", "vendors"});
}

}  // namespace

std::string_view semantics_name(LabelSemantics s) {
  switch (s) {
    case LabelSemantics::kRejectAll: return "REJECT_ALL";
    case LabelSemantics::kAcceptAll: return "ACCEPT_ALL";
    case LabelSemantics::kSaveConfirm: return "SAVE_CONFIRM";
    case LabelSemantics::kMoreOptions: return "MORE_OPTIONS";
    case LabelSemantics::kEssentialOnlyPositive: return "ESSENTIAL_ONLY_POSITIVE";
    case LabelSemantics::kNegatedConsent: return "NEGATED_CONSENT";
    case LabelSemantics::kNeutral: return "NEUTRAL";
  }
  return "NEUTRAL";
}

// Order: negated consent, essential-only, reject, save/confirm, accept,
// more options. Earlier rules win, e.g. "do not accept" is a reject and
// "accept selection" is a save.
LabelSemantics classify_label_semantics(std::string_view label) {
  const Words ws = text::words(label);
  if (negated_consent(ws)) return LabelSemantics::kNegatedConsent;
  if (essential_only(ws)) return LabelSemantics::kEssentialOnlyPositive;
  if (reject_like(ws)) return LabelSemantics::kRejectAll;
  if (save_like(ws)) return LabelSemantics::kSaveConfirm;
  if (accept_like(ws)) return LabelSemantics::kAcceptAll;
  if (more_options_like(ws)) return LabelSemantics::kMoreOptions;
  return LabelSemantics::kNeutral;
}

bool objects_to_legitimate_interest(std::string_view label) {
  const Words ws = text::words(label);
  return has_any(ws, {"object", "objection"});
}

bool essential_category(std::string_view label) {
  return mentions_essential(text::words(label));
}

bool is_dismissal(std::string_view label) {
  const Words ws = text::words(label);
  if (ws.empty()) return label.find("\xC3\x97") != std::string_view::npos;  // "×"
  return (ws.size() <= 2 && has_any(ws, {"close", "dismiss", "x", "later"})) ||
         has_phrase(ws, {"not", "now"});
}

SettingState disabled_state(std::string_view switch_label) {
  LabelSemantics s = classify_label_semantics(switch_label);
  if (s == LabelSemantics::kNegatedConsent || s == LabelSemantics::kEssentialOnlyPositive) {
    return SettingState::kSelected;
  }
  return SettingState::kNotSelected;
}

bool is_accept_only(const NoticeModel& model) {
  bool any = false;
  for (const auto& v : model.views) {
    for (const auto& e : v.elements) {
      if (!e.serializable()) continue;
      if (*e.role != Role::kTypeD) return false;
      any = true;
      LabelSemantics s = classify_label_semantics(e.label);
      if (s != LabelSemantics::kAcceptAll && !is_dismissal(e.label)) return false;
    }
  }
  return any;
}

}  // namespace cookiepilot::decide
