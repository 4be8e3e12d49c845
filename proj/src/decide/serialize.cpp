#include "cookiepilot/decide/serialize.hpp"

#include <cctype>
#include <set>

#include "cookiepilot/decide/semantics.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/text.hpp"

namespace cookiepilot::decide {
namespace {

constexpr std::string_view kViewSep = " ** ";
constexpr std::string_view kEntrySep = " || ";
constexpr std::string_view kEnd = "<end>";

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos)) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::vector<std::string> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      return parts;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
}

[[noreturn]] void syntax(const std::string& what) {
  throw Error(ErrorCode::kPlanSyntaxError, what);
}

Role infer_role(const ElementTag& tag, const std::string& label) {
  if (tag.kind == ElementTag::Kind::kSwitch) return Role::kTypeA;
  switch (classify_label_semantics(label)) {
    case LabelSemantics::kMoreOptions: return Role::kTypeB;
    case LabelSemantics::kRejectAll:
    case LabelSemantics::kAcceptAll:
    case LabelSemantics::kSaveConfirm:
    case LabelSemantics::kEssentialOnlyPositive: return Role::kTypeD;
    default: return is_dismissal(label) ? Role::kTypeD : Role::kTypeC;
  }
}

}  // namespace

std::string sanitize_label(std::string_view label) {
  std::string s = text::normalize_whitespace(text::to_lower(label));
  replace_all(s, "<end>", "end");
  while (s.find("||") != std::string::npos) replace_all(s, "||", "|");
  while (s.find("**") != std::string::npos) replace_all(s, "**", "*");
  return text::normalize_whitespace(s);
}

SerializedNotice serialize(const NoticeModel& model) {
  std::vector<std::string> views;
  for (const auto& v : model.views) {
    std::vector<std::string> entries;
    for (const auto& e : v.elements) {
      if (!e.role) throw Error(ErrorCode::kValidationFailed, "unprobed element " + e.snapshot.node_id);
      if (*e.role == Role::kUnknown) continue;
      ElementTag tag = e.tag;
      tag.kind = *e.role == Role::kTypeA ? ElementTag::Kind::kSwitch : ElementTag::Kind::kButton;
      std::string entry = tag.rendered() + " - " + sanitize_label(e.label);
      if (tag.kind == ElementTag::Kind::kSwitch) {
        entry += e.state == SettingState::kSelected ? ", selected" : ", not selected";
      }
      entries.push_back(std::move(entry));
    }
    if (entries.empty()) continue;
    std::string joined;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i > 0) joined += kEntrySep;
      joined += entries[i];
    }
    views.push_back(std::move(joined));
  }
  if (views.empty()) throw Error(ErrorCode::kEmptyModel, model.domain);
  std::string out;
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (i > 0) out += kViewSep;
    out += views[i];
  }
  out += " ";
  out += kEnd;
  return {std::move(out), model};
}

NoticeModel parse_serialized(std::string_view input, std::string domain) {
  std::string body = text::normalize_whitespace(input);
  if (body.size() >= kEnd.size() && body.compare(body.size() - kEnd.size(), kEnd.size(), kEnd) == 0) {
    body = text::normalize_whitespace(body.substr(0, body.size() - kEnd.size()));
  }
  if (body.empty()) syntax("empty notice text");

  NoticeModel model;
  model.domain = std::move(domain);
  const auto view_texts = split_on(body, "**");
  for (std::size_t vi = 0; vi < view_texts.size(); ++vi) {
    View view;
    std::set<std::string> seen;
    for (const auto& raw : split_on(view_texts[vi], "||")) {
      std::string entry = text::normalize_whitespace(raw);
      std::size_t i = 0;
      while (i < entry.size() && std::isalpha(static_cast<unsigned char>(entry[i]))) ++i;
      while (i < entry.size() && std::isdigit(static_cast<unsigned char>(entry[i]))) ++i;
      auto tag = ElementTag::parse(std::string_view(entry).substr(0, i));
      if (!tag) syntax("bad tag in '" + entry + "'");
      std::size_t j = i;
      while (j < entry.size() && entry[j] == ' ') ++j;
      if (j >= entry.size() || entry[j] != '-') syntax("missing ' - ' in '" + entry + "'");
      std::string label = text::normalize_whitespace(std::string_view(entry).substr(j + 1));

      InteractiveElement el;
      el.tag = *tag;
      el.view_index = static_cast<int>(vi);
      if (tag->kind == ElementTag::Kind::kSwitch) {
        auto comma = label.rfind(',');
        if (comma == std::string::npos) syntax("switch without state in '" + entry + "'");
        std::string state = text::normalize_whitespace(std::string_view(label).substr(comma + 1));
        if (state == "selected") {
          el.state = SettingState::kSelected;
        } else if (state == "not selected") {
          el.state = SettingState::kNotSelected;
        } else {
          syntax("bad state '" + state + "'");
        }
        label = text::normalize_whitespace(std::string_view(label).substr(0, comma));
      }
      if (!seen.insert(tag->rendered()).second) syntax("duplicate tag " + tag->rendered());
      el.label = label;
      el.role = infer_role(*tag, label);
      el.snapshot.node_id = "v" + std::to_string(vi) + "-" + tag->rendered();
      view.elements.push_back(std::move(el));
    }
    if (vi > 0) {
      for (const auto& e : model.views[vi - 1].elements) {
        if (*e.role == Role::kTypeB) {
          view.opened_by = ViewOpener{static_cast<int>(vi - 1), e.tag, e.snapshot.node_id};
          break;
        }
      }
    }
    model.views.push_back(std::move(view));
  }
  model.accept_only = is_accept_only(model);
  return model;
}

}  // namespace cookiepilot::decide
