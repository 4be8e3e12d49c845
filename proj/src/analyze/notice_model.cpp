#include "cookiepilot/analyze/notice_model.hpp"

#include <charconv>

namespace cookiepilot {

std::string_view role_name(Role r) {
  switch (r) {
    case Role::kTypeA: return "TYPE_A";
    case Role::kTypeB: return "TYPE_B";
    case Role::kTypeC: return "TYPE_C";
    case Role::kTypeD: return "TYPE_D";
    case Role::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

Role role_from_name(std::string_view name) {
  if (name == "TYPE_A" || name == "A") return Role::kTypeA;
  if (name == "TYPE_B" || name == "B") return Role::kTypeB;
  if (name == "TYPE_C" || name == "C") return Role::kTypeC;
  if (name == "TYPE_D" || name == "D") return Role::kTypeD;
  return Role::kUnknown;
}

std::string_view setting_state_name(SettingState s) {
  switch (s) {
    case SettingState::kSelected: return "SELECTED";
    case SettingState::kNotSelected: return "NOT_SELECTED";
    case SettingState::kStateless: return "STATELESS";
  }
  return "STATELESS";
}

std::string_view discovery_name(Discovery d) {
  switch (d) {
    case Discovery::kTabbed: return "TABBED";
    case Discovery::kHiddenSupplement: return "HIDDEN_SUPPLEMENT";
    case Discovery::kDynamic: return "DYNAMIC";
  }
  return "TABBED";
}

std::string ElementTag::rendered() const {
  return (kind == Kind::kSwitch ? "switch" : "button") + std::to_string(index);
}

std::optional<ElementTag> ElementTag::parse(std::string_view s) {
  ElementTag tag;
  std::string_view digits;
  if (s.rfind("button", 0) == 0) {
    tag.kind = Kind::kButton;
    digits = s.substr(6);
  } else if (s.rfind("switch", 0) == 0) {
    tag.kind = Kind::kSwitch;
    digits = s.substr(6);
  } else {
    return std::nullopt;
  }
  if (digits.empty() || digits.size() > 9) return std::nullopt;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), tag.index);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return tag;
}

const InteractiveElement* NoticeModel::find(int view_index, const ElementTag& tag) const {
  if (view_index < 0 || static_cast<std::size_t>(view_index) >= views.size()) return nullptr;
  for (const auto& e : views[view_index].elements) {
    if (e.serializable() && e.tag == tag) return &e;
  }
  return nullptr;
}

const InteractiveElement* NoticeModel::find_node(std::string_view node_id) const {
  for (const auto& v : views) {
    for (const auto& e : v.elements) {
      if (e.snapshot.node_id == node_id) return &e;
    }
  }
  return nullptr;
}

InteractiveElement* NoticeModel::find_node(std::string_view node_id) {
  return const_cast<InteractiveElement*>(std::as_const(*this).find_node(node_id));
}

std::size_t NoticeModel::element_count() const {
  std::size_t n = 0;
  for (const auto& v : views) n += v.elements.size();
  return n;
}

void to_json(nlohmann::json& j, const ElementTag& t) { j = t.rendered(); }

void to_json(nlohmann::json& j, const InteractiveElement& e) {
  j = nlohmann::json{{"tag", e.tag.rendered()},
                     {"node_id", e.snapshot.node_id},
                     {"label", e.label},
                     {"state", setting_state_name(e.state)},
                     {"view_index", e.view_index},
                     {"discovery", discovery_name(e.discovery)},
                     {"role", e.role ? nlohmann::json(role_name(*e.role)) : nlohmann::json()},
                     {"selector", e.snapshot.selector_path.css},
                     {"click_target", e.click_target.css},
                     {"revealed_by", e.revealed_by},
                     {"low_confidence", e.low_confidence}};
}

void to_json(nlohmann::json& j, const NoticeModel& m) {
  nlohmann::json views = nlohmann::json::array();
  for (const auto& v : m.views) {
    nlohmann::json jv = {{"elements", v.elements}, {"notice_selector", v.notice_selector.css}};
    if (v.opened_by) {
      jv["opened_by"] = {{"view_index", v.opened_by->view_index},
                         {"tag", v.opened_by->tag.rendered()}};
    }
    views.push_back(std::move(jv));
  }
  j = nlohmann::json{{"domain", m.domain},
                     {"url", m.url},
                     {"notice_selector", m.notice_selector.css},
                     {"frame", m.frame ? nlohmann::json(m.frame->css) : nlohmann::json()},
                     {"accept_only", m.accept_only},
                     {"dedicated_page", m.dedicated_page},
                     {"truncated", m.truncated},
                     {"views", std::move(views)}};
}

}  // namespace cookiepilot
