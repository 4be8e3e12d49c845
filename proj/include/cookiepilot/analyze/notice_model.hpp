#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cookiepilot/dom/snapshot.hpp"

namespace cookiepilot {

// Execution role of a notice element, decided by the click-twice probe.
enum class Role { kTypeA, kTypeB, kTypeC, kTypeD, kUnknown };

std::string_view role_name(Role r);  // "TYPE_A" ...
Role role_from_name(std::string_view name);

enum class SettingState { kSelected, kNotSelected, kStateless };

std::string_view setting_state_name(SettingState s);

enum class Discovery { kTabbed, kHiddenSupplement, kDynamic };

std::string_view discovery_name(Discovery d);

// "button3", "switch5". kind is switch exactly for Type A elements.
struct ElementTag {
  enum class Kind { kButton, kSwitch };
  Kind kind = Kind::kButton;
  int index = 0;

  std::string rendered() const;
  static std::optional<ElementTag> parse(std::string_view s);
  bool operator==(const ElementTag&) const = default;
};

struct InteractiveElement {
  ElementTag tag;
  dom::ElementSnapshot snapshot;
  std::string label;
  SettingState state = SettingState::kStateless;
  int view_index = 0;
  Discovery discovery = Discovery::kTabbed;
  std::optional<Role> role;
  // Where clicks and state queries go. Equals snapshot.selector_path
  // except for visually hidden inputs operated through their <label>.
  dom::SelectorPath click_target;
  // For DYNAMIC elements: node_id of the Type C element in the same view
  // whose click reveals this one.
  std::string revealed_by;
  // Type C assigned although the click changed nothing observable.
  bool low_confidence = false;

  bool serializable() const { return role && *role != Role::kUnknown; }
};

struct ViewOpener {
  int view_index = 0;
  ElementTag tag;
  std::string node_id;  // empty for models parsed from text

  bool operator==(const ViewOpener&) const = default;
};

struct View {
  std::vector<InteractiveElement> elements;
  std::optional<ViewOpener> opened_by;  // absent for view 0
  dom::SelectorPath notice_selector;
};

struct NoticeModel {
  std::string domain;
  std::string url;
  std::vector<View> views;
  dom::SelectorPath notice_selector;
  std::optional<dom::SelectorPath> frame;  // notice inside this iframe
  bool accept_only = false;
  bool dedicated_page = false;
  bool truncated = false;  // exploration stopped at the click budget

  const InteractiveElement* find(int view_index, const ElementTag& tag) const;
  const InteractiveElement* find_node(std::string_view node_id) const;
  InteractiveElement* find_node(std::string_view node_id);
  std::size_t element_count() const;
};

void to_json(nlohmann::json& j, const ElementTag& t);
void to_json(nlohmann::json& j, const InteractiveElement& e);
void to_json(nlohmann::json& j, const NoticeModel& m);

}  // namespace cookiepilot
