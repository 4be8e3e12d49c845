#include "cookiepilot/dom/stacking.hpp"

#include <algorithm>
#include <unordered_set>

#include "cookiepilot/error.hpp"

namespace cookiepilot::dom {
namespace {
constexpr std::size_t kEdgeCandidates = 3;
}

bool is_visible(const ElementSnapshot& element) {
  return element.displayed && element.bbox.width > 0 && element.bbox.height > 0;
}

bool is_interactive(const ElementSnapshot& element) {
  const std::string& tag = element.tag_name;
  if (tag == "button" || tag == "select" || tag == "textarea") return true;
  if (tag == "a") return element.has_attribute("href");
  if (tag == "input") {
    const std::string* type = element.attribute("type");
    return !type || *type != "hidden";
  }
  if (const std::string* role = element.attribute("role")) {
    static constexpr std::string_view kRoles[] = {"button", "switch", "checkbox", "radio",
                                                  "tab",    "link",   "menuitem", "option"};
    if (std::find(std::begin(kRoles), std::end(kRoles), *role) != std::end(kRoles)) return true;
  }
  if (const std::string* tabindex = element.attribute("tabindex")) {
    return !tabindex->empty() && (*tabindex)[0] != '-';
  }
  return false;
}

std::vector<ElementSnapshot> stacking_candidates(const PageSnapshot& page) {
  std::vector<const ElementSnapshot*> visible;
  for (const auto& e : page.elements) {
    if (is_visible(e)) visible.push_back(&e);
  }
  if (visible.empty()) throw Error(ErrorCode::kEmptyPage, page.url);

  std::vector<const ElementSnapshot*> stacked;
  for (const auto* e : visible) {
    if (e->z_index && *e->z_index >= 0) stacked.push_back(e);
  }
  std::stable_sort(stacked.begin(), stacked.end(), [](const auto* a, const auto* b) {
    if (*a->z_index != *b->z_index) return *a->z_index > *b->z_index;
    return a->doc_order > b->doc_order;
  });

  std::vector<ElementSnapshot> out;
  std::unordered_set<std::string> seen;
  auto add = [&](const ElementSnapshot* e) {
    if (seen.insert(e->node_id).second) out.push_back(*e);
  };
  for (const auto* e : stacked) add(e);
  std::vector<const ElementSnapshot*> top_level;
  for (const auto* e : visible) {
    if (e->parent_id.empty()) top_level.push_back(e);
  }
  for (std::size_t i = 0; i < std::min(kEdgeCandidates, top_level.size()); ++i) add(top_level[i]);
  std::size_t tail_start =
      top_level.size() > kEdgeCandidates ? top_level.size() - kEdgeCandidates : 0;
  for (std::size_t i = tail_start; i < top_level.size(); ++i) add(top_level[i]);
  return out;
}

}  // namespace cookiepilot::dom
