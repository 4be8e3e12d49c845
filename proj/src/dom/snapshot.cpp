#include "cookiepilot/dom/snapshot.hpp"

#include <fstream>

#include "cookiepilot/error.hpp"

namespace cookiepilot::dom {

std::string_view strategy_name(SelectorStrategy s) {
  switch (s) {
    case SelectorStrategy::kById: return "BY_ID";
    case SelectorStrategy::kByAttrCombo: return "BY_ATTR_COMBO";
    case SelectorStrategy::kByNthChildChain: return "BY_NTH_CHILD_CHAIN";
  }
  return "BY_NTH_CHILD_CHAIN";
}

SelectorStrategy strategy_from_name(std::string_view name) {
  if (name == "BY_ID") return SelectorStrategy::kById;
  if (name == "BY_ATTR_COMBO") return SelectorStrategy::kByAttrCombo;
  return SelectorStrategy::kByNthChildChain;
}

const std::string* ElementSnapshot::attribute(std::string_view name) const {
  auto it = attributes.find(std::string(name));
  return it == attributes.end() ? nullptr : &it->second;
}

const ElementSnapshot* PageSnapshot::find(std::string_view node_id) const {
  for (const auto& e : elements) {
    if (e.node_id == node_id) return &e;
  }
  return nullptr;
}

PageIndex::PageIndex(const PageSnapshot& page)
    : page_(&page),
      parents_(page.elements.size(), kRoot),
      children_(page.elements.size()),
      sibling_pos_(page.elements.size(), 0) {
  const auto& els = page.elements;
  for (std::size_t i = 0; i < els.size(); ++i) {
    if (!by_id_.emplace(els[i].node_id, i).second) well_formed_ = false;
    if (i > 0 && els[i].doc_order <= els[i - 1].doc_order) well_formed_ = false;
  }
  for (std::size_t i = 0; i < els.size(); ++i) {
    if (els[i].parent_id.empty()) {
      root_children_.push_back(i);
      sibling_pos_[i] = static_cast<int>(root_children_.size());
      continue;
    }
    auto it = by_id_.find(els[i].parent_id);
    // Pre-order: a parent always precedes its children.
    if (it == by_id_.end() || it->second >= i) {
      well_formed_ = false;
      root_children_.push_back(i);
      sibling_pos_[i] = static_cast<int>(root_children_.size());
      continue;
    }
    parents_[i] = it->second;
    children_[it->second].push_back(i);
    sibling_pos_[i] = static_cast<int>(children_[it->second].size());
  }
}

std::optional<std::size_t> PageIndex::index_of(std::string_view node_id) const {
  auto it = by_id_.find(std::string(node_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::size_t>& PageIndex::children(std::size_t i) const {
  return i == kRoot ? root_children_ : children_[i];
}

bool PageIndex::is_descendant(std::size_t candidate, std::size_t ancestor) const {
  if (ancestor == kRoot) return candidate != kRoot;
  for (std::size_t p = candidate == kRoot ? kRoot : parents_[candidate]; p != kRoot;
       p = parents_[p]) {
    if (p == ancestor) return true;
  }
  return false;
}

std::vector<std::size_t> PageIndex::descendants(std::size_t i) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack(children(i).rbegin(), children(i).rend());
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    out.push_back(n);
    const auto& kids = children_[n];
    stack.insert(stack.end(), kids.rbegin(), kids.rend());
  }
  return out;
}

void to_json(nlohmann::json& j, const BoundingBox& b) {
  j = nlohmann::json{{"x", b.x}, {"y", b.y}, {"width", b.width}, {"height", b.height}};
}

void from_json(const nlohmann::json& j, BoundingBox& b) {
  b.x = j.value("x", 0.0);
  b.y = j.value("y", 0.0);
  b.width = j.value("width", 0.0);
  b.height = j.value("height", 0.0);
  if (b.width < 0 || b.height < 0) {
    throw Error(ErrorCode::kValidationFailed, "bounding box with negative extent");
  }
}

void to_json(nlohmann::json& j, const SelectorPath& s) {
  j = nlohmann::json{{"css", s.css}, {"strategy", strategy_name(s.strategy)}};
}

void from_json(const nlohmann::json& j, SelectorPath& s) {
  s.css = j.value("css", "");
  s.strategy = strategy_from_name(j.value("strategy", "BY_NTH_CHILD_CHAIN"));
}

void to_json(nlohmann::json& j, const ElementSnapshot& e) {
  j = nlohmann::json{{"node_id", e.node_id},
                     {"parent_id", e.parent_id},
                     {"tag_name", e.tag_name},
                     {"attributes", e.attributes},
                     {"z_index", e.z_index ? nlohmann::json(*e.z_index) : nlohmann::json("auto")},
                     {"bbox", e.bbox},
                     {"displayed", e.displayed},
                     {"own_text", e.own_text},
                     {"selector_path", e.selector_path},
                     {"doc_order", e.doc_order}};
}

void from_json(const nlohmann::json& j, ElementSnapshot& e) {
  e.node_id = j.at("node_id").get<std::string>();
  e.parent_id = j.value("parent_id", "");
  e.tag_name = j.at("tag_name").get<std::string>();
  e.attributes.clear();
  if (j.contains("attributes")) {
    for (const auto& [k, v] : j.at("attributes").items()) {
      e.attributes[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  const auto& z = j.contains("z_index") ? j.at("z_index") : nlohmann::json("auto");
  if (z.is_number_integer()) {
    e.z_index = z.get<int>();
  } else {
    e.z_index.reset();
  }
  e.bbox = j.value("bbox", BoundingBox{});
  e.displayed = j.value("displayed", false);
  e.own_text = j.value("own_text", "");
  e.selector_path = j.value("selector_path", SelectorPath{});
  e.doc_order = j.value("doc_order", 0);
}

void to_json(nlohmann::json& j, const PageSnapshot& p) {
  j = nlohmann::json{{"url", p.url},
                     {"title", p.title},
                     {"ready", p.ready},
                     {"viewport", {{"width", p.viewport.width}, {"height", p.viewport.height}}},
                     {"elements", p.elements}};
}

void from_json(const nlohmann::json& j, PageSnapshot& p) {
  p.url = j.value("url", "");
  p.title = j.value("title", "");
  p.ready = j.value("ready", false);
  if (j.contains("viewport")) {
    p.viewport.width = j["viewport"].value("width", 1280.0);
    p.viewport.height = j["viewport"].value("height", 800.0);
  }
  p.elements = j.value("elements", std::vector<ElementSnapshot>{});
}

PageSnapshot load_page_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open " + path);
  return nlohmann::json::parse(in).get<PageSnapshot>();
}

}  // namespace cookiepilot::dom
