#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace cookiepilot::dom {

struct BoundingBox {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  double center_x() const { return x + width / 2; }
  double center_y() const { return y + height / 2; }
  double area() const { return width * height; }

  bool operator==(const BoundingBox&) const = default;
};

enum class SelectorStrategy { kById, kByAttrCombo, kByNthChildChain };

std::string_view strategy_name(SelectorStrategy s);
SelectorStrategy strategy_from_name(std::string_view name);

struct SelectorPath {
  std::string css;
  SelectorStrategy strategy = SelectorStrategy::kByNthChildChain;

  bool empty() const { return css.empty(); }
  bool operator==(const SelectorPath&) const = default;
};

// One DOM element as captured by the driver. `parent_id` is empty for
// direct children of <body>.
struct ElementSnapshot {
  std::string node_id;
  std::string parent_id;
  std::string tag_name;
  std::map<std::string, std::string> attributes;
  std::optional<int> z_index;  // nullopt encodes AUTO
  BoundingBox bbox;
  bool displayed = false;
  std::string own_text;
  SelectorPath selector_path;
  int doc_order = 0;

  // Returns nullptr when the attribute is absent.
  const std::string* attribute(std::string_view name) const;
  bool has_attribute(std::string_view name) const { return attribute(name) != nullptr; }
  // Empty when absent.
  std::string attr(std::string_view name) const {
    const std::string* v = attribute(name);
    return v ? *v : std::string();
  }

  bool operator==(const ElementSnapshot&) const = default;
};

struct Viewport {
  double width = 1280;
  double height = 800;

  double area() const { return width * height; }
  bool operator==(const Viewport&) const = default;
};

struct PageSnapshot {
  std::string url;
  std::string title;
  bool ready = false;
  Viewport viewport;
  std::vector<ElementSnapshot> elements;  // document pre-order

  const ElementSnapshot* find(std::string_view node_id) const;
  bool operator==(const PageSnapshot&) const = default;
};

// Tree view over a PageSnapshot. Index `kRoot` stands for <body>, which
// is never itself part of `elements`.
class PageIndex {
 public:
  static constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

  explicit PageIndex(const PageSnapshot& page);

  const PageSnapshot& page() const { return *page_; }
  std::size_t size() const { return page_->elements.size(); }
  const ElementSnapshot& at(std::size_t i) const { return page_->elements[i]; }

  std::optional<std::size_t> index_of(std::string_view node_id) const;
  std::size_t parent(std::size_t i) const { return parents_[i]; }
  const std::vector<std::size_t>& children(std::size_t i) const;

  // 1-based position among element siblings.
  int nth_child(std::size_t i) const { return sibling_pos_[i]; }
  bool is_descendant(std::size_t candidate, std::size_t ancestor) const;
  // Pre-order list of descendants (excluding `i`).
  std::vector<std::size_t> descendants(std::size_t i) const;

  // False when a parent_id references no element or ordering is broken.
  bool well_formed() const { return well_formed_; }

 private:
  const PageSnapshot* page_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::size_t> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> root_children_;
  std::vector<int> sibling_pos_;
  bool well_formed_ = true;
};

void to_json(nlohmann::json& j, const BoundingBox& b);
void from_json(const nlohmann::json& j, BoundingBox& b);
void to_json(nlohmann::json& j, const SelectorPath& s);
void from_json(const nlohmann::json& j, SelectorPath& s);
void to_json(nlohmann::json& j, const ElementSnapshot& e);
void from_json(const nlohmann::json& j, ElementSnapshot& e);
void to_json(nlohmann::json& j, const PageSnapshot& p);
void from_json(const nlohmann::json& j, PageSnapshot& p);

PageSnapshot load_page_snapshot(const std::string& path);

}  // namespace cookiepilot::dom
