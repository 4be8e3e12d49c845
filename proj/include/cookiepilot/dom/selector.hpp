#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cookiepilot/dom/snapshot.hpp"

namespace cookiepilot::dom {

// Parsed CSS selector group. Supports the subset that generate_selector
// emits plus what fixtures need: type and universal selectors, #id,
// .class, [attr], [attr="v"], [attr^="v"], :nth-child(n), and the
// descendant and child combinators. The bare type `body` matches the
// document root.
class CssSelector {
 public:
  static CssSelector parse(std::string_view css);

  bool matches(const PageIndex& index, std::size_t element) const;
  std::vector<std::size_t> query_all(const PageIndex& index) const;

  struct AttrTest {
    enum class Op { kExists, kEquals, kPrefix };
    std::string name;
    Op op = Op::kExists;
    std::string value;
  };
  struct Compound {
    std::string tag;  // empty or "*" for any
    std::vector<std::string> ids;
    std::vector<std::string> classes;
    std::vector<AttrTest> attrs;
    int nth_child = 0;  // 0 = unconstrained
  };
  enum class Combinator { kDescendant, kChild };
  struct Complex {
    std::vector<Compound> compounds;         // left to right
    std::vector<Combinator> combinators;     // between compounds
  };

 private:
  std::vector<Complex> group_;
};

std::vector<std::size_t> query_all(const PageIndex& index, std::string_view css);

// Stable CSS path for `element` resolving uniquely on `page`.
// Throws Error(kSelectorUnresolvable) for malformed snapshots.
SelectorPath generate_selector(const PageSnapshot& page, const ElementSnapshot& element);
SelectorPath generate_selector(const PageIndex& index, std::size_t element);

// Fills selector_path for every element.
void assign_selectors(PageSnapshot& page);

// Framework-generated ids (8+ hex run, or 5+ trailing digits).
bool looks_generated_id(std::string_view id);

std::string css_escape_string(std::string_view value);
bool is_css_identifier(std::string_view s);

}  // namespace cookiepilot::dom
