#include "cookiepilot/dom/selector.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cookiepilot/error.hpp"

namespace cookiepilot::dom {
namespace {

[[noreturn]] void syntax_error(std::string_view css, std::string_view what) {
  throw Error(ErrorCode::kSelectorSyntax, std::string(what) + " in '" + std::string(css) + "'");
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

class Parser {
 public:
  explicit Parser(std::string_view css) : css_(css) {}

  std::vector<CssSelector::Complex> parse_group() {
    std::vector<CssSelector::Complex> group;
    skip_ws();
    if (eof()) syntax_error(css_, "empty selector");
    while (true) {
      group.push_back(parse_complex());
      skip_ws();
      if (eof()) break;
      if (peek() != ',') syntax_error(css_, "unexpected character");
      ++pos_;
      skip_ws();
    }
    return group;
  }

 private:
  CssSelector::Complex parse_complex() {
    CssSelector::Complex complex;
    complex.compounds.push_back(parse_compound());
    while (true) {
      bool saw_ws = skip_ws();
      if (eof() || peek() == ',') break;
      if (peek() == '>') {
        ++pos_;
        skip_ws();
        complex.combinators.push_back(CssSelector::Combinator::kChild);
      } else if (saw_ws) {
        complex.combinators.push_back(CssSelector::Combinator::kDescendant);
      } else {
        syntax_error(css_, "expected combinator");
      }
      complex.compounds.push_back(parse_compound());
    }
    return complex;
  }

  CssSelector::Compound parse_compound() {
    CssSelector::Compound c;
    bool any = false;
    if (!eof() && peek() == '*') {
      c.tag = "*";
      ++pos_;
      any = true;
    } else if (!eof() && is_ident_start()) {
      c.tag = ident();
      std::transform(c.tag.begin(), c.tag.end(), c.tag.begin(),
                     [](unsigned char ch) { return std::tolower(ch); });
      any = true;
    }
    while (!eof()) {
      char ch = peek();
      if (ch == '#') {
        ++pos_;
        c.ids.push_back(ident());
      } else if (ch == '.') {
        ++pos_;
        c.classes.push_back(ident());
      } else if (ch == '[') {
        ++pos_;
        c.attrs.push_back(attr_test());
      } else if (ch == ':') {
        ++pos_;
        std::string pseudo = ident();
        if (pseudo != "nth-child" || eof() || peek() != '(') {
          syntax_error(css_, "unsupported pseudo-class");
        }
        ++pos_;
        skip_ws();
        std::size_t start = pos_;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) syntax_error(css_, "expected integer");
        c.nth_child = std::stoi(std::string(css_.substr(start, pos_ - start)));
        skip_ws();
        expect(')');
        if (c.nth_child <= 0) syntax_error(css_, "nth-child index must be positive");
      } else {
        break;
      }
      any = true;
    }
    if (!any) syntax_error(css_, "expected compound selector");
    return c;
  }

  CssSelector::AttrTest attr_test() {
    skip_ws();
    CssSelector::AttrTest t;
    t.name = ident();
    std::transform(t.name.begin(), t.name.end(), t.name.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    skip_ws();
    if (!eof() && peek() == ']') {
      ++pos_;
      return t;
    }
    if (!eof() && peek() == '^') {
      ++pos_;
      t.op = CssSelector::AttrTest::Op::kPrefix;
    } else {
      t.op = CssSelector::AttrTest::Op::kEquals;
    }
    expect('=');
    skip_ws();
    if (eof()) syntax_error(css_, "unterminated attribute");
    if (peek() == '"' || peek() == '\'') {
      t.value = quoted();
    } else {
      t.value = ident();
    }
    skip_ws();
    expect(']');
    return t;
  }

  std::string quoted() {
    char q = css_[pos_++];
    std::string out;
    while (true) {
      if (eof()) syntax_error(css_, "unterminated string");
      char ch = css_[pos_++];
      if (ch == q) break;
      if (ch == '\\') {
        if (eof()) syntax_error(css_, "dangling escape");
        ch = css_[pos_++];
      }
      out.push_back(ch);
    }
    return out;
  }

  std::string ident() {
    std::string out;
    while (!eof()) {
      char ch = peek();
      if (ch == '\\' && pos_ + 1 < css_.size()) {
        out.push_back(css_[pos_ + 1]);
        pos_ += 2;
      } else if (is_ident_char(ch)) {
        out.push_back(ch);
        ++pos_;
      } else {
        break;
      }
    }
    if (out.empty()) syntax_error(css_, "expected identifier");
    return out;
  }

  bool is_ident_start() const {
    char ch = peek();
    return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '\\';
  }

  void expect(char ch) {
    if (eof() || peek() != ch) syntax_error(css_, std::string("expected '") + ch + "'");
    ++pos_;
  }

  bool skip_ws() {
    bool any = false;
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) {
      ++pos_;
      any = true;
    }
    return any;
  }

  bool eof() const { return pos_ >= css_.size(); }
  char peek() const { return css_[pos_]; }

  std::string_view css_;
  std::size_t pos_ = 0;
};

bool has_class(const ElementSnapshot& e, std::string_view cls) {
  const std::string* attr = e.attribute("class");
  if (!attr) return false;
  std::istringstream in(*attr);
  std::string token;
  while (in >> token) {
    if (token == cls) return true;
  }
  return false;
}

bool compound_matches(const CssSelector::Compound& c, const PageIndex& index, std::size_t i) {
  if (i == PageIndex::kRoot) {
    return c.tag == "body" && c.ids.empty() && c.classes.empty() && c.attrs.empty() &&
           c.nth_child == 0;
  }
  const ElementSnapshot& e = index.at(i);
  if (!c.tag.empty() && c.tag != "*" && c.tag != e.tag_name) return false;
  for (const auto& id : c.ids) {
    const std::string* v = e.attribute("id");
    if (!v || *v != id) return false;
  }
  for (const auto& cls : c.classes) {
    if (!has_class(e, cls)) return false;
  }
  for (const auto& t : c.attrs) {
    const std::string* v = e.attribute(t.name);
    if (!v) return false;
    if (t.op == CssSelector::AttrTest::Op::kEquals && *v != t.value) return false;
    if (t.op == CssSelector::AttrTest::Op::kPrefix && v->rfind(t.value, 0) != 0) return false;
  }
  if (c.nth_child != 0 && index.nth_child(i) != c.nth_child) return false;
  return true;
}

// Right-to-left match of compounds[0..k] ending at element i.
bool complex_matches(const CssSelector::Complex& cx, std::size_t k, const PageIndex& index,
                     std::size_t i) {
  if (!compound_matches(cx.compounds[k], index, i)) return false;
  if (k == 0) return true;
  if (i == PageIndex::kRoot) return false;
  std::size_t p = index.parent(i);
  if (cx.combinators[k - 1] == CssSelector::Combinator::kChild) {
    return complex_matches(cx, k - 1, index, p);
  }
  while (true) {
    if (complex_matches(cx, k - 1, index, p)) return true;
    if (p == PageIndex::kRoot) return false;
    p = index.parent(p);
  }
}

bool unique_match(const PageIndex& index, const std::string& css, std::size_t element) {
  auto hits = query_all(index, css);
  return hits.size() == 1 && hits.front() == element;
}

// Attributes whose values change with interaction; never used for paths.
bool volatile_attribute(std::string_view name) {
  static constexpr std::string_view kVolatile[] = {
      "id",          "class",        "style",         "href",     "src",
      "tabindex",    "aria-checked", "aria-selected", "aria-expanded",
      "aria-hidden", "checked",      "selected",      "value",    "hidden",
      "disabled",    "aria-pressed", "open"};
  return std::find(std::begin(kVolatile), std::end(kVolatile), name) != std::end(kVolatile);
}

bool volatile_class(std::string_view cls) {
  static constexpr std::string_view kVolatile[] = {"active", "selected", "checked", "open",
                                                   "hidden", "show",     "visible", "on",
                                                   "off",    "expanded", "collapsed"};
  if (cls.rfind("is-", 0) == 0 || cls.rfind("has-", 0) == 0) return true;
  return std::find(std::begin(kVolatile), std::end(kVolatile), cls) != std::end(kVolatile) ||
         looks_generated_id(cls);
}

int attribute_rank(std::string_view name) {
  if (name.rfind("data-", 0) == 0) return 0;
  if (name == "name") return 1;
  if (name == "aria-label") return 2;
  if (name == "role") return 3;
  if (name == "type") return 4;
  return 5;
}

std::vector<std::string> attribute_atoms(const ElementSnapshot& e) {
  std::vector<std::pair<std::string, std::string>> attrs;
  for (const auto& [name, value] : e.attributes) {
    if (volatile_attribute(name) || value.empty() || value.size() > 80) continue;
    attrs.emplace_back(name, value);
  }
  std::stable_sort(attrs.begin(), attrs.end(), [](const auto& a, const auto& b) {
    return attribute_rank(a.first) < attribute_rank(b.first);
  });
  std::vector<std::string> atoms;
  for (const auto& [name, value] : attrs) {
    atoms.push_back("[" + name + "=\"" + css_escape_string(value) + "\"]");
  }
  if (const std::string* cls = e.attribute("class")) {
    std::istringstream in(*cls);
    std::string token;
    while (in >> token) {
      if (is_css_identifier(token) && !volatile_class(token)) atoms.push_back("." + token);
    }
  }
  return atoms;
}

bool id_eligible(const ElementSnapshot& e) {
  const std::string* id = e.attribute("id");
  return id && !id->empty() && is_css_identifier(*id) && !looks_generated_id(*id);
}

}  // namespace

CssSelector CssSelector::parse(std::string_view css) {
  CssSelector sel;
  sel.group_ = Parser(css).parse_group();
  return sel;
}

bool CssSelector::matches(const PageIndex& index, std::size_t element) const {
  return std::any_of(group_.begin(), group_.end(), [&](const Complex& cx) {
    return complex_matches(cx, cx.compounds.size() - 1, index, element);
  });
}

std::vector<std::size_t> CssSelector::query_all(const PageIndex& index) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (matches(index, i)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> query_all(const PageIndex& index, std::string_view css) {
  return CssSelector::parse(css).query_all(index);
}

bool looks_generated_id(std::string_view id) {
  int hex_run = 0;
  for (char ch : id) {
    if (std::isxdigit(static_cast<unsigned char>(ch))) {
      if (++hex_run >= 8) return true;
    } else {
      hex_run = 0;
    }
  }
  int trailing_digits = 0;
  for (auto it = id.rbegin(); it != id.rend() && std::isdigit(static_cast<unsigned char>(*it));
       ++it) {
    ++trailing_digits;
  }
  return trailing_digits >= 5;
}

bool is_css_identifier(std::string_view s) {
  if (s.empty()) return false;
  std::size_t start = 0;
  if (s[0] == '-') {
    if (s.size() == 1) return false;
    start = 1;
  }
  char first = s[start];
  if (!(std::isalpha(static_cast<unsigned char>(first)) || first == '_' || first == '-')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_';
  });
}

std::string css_escape_string(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char ch : value) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

SelectorPath generate_selector(const PageIndex& index, std::size_t element) {
  if (!index.well_formed() || element >= index.size()) {
    throw Error(ErrorCode::kSelectorUnresolvable, "malformed snapshot");
  }
  const ElementSnapshot& e = index.at(element);

  if (id_eligible(e)) {
    std::string css = "#" + *e.attribute("id");
    if (unique_match(index, css, element)) return {css, SelectorStrategy::kById};
  }

  std::vector<std::string> atoms = attribute_atoms(e);
  for (const auto& a : atoms) {
    if (unique_match(index, a, element)) return {a, SelectorStrategy::kByAttrCombo};
  }
  for (const auto& a : atoms) {
    std::string css = e.tag_name + a;
    if (unique_match(index, css, element)) return {css, SelectorStrategy::kByAttrCombo};
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      std::string css = e.tag_name + atoms[i] + atoms[j];
      if (unique_match(index, css, element)) return {css, SelectorStrategy::kByAttrCombo};
    }
  }

  std::vector<std::string> steps;
  std::string anchor = "body";
  for (std::size_t n = element; n != PageIndex::kRoot; n = index.parent(n)) {
    const ElementSnapshot& node = index.at(n);
    if (n != element && id_eligible(node) &&
        unique_match(index, "#" + *node.attribute("id"), n)) {
      anchor = "#" + *node.attribute("id");
      break;
    }
    steps.push_back(node.tag_name + ":nth-child(" + std::to_string(index.nth_child(n)) + ")");
  }
  std::string css = anchor;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) css += " > " + *it;
  if (!unique_match(index, css, element)) {
    throw Error(ErrorCode::kSelectorUnresolvable, "no unique path for " + e.node_id);
  }
  return {css, SelectorStrategy::kByNthChildChain};
}

SelectorPath generate_selector(const PageSnapshot& page, const ElementSnapshot& element) {
  PageIndex index(page);
  auto i = index.index_of(element.node_id);
  if (!i) throw Error(ErrorCode::kSelectorUnresolvable, "element not on page");
  return generate_selector(index, *i);
}

void assign_selectors(PageSnapshot& page) {
  PageIndex index(page);
  std::vector<SelectorPath> paths;
  paths.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) paths.push_back(generate_selector(index, i));
  for (std::size_t i = 0; i < paths.size(); ++i) page.elements[i].selector_path = paths[i];
}

}  // namespace cookiepilot::dom
