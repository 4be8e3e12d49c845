#include <doctest.h>

#include <random>

#include "cookiepilot/dom/selector.hpp"
#include "cookiepilot/dom/stacking.hpp"
#include "cookiepilot/driver/session.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/fixture/harness.hpp"
#include "unit/support.hpp"

namespace cp = cookiepilot;
using cp::dom::PageSnapshot;
using cp::dom::SelectorStrategy;

namespace {

// Every element's generated selector matches exactly that element.
void check_round_trip(const PageSnapshot& page) {
  cp::dom::PageIndex index(page);
  REQUIRE(index.well_formed());
  for (std::size_t i = 0; i < page.elements.size(); ++i) {
    auto sel = cp::dom::generate_selector(index, i);
    CAPTURE(page.url);
    CAPTURE(page.elements[i].node_id);
    CAPTURE(sel.css);
    auto hits = cp::dom::query_all(index, sel.css);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == i);
  }
}

std::string selector_of(const PageSnapshot& page, const std::string& node) {
  const auto* e = page.find(node);
  REQUIRE(e);
  return cp::dom::generate_selector(page, *e).css;
}

PageSnapshot random_page(std::mt19937& rng) {
  static const char* tags[] = {"div", "span", "button", "a", "input", "section", "p", "label"};
  static const char* classes[] = {"btn", "active", "row", "is-open", "consent", "x1a2b3c4d5", "primary"};
  static const char* attrs[] = {"data-action", "name", "aria-label", "role", "type", "title"};
  static const char* values[] = {"accept", "reject", "a \"quoted\" value", "back\\slash", "ok", "switch"};
  PageSnapshot page;
  page.url = "https://random.test/";
  int n = 2 + static_cast<int>(rng() % 40);
  for (int i = 0; i < n; ++i) {
    cp::dom::ElementSnapshot e;
    e.node_id = "e" + std::to_string(i);
    e.doc_order = i;
    if (i > 0 && rng() % 4) {
      // Parent among earlier elements keeps pre-order valid only if it is
      // an ancestor of the previous element, so walk up from i-1.
      std::string p = page.elements.back().node_id;
      while (!p.empty() && rng() % 3 == 0) p = page.find(p)->parent_id;
      e.parent_id = p;
    }
    e.tag_name = tags[rng() % 8];
    if (rng() % 3 == 0) e.attributes["id"] = rng() % 4 ? "id" + std::to_string(rng() % 6) : "1bad id";
    if (rng() % 2) {
      std::string cls = classes[rng() % 7];
      if (rng() % 2) cls += std::string(" ") + classes[rng() % 7];
      e.attributes["class"] = cls;
    }
    int k = static_cast<int>(rng() % 3);
    for (int a = 0; a < k; ++a) e.attributes[attrs[rng() % 6]] = values[rng() % 6];
    e.displayed = true;
    e.bbox = {0, 0, 10, 10};
    page.elements.push_back(std::move(e));
  }
  return page;
}

}  // namespace

TEST_SUITE("dom") {

TEST_CASE("selector strategies on page fixtures") {
  auto chain = testsupport::load_page("nth_child_chain");
  CHECK(selector_of(chain, "row1-accept") == "#notice > div:nth-child(1) > button:nth-child(2)");
  CHECK(selector_of(chain, "notice") == "#notice");
  auto chain_sel = cp::dom::generate_selector(chain, *chain.find("row1-accept"));
  CHECK(chain_sel.strategy == SelectorStrategy::kByNthChildChain);

  auto gen = testsupport::load_page("generated_id");
  CHECK(selector_of(gen, "save") == "[data-role=\"save\"]");
  CHECK(selector_of(gen, "banner") == "#cookie-banner");
  CHECK(selector_of(gen, "other").find("btn-1234567") == std::string::npos);

  auto tricky = testsupport::load_page("tricky_attributes");
  CHECK(selector_of(tricky, "dup1").find("#dup") == std::string::npos);
  CHECK(selector_of(tricky, "q3").find("active") == std::string::npos);
  CHECK(selector_of(tricky, "in") == "[name=\"analytics\"]");

  for (const char* name : {"nth_child_chain", "generated_id", "tricky_attributes", "two_overlays",
                           "one_overlay", "no_z"}) {
    check_round_trip(testsupport::load_page(name));
  }
}

TEST_CASE("escaping and parsing") {
  CHECK(cp::dom::css_escape_string("Say \"yes\"") == "Say \\\"yes\\\"");
  CHECK(cp::dom::css_escape_string("back\\slash") == "back\\\\slash");
  CHECK(cp::dom::is_css_identifier("notice"));
  CHECK_FALSE(cp::dom::is_css_identifier("1bad"));
  CHECK_FALSE(cp::dom::is_css_identifier("has space"));
  CHECK(cp::dom::looks_generated_id("x7f3a9bc1"));
  CHECK(cp::dom::looks_generated_id("btn-1234567"));
  CHECK_FALSE(cp::dom::looks_generated_id("cookie-banner"));
  CHECK_THROWS_WITH_AS(cp::dom::CssSelector::parse("div >"), doctest::Contains("SelectorSyntax"), cp::Error);
  CHECK_THROWS_AS(cp::dom::CssSelector::parse("[unterminated"), cp::Error);
  CHECK_THROWS_AS(cp::dom::CssSelector::parse(""), cp::Error);
}

TEST_CASE("query subset") {
  auto tricky = testsupport::load_page("tricky_attributes");
  cp::dom::PageIndex index(tricky);
  CHECK(cp::dom::query_all(index, "#dup").size() == 2);
  CHECK(cp::dom::query_all(index, "button.btn").size() == 4);
  CHECK(cp::dom::query_all(index, "body > div > button:nth-child(3)").size() == 1);
  CHECK(cp::dom::query_all(index, "[aria-label^=\"Say\"]").size() == 1);
  CHECK(cp::dom::query_all(index, "div span, input").size() == 3);
  CHECK(cp::dom::query_all(index, "*").size() == tricky.elements.size());
}

TEST_CASE("random trees round trip") {
  std::mt19937 rng(7);
  for (int n = 0; n < 300; ++n) {
    CAPTURE(n);
    check_round_trip(random_page(rng));
  }
}

TEST_CASE("fixture site snapshots round trip") {
  auto& server = testsupport::fixture_server();
  auto config = cp::fixture::fixture_config(server.endpoint());
  auto session = cp::driver::open_session(server.endpoint(), true, config.session);
  for (const auto& site : testsupport::sites()) {
    if (!site.failure.empty()) continue;
    CAPTURE(site.domain);
    auto page = session.reset(cp::measure::domain_url(config, site.domain));
    check_round_trip(page);
    for (const auto& e : page.elements) CHECK_FALSE(e.selector_path.empty());
  }
}

TEST_CASE("stacking order") {
  auto two = testsupport::load_page("two_overlays");
  auto c = cp::dom::stacking_candidates(two);
  REQUIRE(c.size() >= 2);
  CHECK(c[0].node_id == "high");
  CHECK(c[1].node_id == "low");
  for (const auto& e : c) CHECK(e.node_id != "hidden-overlay");

  auto one = testsupport::load_page("one_overlay");
  auto oc = cp::dom::stacking_candidates(one);
  REQUIRE_FALSE(oc.empty());
  CHECK(oc[0].node_id == "overlay");

  auto flat = testsupport::load_page("no_z");
  std::vector<std::string> ids;
  for (const auto& e : cp::dom::stacking_candidates(flat)) ids.push_back(e.node_id);
  // First three and last three visible children of body; f and h are not visible.
  CHECK(ids == std::vector<std::string>{"a", "b", "c", "d", "e", "g"});

  PageSnapshot empty;
  CHECK_THROWS_WITH_AS(cp::dom::stacking_candidates(empty), doctest::Contains("EmptyPage"), cp::Error);
}

TEST_CASE("candidates are visible and z-ordered") {
  std::mt19937 rng(11);
  for (int n = 0; n < 200; ++n) {
    auto page = random_page(rng);
    for (auto& e : page.elements) {
      if (rng() % 3 == 0) e.z_index = static_cast<int>(rng() % 5) - 1;
      if (rng() % 6 == 0) e.displayed = false;
    }
    std::vector<cp::dom::ElementSnapshot> c;
    try {
      c = cp::dom::stacking_candidates(page);
    } catch (const cp::Error&) {
      continue;
    }
    int last_z = 1 << 30;
    bool in_z_part = true;
    for (const auto& e : c) {
      CHECK(cp::dom::is_visible(e));
      if (in_z_part && e.z_index && *e.z_index >= 0) {
        CHECK(*e.z_index <= last_z);
        last_z = *e.z_index;
      } else {
        in_z_part = false;
      }
    }
  }
}

}  // TEST_SUITE
