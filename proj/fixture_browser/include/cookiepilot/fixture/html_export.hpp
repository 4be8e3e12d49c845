#pragma once

#include <string>

#include "cookiepilot/fixture/site.hpp"

namespace cookiepilot::fixture {

// Static HTML rendering of one fixture page with a small inline script
// replaying the scripted click actions, for use in a real browser.
// Returns an empty string when the site has no such page.
std::string render_html(const FixtureSite& site, const std::string& path);

}  // namespace cookiepilot::fixture
