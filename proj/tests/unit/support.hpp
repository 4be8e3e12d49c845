#pragma once

#include <string>
#include <vector>

#include "cookiepilot/analyze/notice_model.hpp"
#include "cookiepilot/dom/snapshot.hpp"
#include "cookiepilot/fixture/browser.hpp"
#include "cookiepilot/fixture/site.hpp"

namespace testsupport {

std::string fixtures_dir();
std::string sites_dir();
cookiepilot::dom::PageSnapshot load_page(const std::string& name);
const std::vector<cookiepilot::fixture::FixtureSite>& sites();
const cookiepilot::fixture::FixtureSite& site(const std::string& domain);

// One fixture WebDriver server per process.
cookiepilot::fixture::WebDriverServer& fixture_server();

// Collapses whitespace runs and trims.
std::string squash(const std::string& s);

// Model element with the bookkeeping the planner relies on.
cookiepilot::InteractiveElement element(int view, cookiepilot::ElementTag::Kind kind, int index,
                                        std::string label, cookiepilot::Role role,
                                        cookiepilot::SettingState state = cookiepilot::SettingState::kStateless);

std::string temp_path(const std::string& stem);

}  // namespace testsupport
