#include "unit/support.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace testsupport {

namespace cp = cookiepilot;

std::string fixtures_dir() { return COOKIEPILOT_FIXTURES_DIR; }
std::string sites_dir() { return fixtures_dir() + "/sites"; }

cp::dom::PageSnapshot load_page(const std::string& name) {
  return cp::dom::load_page_snapshot(fixtures_dir() + "/pages/" + name + ".json");
}

const std::vector<cp::fixture::FixtureSite>& sites() {
  static const auto all = cp::fixture::load_sites(sites_dir());
  return all;
}

const cp::fixture::FixtureSite& site(const std::string& domain) {
  for (const auto& s : sites()) {
    if (s.domain == domain) return s;
  }
  throw std::runtime_error("no fixture site " + domain);
}

cp::fixture::WebDriverServer& fixture_server() {
  static std::once_flag once;
  static std::unique_ptr<cp::fixture::WebDriverServer> server;
  std::call_once(once, [] {
    server = std::make_unique<cp::fixture::WebDriverServer>(sites());
    server->start();
  });
  return *server;
}

std::string squash(const std::string& s) {
  std::istringstream in(s);
  std::string word, out;
  while (in >> word) out += (out.empty() ? "" : " ") + word;
  return out;
}

cp::InteractiveElement element(int view, cp::ElementTag::Kind kind, int index, std::string label,
                               cp::Role role, cp::SettingState state) {
  cp::InteractiveElement e;
  e.tag = {kind, index};
  e.view_index = view;
  e.label = std::move(label);
  e.role = role;
  e.state = state;
  e.snapshot.node_id = "n" + std::to_string(index);
  e.snapshot.tag_name = kind == cp::ElementTag::Kind::kSwitch ? "input" : "button";
  e.snapshot.selector_path = {"#n" + std::to_string(index), cp::dom::SelectorStrategy::kById};
  return e;
}

std::string temp_path(const std::string& stem) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() / "cookiepilot-tests";
  std::filesystem::create_directories(dir);
  return (dir / (stem + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++))).string();
}

}  // namespace testsupport
