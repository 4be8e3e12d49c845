#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cookiepilot::fixture {

// One scripted reaction to a click.
struct Action {
  std::string op;      // toggle show hide toggle_display attach detach set_cookie navigate open_tab
  std::string target;  // node id, cookie name or path
  bool top_document = false;  // target lives in the top document (actions inside frames)
};

struct FrameContent;

struct FixtureNode {
  std::string id;
  std::string tag = "div";
  std::map<std::string, std::string> attrs;
  std::string text;
  std::optional<int> z;
  double box[4] = {0, 0, 0, 0};
  bool hidden = false;
  bool detached = false;
  std::optional<bool> checked;
  std::vector<Action> on_click;
  std::string gate;  // cookie whose presence removes this node
  int appear_after_ms = 0;
  std::shared_ptr<FrameContent> frame;
  std::vector<FixtureNode> children;
};

struct FrameContent {
  std::string path;
  std::vector<FixtureNode> nodes;
};

struct FixturePage {
  std::string title;
  std::vector<FixtureNode> nodes;
};

struct ExpectedOutcome {
  std::string status;                         // record status name
  std::vector<std::vector<std::string>> plan;  // node ids per viewplan
  std::map<std::string, std::string> roles;    // node id -> "A".."D"/"UNKNOWN"
  std::string notice;                         // node id of the notice container, empty if none
  std::string frame;                          // node id of the iframe holding the notice
  std::string expect_failure;                 // why the pipeline is known to miss this site
};

struct FixtureSite {
  std::string domain;
  std::string description;
  std::map<std::string, FixturePage> pages;  // by path
  std::string failure;  // "crash" or "timeout" makes every navigation fail
  ExpectedOutcome expected;
  std::optional<nlohmann::json> measure;  // hand-computed {"m1","m2","m3"}
};

FixtureSite load_site(const std::string& path);
FixtureSite site_from_json(const nlohmann::json& j);
// Every *.json in `dir`, sorted by domain.
std::vector<FixtureSite> load_sites(const std::string& dir);

}  // namespace cookiepilot::fixture
