#include "cookiepilot/fixture/site.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "cookiepilot/error.hpp"

namespace cookiepilot::fixture {
namespace {

Action action_from_json(const nlohmann::json& j) {
  Action a;
  a.op = j.at("op").get<std::string>();
  a.target = j.value("target", "");
  a.top_document = j.value("top", false);
  return a;
}

FixtureNode node_from_json(const nlohmann::json& j) {
  FixtureNode n;
  n.id = j.at("id").get<std::string>();
  n.tag = j.value("tag", "div");
  if (j.contains("attrs")) n.attrs = j["attrs"].get<std::map<std::string, std::string>>();
  n.text = j.value("text", "");
  if (j.contains("z") && !j["z"].is_null()) n.z = j["z"].get<int>();
  if (j.contains("box")) {
    auto b = j["box"].get<std::vector<double>>();
    if (b.size() != 4) throw Error(ErrorCode::kValidationFailed, n.id + ": box needs 4 numbers");
    std::copy(b.begin(), b.end(), n.box);
  }
  n.hidden = j.value("hidden", false);
  n.detached = j.value("detached", false);
  if (j.contains("checked")) n.checked = j["checked"].get<bool>();
  if (j.contains("on_click")) {
    for (const auto& a : j["on_click"]) n.on_click.push_back(action_from_json(a));
  }
  n.gate = j.value("gate", "");
  n.appear_after_ms = j.value("appear_after_ms", 0);
  if (j.contains("frame")) {
    n.frame = std::make_shared<FrameContent>();
    n.frame->path = j["frame"].value("path", "/frame");
    for (const auto& c : j["frame"].at("nodes")) n.frame->nodes.push_back(node_from_json(c));
  }
  if (j.contains("children")) {
    for (const auto& c : j["children"]) n.children.push_back(node_from_json(c));
  }
  return n;
}

}  // namespace

FixtureSite site_from_json(const nlohmann::json& j) {
  FixtureSite s;
  s.domain = j.at("domain").get<std::string>();
  s.description = j.value("description", "");
  s.failure = j.value("failure", "");
  for (const auto& [path, page] : j.at("pages").items()) {
    FixturePage p;
    p.title = page.value("title", "");
    for (const auto& n : page.at("nodes")) p.nodes.push_back(node_from_json(n));
    s.pages.emplace(path, std::move(p));
  }
  if (j.contains("expected")) {
    const auto& e = j["expected"];
    s.expected.status = e.value("status", "");
    if (e.contains("plan")) s.expected.plan = e["plan"].get<std::vector<std::vector<std::string>>>();
    if (e.contains("roles")) s.expected.roles = e["roles"].get<std::map<std::string, std::string>>();
    s.expected.notice = e.value("notice", "");
    s.expected.frame = e.value("frame", "");
    s.expected.expect_failure = e.value("expect_failure", "");
  }
  if (j.contains("measure")) s.measure = j["measure"];
  return s;
}

FixtureSite load_site(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read fixture " + path);
  try {
    return site_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, path + ": " + e.what());
  }
}

std::vector<FixtureSite> load_sites(const std::string& dir) {
  std::vector<FixtureSite> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") out.push_back(load_site(entry.path().string()));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.domain < b.domain; });
  return out;
}

}  // namespace cookiepilot::fixture
