#include "cookiepilot/driver/session.hpp"

#include <chrono>
#include <thread>
#include <unordered_set>

#include <httplib.h>

#include "cookiepilot/dom/selector.hpp"
#include "cookiepilot/driver/scripts.hpp"
#include "cookiepilot/error.hpp"

namespace cookiepilot::driver {

using nlohmann::json;

std::string_view click_error_name(ClickError e) {
  switch (e) {
    case ClickError::kNone: return "NONE";
    case ClickError::kNotInteractable: return "NOT_INTERACTABLE";
    case ClickError::kStale: return "STALE";
    case ClickError::kIntercepted: return "INTERCEPTED";
    case ClickError::kNavigated: return "NAVIGATED";
  }
  return "NONE";
}

std::string_view element_state_name(ElementState s) {
  switch (s) {
    case ElementState::kSelected: return "SELECTED";
    case ElementState::kNotSelected: return "NOT_SELECTED";
    case ElementState::kStateless: return "STATELESS";
    case ElementState::kGone: return "GONE";
  }
  return "GONE";
}

ElementState element_state_from_name(std::string_view name) {
  if (name == "SELECTED") return ElementState::kSelected;
  if (name == "NOT_SELECTED") return ElementState::kNotSelected;
  if (name == "STATELESS") return ElementState::kStateless;
  return ElementState::kGone;
}

void to_json(json& j, const ClickOutcome& c) {
  j = json{{"clicked", c.clicked},
           {"error_kind", click_error_name(c.error_kind)},
           {"url_changed", c.url_changed},
           {"new_tab_opened", c.new_tab_opened}};
}

// A WebDriver reply: HTTP status plus the decoded "value" member.
struct WireReply {
  int status = 0;
  json value;

  bool ok() const { return status >= 200 && status < 300; }
  std::string error() const {
    return value.is_object() ? value.value("error", "unknown error") : "unknown error";
  }
  std::string message() const {
    return value.is_object() ? value.value("message", "") : "";
  }
};

class WireClient {
 public:
  WireClient(const std::string& base_url, int timeout_ms) : client_(base_url) {
    client_.set_connection_timeout(std::chrono::milliseconds(std::min(timeout_ms, 5000)));
    set_timeout(timeout_ms);
    client_.set_keep_alive(true);
  }

  void set_timeout(int timeout_ms) {
    client_.set_read_timeout(std::chrono::milliseconds(timeout_ms));
    client_.set_write_timeout(std::chrono::milliseconds(timeout_ms));
  }

  WireReply post(const std::string& path, const json& body) {
    return decode(client_.Post(path, body.dump(), "application/json"));
  }
  WireReply get(const std::string& path) { return decode(client_.Get(path)); }
  WireReply del(const std::string& path) { return decode(client_.Delete(path)); }

 private:
  static WireReply decode(const httplib::Result& res) {
    if (!res) {
      throw Error(ErrorCode::kDriverUnreachable, httplib::to_string(res.error()));
    }
    WireReply reply;
    reply.status = res->status;
    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("value")) {
      throw Error(ErrorCode::kDriverUnreachable, "malformed reply", "ProtocolError");
    }
    reply.value = std::move(doc["value"]);
    return reply;
  }

  httplib::Client client_;
};

namespace {

std::string strip_fragment(const std::string& url) {
  auto hash = url.find('#');
  return hash == std::string::npos ? url : url.substr(0, hash);
}

json element_ref(const std::string& eid) { return json{{kElementKey, eid}}; }

void sleep_ms(int ms) {
  if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

}  // namespace

Session::Session(std::unique_ptr<WireClient> wire, std::string session_id, std::string base_url,
                 SessionOptions options)
    : wire_(std::move(wire)),
      session_id_(std::move(session_id)),
      base_url_(std::move(base_url)),
      options_(options) {}

Session::~Session() {
  try {
    close();
  } catch (...) {
  }
}

Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;

void Session::close() {
  if (!wire_ || session_id_.empty()) return;
  std::string id = std::move(session_id_);
  session_id_.clear();
  wire_->del("/session/" + id);
}

Session open_session(const std::string& endpoint, bool headless, SessionOptions options) {
  auto wire = std::make_unique<WireClient>(endpoint, options.http_timeout_ms);
  json args = json::array({"--no-first-run", "--incognito"});
  if (headless) args.push_back("--headless=new");
  json caps = {{"capabilities",
                {{"alwaysMatch",
                  {{"acceptInsecureCerts", true},
                   {"pageLoadStrategy", "normal"},
                   {"timeouts",
                    {{"pageLoad", options.page_load_timeout_ms},
                     {"script", options.script_timeout_ms},
                     {"implicit", 0}}},
                   {"goog:chromeOptions", {{"args", args}}},
                   {"moz:firefoxOptions", {{"args", headless ? json::array({"-headless"})
                                                             : json::array()}}}}}}}};
  WireReply reply = wire->post("/session", caps);
  if (!reply.ok()) {
    throw Error(ErrorCode::kSessionRejected, reply.error() + ": " + reply.message());
  }
  if (!reply.value.is_object() || !reply.value.contains("sessionId") ||
      !reply.value["sessionId"].is_string() ||
      reply.value["sessionId"].get<std::string>().empty()) {
    throw Error(ErrorCode::kDriverUnreachable, "session reply lacks sessionId", "ProtocolError");
  }
  std::string id = reply.value["sessionId"];
  return Session(std::move(wire), std::move(id), endpoint, options);
}

json Session::execute(std::string_view script, json args) {
  WireReply reply = wire_->post("/session/" + session_id_ + "/execute/sync",
                                json{{"script", std::string(script)}, {"args", std::move(args)}});
  if (!reply.ok()) {
    throw Error(ErrorCode::kProtocolError, "script failed: " + reply.error());
  }
  return reply.value;
}

std::optional<std::string> Session::find_element(const dom::SelectorPath& selector) {
  WireReply reply = wire_->post("/session/" + session_id_ + "/element",
                                json{{"using", "css selector"}, {"value", selector.css}});
  if (!reply.ok()) {
    if (reply.error() == "no such element") return std::nullopt;
    throw Error(ErrorCode::kProtocolError, "find element: " + reply.error());
  }
  if (!reply.value.is_object() || !reply.value.contains(kElementKey)) {
    throw Error(ErrorCode::kProtocolError, "find element: missing reference");
  }
  return reply.value[kElementKey].get<std::string>();
}

std::vector<std::string> Session::window_handles() {
  WireReply reply = wire_->get("/session/" + session_id_ + "/window/handles");
  if (!reply.ok() || !reply.value.is_array()) {
    throw Error(ErrorCode::kProtocolError, "window handles: " + reply.error());
  }
  return reply.value.get<std::vector<std::string>>();
}

std::string Session::current_url() {
  WireReply reply = wire_->get("/session/" + session_id_ + "/url");
  if (!reply.ok() || !reply.value.is_string()) {
    throw Error(ErrorCode::kProtocolError, "current url: " + reply.error());
  }
  return reply.value.get<std::string>();
}

void Session::settle() {
  using Clock = std::chrono::steady_clock;
  auto deadline = Clock::now() + std::chrono::milliseconds(options_.page_load_timeout_ms);
  while (execute(scripts::kReady).get<std::string>() != "complete") {
    if (Clock::now() >= deadline) throw Error(ErrorCode::kNavTimeout, "readyState never completed");
    sleep_ms(50);
  }
  sleep_ms(options_.settle_delay_ms);
}

dom::PageSnapshot Session::navigate(const std::string& url) {
  wire_->set_timeout(options_.page_load_timeout_ms + options_.http_timeout_ms);
  WireReply reply = wire_->post("/session/" + session_id_ + "/url", json{{"url", url}});
  wire_->set_timeout(options_.http_timeout_ms);
  if (!reply.ok()) {
    std::string err = reply.error();
    if (err == "timeout") throw Error(ErrorCode::kNavTimeout, url);
    if (err == "unknown error" || err == "invalid session id") {
      throw Error(ErrorCode::kPageCrashed, url + ": " + reply.message());
    }
    throw Error(ErrorCode::kProtocolError, "navigate: " + err);
  }
  settle();
  return snapshot();
}

dom::PageSnapshot Session::snapshot() {
  dom::PageSnapshot page = execute(scripts::kSnapshot).get<dom::PageSnapshot>();
  dom::assign_selectors(page);
  return page;
}

std::vector<dom::ElementSnapshot> Session::tab_cycle(const dom::SelectorPath& within) {
  auto container = find_element(within);
  if (!container) throw Error(ErrorCode::kContainerGone, within.css);
  dom::PageSnapshot page = snapshot();
  execute(scripts::kFocus, json::array({element_ref(*container)}));

  const json tab_press = {
      {"actions",
       json::array({{{"type", "key"},
                     {"id", "keyboard"},
                     {"actions", json::array({{{"type", "keyDown"}, {"value", "\xEE\x80\x84"}},
                                              {{"type", "keyUp"}, {"value", "\xEE\x80\x84"}}})}}})}};

  std::vector<dom::ElementSnapshot> focused;
  std::unordered_set<std::string> seen;
  int outside_streak = 0;
  const std::size_t max_presses = page.elements.size() + 2;
  for (std::size_t press = 0; press < max_presses; ++press) {
    WireReply reply = wire_->post("/session/" + session_id_ + "/actions", tab_press);
    if (!reply.ok()) throw Error(ErrorCode::kProtocolError, "actions: " + reply.error());
    json active;
    try {
      active = execute(scripts::kActive, json::array({element_ref(*container)}));
    } catch (const Error&) {
      throw Error(ErrorCode::kContainerGone, within.css);
    }
    if (!active.value("inside", false) || !active["node_id"].is_string()) {
      if (++outside_streak >= 2) break;
      continue;
    }
    outside_streak = 0;
    std::string node_id = active["node_id"];
    if (!seen.insert(node_id).second) break;
    if (const dom::ElementSnapshot* e = page.find(node_id)) focused.push_back(*e);
  }
  return focused;
}

ClickOutcome Session::click(const dom::SelectorPath& element) {
  ClickOutcome outcome;
  ++clicks_issued_;
  const std::string before_url = strip_fragment(current_url());
  const std::vector<std::string> before_handles = window_handles();

  auto eid = find_element(element);
  if (!eid) {
    outcome.error_kind = ClickError::kStale;
    return outcome;
  }
  WireReply reply =
      wire_->post("/session/" + session_id_ + "/element/" + *eid + "/click", json::object());
  if (reply.ok()) {
    outcome.clicked = true;
  } else {
    std::string err = reply.error();
    if (err == "element not interactable") {
      outcome.error_kind = ClickError::kNotInteractable;
    } else if (err == "stale element reference" || err == "no such element") {
      outcome.error_kind = ClickError::kStale;
    } else if (err == "element click intercepted") {
      outcome.error_kind = ClickError::kIntercepted;
    } else {
      outcome.error_kind = ClickError::kNotInteractable;
    }
  }

  std::vector<std::string> after_handles = window_handles();
  if (after_handles.size() > before_handles.size()) {
    outcome.new_tab_opened = true;
    std::unordered_set<std::string> known(before_handles.begin(), before_handles.end());
    for (const auto& h : after_handles) {
      if (known.count(h)) continue;
      wire_->post("/session/" + session_id_ + "/window", json{{"handle", h}});
      wire_->del("/session/" + session_id_ + "/window");
    }
    wire_->post("/session/" + session_id_ + "/window", json{{"handle", before_handles.front()}});
  }
  outcome.url_changed = strip_fragment(current_url()) != before_url;
  if (outcome.url_changed && !outcome.clicked) outcome.error_kind = ClickError::kNavigated;
  return outcome;
}

ElementState Session::query_state(const dom::SelectorPath& element) {
  auto eid = find_element(element);
  if (!eid) return ElementState::kGone;
  json info;
  try {
    info = execute(scripts::kState, json::array({element_ref(*eid)}));
  } catch (const Error&) {
    return ElementState::kGone;
  }
  if (!info.value("displayed", false) || info.value("width", 0.0) <= 0 ||
      info.value("height", 0.0) <= 0) {
    return ElementState::kGone;
  }
  if (info.value("native_checkable", false)) {
    WireReply reply = wire_->get("/session/" + session_id_ + "/element/" + *eid + "/selected");
    if (!reply.ok()) return ElementState::kGone;
    return reply.value.get<bool>() ? ElementState::kSelected : ElementState::kNotSelected;
  }
  if (info.contains("label_control_checked") && info["label_control_checked"].is_boolean()) {
    return info["label_control_checked"].get<bool>() ? ElementState::kSelected
                                                      : ElementState::kNotSelected;
  }
  const json& aria = info["aria_checked"];
  const std::string role = info.value("role", json()).is_string() ? info["role"].get<std::string>()
                                                                  : std::string();
  if (aria.is_string() && (role == "switch" || role == "checkbox" || role == "radio" ||
                           role == "menuitemcheckbox")) {
    if (aria == "true") return ElementState::kSelected;
    if (aria == "false") return ElementState::kNotSelected;
  }
  return ElementState::kStateless;
}

dom::PageSnapshot Session::reset(const std::string& url) {
  switch_to_top();
  WireReply reply = wire_->del("/session/" + session_id_ + "/cookie");
  if (!reply.ok()) throw Error(ErrorCode::kProtocolError, "delete cookies: " + reply.error());
  execute(scripts::kClearStorage);
  return navigate(url);
}

void Session::switch_to_frame(const dom::SelectorPath& frame) {
  auto eid = find_element(frame);
  if (!eid) throw Error(ErrorCode::kContainerGone, frame.css);
  WireReply reply =
      wire_->post("/session/" + session_id_ + "/frame", json{{"id", element_ref(*eid)}});
  if (!reply.ok()) throw Error(ErrorCode::kContainerGone, "frame: " + reply.error());
}

void Session::switch_to_top() {
  WireReply reply = wire_->post("/session/" + session_id_ + "/frame", json{{"id", nullptr}});
  if (!reply.ok()) throw Error(ErrorCode::kProtocolError, "frame top: " + reply.error());
}

}  // namespace cookiepilot::driver
