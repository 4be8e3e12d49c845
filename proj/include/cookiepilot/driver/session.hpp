#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cookiepilot/dom/snapshot.hpp"

namespace cookiepilot::driver {

struct SessionOptions {
  int page_load_timeout_ms = 30000;
  int settle_delay_ms = 2000;
  int script_timeout_ms = 10000;
  // Gap between the two clicks of a role probe.
  int probe_click_gap_ms = 500;
  int http_timeout_ms = 15000;
};

enum class ClickError { kNone, kNotInteractable, kStale, kIntercepted, kNavigated };

std::string_view click_error_name(ClickError e);

struct ClickOutcome {
  bool clicked = false;
  ClickError error_kind = ClickError::kNone;
  bool url_changed = false;
  bool new_tab_opened = false;

  bool operator==(const ClickOutcome&) const = default;
};

enum class ElementState { kSelected, kNotSelected, kStateless, kGone };

std::string_view element_state_name(ElementState s);
ElementState element_state_from_name(std::string_view name);

void to_json(nlohmann::json& j, const ClickOutcome& c);

class WireClient;

// One W3C WebDriver session. Not thread-safe: callers serialize access.
class Session {
 public:
  ~Session();
  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return session_id_; }
  const std::string& base_url() const { return base_url_; }
  const SessionOptions& options() const { return options_; }
  SessionOptions& options() { return options_; }

  // Loads `url`, waits for readyState=complete plus the settle delay and
  // captures the top-level document.
  dom::PageSnapshot navigate(const std::string& url);

  // Snapshot of the current browsing context (top document or frame).
  dom::PageSnapshot snapshot();

  // Focuses `within`, presses Tab until focus repeats or leaves the
  // container twice in a row, and returns the focused descendants in
  // focus order.
  std::vector<dom::ElementSnapshot> tab_cycle(const dom::SelectorPath& within);

  // Never throws for element-level failures; they are reported in the
  // outcome. New tabs opened by the click are closed immediately.
  ClickOutcome click(const dom::SelectorPath& element);

  ElementState query_state(const dom::SelectorPath& element);

  // Clears cookies and storage for the origin, then navigates.
  dom::PageSnapshot reset(const std::string& url);

  void switch_to_frame(const dom::SelectorPath& frame);
  void switch_to_top();

  std::string current_url();
  int clicks_issued() const { return clicks_issued_; }

  void close();

 private:
  friend Session open_session(const std::string&, bool, SessionOptions);
  Session(std::unique_ptr<WireClient> wire, std::string session_id, std::string base_url,
          SessionOptions options);

  std::optional<std::string> find_element(const dom::SelectorPath& selector);
  nlohmann::json execute(std::string_view script, nlohmann::json args = nlohmann::json::array());
  std::vector<std::string> window_handles();
  void settle();

  std::unique_ptr<WireClient> wire_;
  std::string session_id_;
  std::string base_url_;
  SessionOptions options_;
  int clicks_issued_ = 0;
};

// Creates a session with a fresh profile. Throws DriverUnreachable
// (cause ProtocolError for malformed replies) or SessionRejected.
Session open_session(const std::string& endpoint, bool headless, SessionOptions options = {});

// W3C element reference key.
inline constexpr const char* kElementKey = "element-6066-11e4-a52e-4f735466cecf";

}  // namespace cookiepilot::driver
