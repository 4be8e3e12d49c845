#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cookiepilot/analyze/notice_model.hpp"
#include "cookiepilot/audit_log.hpp"
#include "cookiepilot/detect/detector.hpp"
#include "cookiepilot/driver/session.hpp"

namespace cookiepilot::probe {

struct ProbeEvidence {
  driver::ClickOutcome first_click;
  driver::ClickOutcome second_click;
  driver::ElementState state_before = driver::ElementState::kStateless;
  driver::ElementState state_after_first = driver::ElementState::kStateless;
  driver::ElementState state_after_second = driver::ElementState::kStateless;
  bool notice_gone_after_first = false;
  bool new_notice_detected = false;
  bool element_visible_after = false;
  bool dom_changed = false;

  bool operator==(const ProbeEvidence&) const = default;
};

void to_json(nlohmann::json& j, const ProbeEvidence& e);

struct RoleDecision {
  Role role = Role::kUnknown;
  bool low_confidence = false;
};

// Criteria in priority order A > B > C > D, else UNKNOWN. Pure.
RoleDecision assign_role(const ProbeEvidence& e);

struct RoleProbeResult {
  Role role = Role::kUnknown;
  bool low_confidence = false;
  ProbeEvidence evidence;
  dom::PageSnapshot before;
  // Context snapshot right after the first click, used to collect what a
  // Type C element revealed.
  dom::PageSnapshot after_first;
  // Set for Type B: the notice that replaced the probed one.
  std::optional<detect::NoticeCandidate> new_notice;
};

// Clicks `el` twice, `gap` apart, and classifies it. `notice` is the
// container of the element's view. Throws Error(kProbeAborted) when the
// element is not visible before the first click.
RoleProbeResult probe_role(driver::Session& s, const InteractiveElement& el,
                           const detect::ClassifierHandle& detector,
                           const dom::SelectorPath& notice);

// Restores a page to one view of a notice: reset, enter the frame, then
// replay the opener clicks.
struct ProbeContext {
  driver::Session& session;
  std::string url;
  std::string domain;
  std::optional<dom::SelectorPath> frame;
  int click_budget = 120;
  int clicks_at_start = 0;
  AuditLog* audit = nullptr;
  // Exploration also stops once this passes.
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();

  ProbeContext(driver::Session& s, std::string url, std::string domain, int budget = 120);

  int clicks_used() const { return session.clicks_issued() - clicks_at_start; }
  bool has_budget(int clicks) const {
    return clicks_used() + clicks <= click_budget && std::chrono::steady_clock::now() < deadline;
  }

  void restore(const std::vector<dom::SelectorPath>& replay);
  void log(int view, const std::string& tag, const std::string& action,
           const nlohmann::json& outcome, const std::string& reason = {}) const;
};

// Click targets that bring a fresh page to `view`, optionally followed
// by `revealer_node` (a Type C element of that view).
std::vector<dom::SelectorPath> replay_chain(const NoticeModel& model, int view,
                                            const std::string& revealer_node = {});

struct ProbeAllOptions {
  // Re-probe elements that already carry a role.
  bool force = false;
};

// Annotates every element with a role. Throws
// Error(kExplorationBudgetExceeded) when the budget runs out. Ends with a
// reset so the page shows the notice again.
NoticeModel probe_all(ProbeContext& ctx, NoticeModel model, const detect::ClassifierHandle& detector,
                      ProbeAllOptions options = {});

}  // namespace cookiepilot::probe
