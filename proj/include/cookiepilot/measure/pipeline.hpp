#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cookiepilot/analyze/notice_model.hpp"
#include "cookiepilot/audit_log.hpp"
#include "cookiepilot/decide/plan.hpp"
#include "cookiepilot/detect/classifier.hpp"
#include "cookiepilot/driver/session.hpp"
#include "cookiepilot/store/enforcement_db.hpp"

namespace cookiepilot::measure {

// Decides whether a loaded page is in English. Only consulted when
// PipelineConfig::english_only is set.
using LanguageHook = std::function<bool(const dom::PageSnapshot&)>;

// Share of ASCII letters among the letters of the page's visible text.
bool looks_english(const dom::PageSnapshot& page);

struct PipelineConfig {
  std::string driver_endpoint = "http://127.0.0.1:4444";
  bool headless = true;
  driver::SessionOptions session;
  detect::ClassifierHandle classifier = detect::ClassifierHandle::baseline();
  decide::PlanProvider provider = decide::PlanProvider::kRules;
  decide::PlannerConfig planner;
  std::string region = "default";
  std::string url_template = "https://{domain}/";
  int click_budget = 120;
  int max_view_depth = 2;
  int domain_deadline_ms = 120000;
  int step_delay_ms = 1000;
  bool english_only = false;
  LanguageHook is_english = looks_english;
  AuditLog* audit = nullptr;
  // Timestamp source for records.
  std::function<std::string()> clock = store::utc_now;
};

std::string domain_url(const PipelineConfig& config, const std::string& domain);

struct PipelineResult {
  store::EnforcementRecord record;
  std::optional<NoticeModel> model;
  std::optional<decide::ClickPlan> plan;
  bool skipped_language = false;
  std::string error;  // message of the failing stage
};

// navigate -> detect -> explore -> probe -> serialize -> plan -> record.
// Never throws for pipeline failures; they become status ERROR with the
// stage name in error_stage.
PipelineResult run_pipeline(driver::Session& session, const std::string& domain, const PipelineConfig& config);

// Opens its own session for the run.
store::EnforcementRecord run_pipeline(const std::string& domain, const PipelineConfig& config);

}  // namespace cookiepilot::measure
