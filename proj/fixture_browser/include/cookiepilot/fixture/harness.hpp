#pragma once

#include <map>
#include <string>
#include <vector>

#include "cookiepilot/fixture/site.hpp"
#include "cookiepilot/measure/pipeline.hpp"

namespace cookiepilot::fixture {

// Pipeline settings sized for the simulated browser.
measure::PipelineConfig fixture_config(const std::string& driver_endpoint);

struct SiteRun {
  std::string domain;
  measure::PipelineResult result;
  std::string status;
  std::vector<std::vector<std::string>> plan;  // node ids grouped by view
  std::map<std::string, std::string> roles;    // node id -> "A".."D"/"UNKNOWN"

  bool status_ok = false;
  bool plan_ok = false;
  bool roles_ok = false;
  std::vector<std::string> mismatches;

  bool ok() const { return status_ok && plan_ok && roles_ok; }
};

// Runs the pipeline on one site and compares it against site.expected.
SiteRun run_site(driver::Session& session, const FixtureSite& site, const measure::PipelineConfig& config);

std::string short_role(Role r);

}  // namespace cookiepilot::fixture
