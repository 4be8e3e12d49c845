#include "cookiepilot/fixture/harness.hpp"

#include <set>

namespace cookiepilot::fixture {

measure::PipelineConfig fixture_config(const std::string& driver_endpoint) {
  measure::PipelineConfig c;
  c.driver_endpoint = driver_endpoint;
  c.url_template = "http://{domain}/";
  c.session.settle_delay_ms = 30;
  c.session.probe_click_gap_ms = 2;
  c.session.page_load_timeout_ms = 5000;
  c.step_delay_ms = 300;
  c.clock = [] { return std::string("2026-01-01T00:00:00Z"); };
  return c;
}

std::string short_role(Role r) {
  switch (r) {
    case Role::kTypeA: return "A";
    case Role::kTypeB: return "B";
    case Role::kTypeC: return "C";
    case Role::kTypeD: return "D";
    case Role::kUnknown: break;
  }
  return "UNKNOWN";
}

namespace {

std::string join(const std::vector<std::vector<std::string>>& plan) {
  std::string out = "[";
  for (std::size_t v = 0; v < plan.size(); ++v) {
    if (v) out += ", ";
    out += "[";
    for (std::size_t i = 0; i < plan[v].size(); ++i) out += (i ? " " : "") + plan[v][i];
    out += "]";
  }
  return out + "]";
}

}  // namespace

SiteRun run_site(driver::Session& session, const FixtureSite& site, const measure::PipelineConfig& config) {
  SiteRun run;
  run.domain = site.domain;
  run.result = measure::run_pipeline(session, site.domain, config);
  run.status = std::string(store::status_name(run.result.record.status));

  if (run.result.plan) {
    for (const auto& step : run.result.plan->steps) {
      if (run.plan.size() <= static_cast<std::size_t>(step.view_index)) run.plan.resize(step.view_index + 1);
      run.plan[step.view_index].push_back(step.node_id);
    }
  }
  if (run.result.model) {
    for (const auto& view : run.result.model->views) {
      for (const auto& e : view.elements) {
        if (e.role) run.roles[e.snapshot.node_id] = short_role(*e.role);
      }
    }
  }

  const ExpectedOutcome& want = site.expected;
  run.status_ok = run.status == want.status;
  if (!run.status_ok) {
    run.mismatches.push_back("status " + run.status + " want " + want.status +
                             (run.result.error.empty() ? "" : " (" + run.result.error + ")"));
  }
  run.plan_ok = run.plan == want.plan;
  if (!run.plan_ok) run.mismatches.push_back("plan " + join(run.plan) + " want " + join(want.plan));

  run.roles_ok = true;
  std::set<std::string> seen;
  for (const auto& [id, role] : run.roles) {
    seen.insert(id);
    auto it = want.roles.find(id);
    if (it == want.roles.end()) {
      run.roles_ok = false;
      run.mismatches.push_back("unexpected probed element " + id + " role " + role);
    } else if (it->second != role) {
      run.roles_ok = false;
      run.mismatches.push_back("role of " + id + " is " + role + " want " + it->second);
    }
  }
  for (const auto& [id, role] : want.roles) {
    if (!seen.count(id)) {
      run.roles_ok = false;
      run.mismatches.push_back("element " + id + " (" + role + ") never probed");
    }
  }
  return run;
}

}  // namespace cookiepilot::fixture
