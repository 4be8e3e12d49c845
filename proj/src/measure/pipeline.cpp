#include "cookiepilot/measure/pipeline.hpp"

#include <cctype>

#include "cookiepilot/analyze/analyzer.hpp"
#include "cookiepilot/detect/detector.hpp"
#include "cookiepilot/dom/stacking.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/probe/role_prober.hpp"

namespace cookiepilot::measure {

bool looks_english(const dom::PageSnapshot& page) {
  std::size_t ascii = 0, other = 0;
  for (const auto& e : page.elements) {
    if (!dom::is_visible(e)) continue;
    for (unsigned char c : e.own_text) {
      if (std::isalpha(c)) {
        ++ascii;
      } else if (c >= 0xC0) {
        ++other;  // first byte of a multi-byte code point
      }
    }
  }
  if (ascii + other == 0) return true;
  return static_cast<double>(ascii) / static_cast<double>(ascii + other) >= 0.8;
}

std::string domain_url(const PipelineConfig& config, const std::string& domain) {
  std::string url = config.url_template;
  const std::string key = "{domain}";
  for (std::size_t pos = url.find(key); pos != std::string::npos; pos = url.find(key, pos)) {
    url.replace(pos, key.size(), domain);
    pos += domain.size();
  }
  return url;
}

namespace {

struct StageFailure {
  std::string stage;
  std::string message;
};

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw StageFailure{name, e.what()};
  }
}

std::vector<store::EnforcementStep> record_steps(const NoticeModel& model, const decide::ClickPlan& p,
                                                 int delay_ms) {
  std::vector<store::EnforcementStep> steps;
  for (const auto& s : p.steps) {
    const InteractiveElement* e = model.find_node(s.node_id);
    if (!e) throw Error(ErrorCode::kValidationFailed, "plan step " + s.tag.rendered() + " unbound");
    store::EnforcementStep out;
    out.view_index = s.view_index;
    out.tag_rendered = s.tag.rendered();
    out.selector = e->click_target.empty() ? e->snapshot.selector_path : e->click_target;
    if (e->role == Role::kTypeA) out.expected_state_before = e->state;
    out.delay_after_ms = delay_ms;
    steps.push_back(std::move(out));
  }
  return steps;
}

}  // namespace

PipelineResult run_pipeline(driver::Session& session, const std::string& raw_domain, const PipelineConfig& config) {
  PipelineResult result;
  store::EnforcementRecord& rec = result.record;
  rec.domain = store::registrable_domain(raw_domain);
  rec.region = config.region;
  rec.generated_at = config.clock();
  const std::string url = domain_url(config, raw_domain);
  const auto started = std::chrono::steady_clock::now();

  try {
    dom::PageSnapshot top = stage("navigate", [&] { return session.navigate(url); });
    if (config.english_only && config.is_english && !config.is_english(top)) {
      result.skipped_language = true;
      rec.status = store::RecordStatus::kNoNotice;
      return result;
    }

    std::optional<detect::LocatedNotice> located;
    try {
      located = stage("detect", [&] { return detect::locate_notice(session, top, config.classifier); });
    } catch (const StageFailure& f) {
      if (f.message.rfind(std::string(error_code_name(ErrorCode::kEmptyPage)), 0) != 0) throw;
    }
    if (!located) {
      rec.status = store::RecordStatus::kNoNotice;
      return result;
    }

    probe::ProbeContext ctx(session, url, rec.domain, config.click_budget);
    ctx.audit = config.audit;
    ctx.deadline = started + std::chrono::milliseconds(config.domain_deadline_ms);
    NoticeModel model = stage("explore", [&] {
      return analyze::explore_views(ctx, *located, config.classifier, {config.max_view_depth});
    });
    model = stage("probe", [&] { return probe::probe_all(ctx, std::move(model), config.classifier); });
    result.model = model;
    rec.notice_selector = model.notice_selector;
    if (model.frame) rec.frame_selector = *model.frame;

    std::optional<decide::SerializedNotice> sn;
    try {
      sn = stage("serialize", [&] { return decide::serialize(model); });
    } catch (const StageFailure&) {
      if (!model.dedicated_page) throw;
      rec.status = store::RecordStatus::kDedicatedPage;
      return result;
    }
    rec.serialized_notice = sn->text;

    decide::ClickPlan p = stage("plan", [&] { return decide::plan(*sn, config.provider, config.planner); });
    result.plan = p;
    rec.plan_text = p.rendered;
    if (p.status == decide::PlanStatus::kNoOptOut) {
      rec.status = model.dedicated_page ? store::RecordStatus::kDedicatedPage : store::RecordStatus::kAcceptOnly;
    } else {
      rec.status = store::RecordStatus::kPlan;
      rec.steps = stage("record", [&] { return record_steps(model, p, config.step_delay_ms); });
    }
    stage("record", [&] {
      store::validate_record(rec);
      return 0;
    });
  } catch (const StageFailure& f) {
    rec.status = store::RecordStatus::kError;
    rec.error_stage = f.stage;
    rec.steps.clear();
    result.error = f.message;
    if (config.audit) config.audit->record(rec.domain, -1, "", "pipeline", f.stage, f.message);
  }
  return result;
}

store::EnforcementRecord run_pipeline(const std::string& domain, const PipelineConfig& config) {
  std::optional<driver::Session> session;
  try {
    session.emplace(driver::open_session(config.driver_endpoint, config.headless, config.session));
  } catch (const std::exception& e) {
    store::EnforcementRecord rec;
    rec.domain = store::registrable_domain(domain);
    rec.region = config.region;
    rec.generated_at = config.clock();
    rec.status = store::RecordStatus::kError;
    rec.error_stage = "session";
    if (config.audit) config.audit->record(rec.domain, -1, "", "pipeline", "session", e.what());
    return rec;
  }
  store::EnforcementRecord rec = run_pipeline(*session, domain, config).record;
  try {
    session->close();
  } catch (const std::exception&) {
  }
  return rec;
}

}  // namespace cookiepilot::measure
