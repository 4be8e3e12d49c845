#include "cookiepilot/measure/measure.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "cookiepilot/decide/plan.hpp"
#include "cookiepilot/decide/serialize.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/text.hpp"

namespace cookiepilot::measure {

MeasureFlags measure_flags(const store::EnforcementRecord& r) {
  using store::RecordStatus;
  MeasureFlags f;
  f.m1 = r.status == RecordStatus::kPlan || r.status == RecordStatus::kAcceptOnly ||
         r.status == RecordStatus::kDedicatedPage;
  if (!f.m1 || r.serialized_notice.empty()) return f;

  NoticeModel model;
  try {
    model = decide::parse_serialized(r.serialized_notice, r.domain);
  } catch (const Error&) {
    return f;
  }
  f.m2 = r.status != RecordStatus::kDedicatedPage && model.element_count() == 1;
  if (r.status != RecordStatus::kPlan) return f;
  for (const auto& step : r.steps) {
    auto tag = ElementTag::parse(step.tag_rendered);
    if (!tag || tag->kind != ElementTag::Kind::kSwitch) continue;
    for (const auto& v : model.views) {
      for (const auto& e : v.elements) {
        if (!(e.tag == *tag)) continue;
        auto target = decide::target_state(e);
        if (target && e.state != *target) f.m3 = true;
      }
    }
  }
  return f;
}

MeasurementReport fold_records(const std::string& region, std::size_t domains_total,
                               const std::vector<store::EnforcementRecord>& records) {
  MeasurementReport rep;
  rep.region = region;
  rep.domains_total = domains_total;
  for (const auto& r : records) {
    DomainMeasurement d{r.domain, r.status, measure_flags(r)};
    if (r.status != store::RecordStatus::kError) ++rep.domains_analyzed;
    rep.m1_with_notice += d.flags.m1;
    rep.m2_no_choice += d.flags.m2;
    rep.m3_default_enabled += d.flags.m3;
    rep.per_domain.push_back(std::move(d));
  }
  std::stable_sort(rep.per_domain.begin(), rep.per_domain.end(),
                   [](const auto& a, const auto& b) { return a.domain < b.domain; });
  return rep;
}

std::string report_json(const MeasurementReport& rep) {
  nlohmann::ordered_json j;
  j["region"] = rep.region;
  j["domains_total"] = rep.domains_total;
  j["domains_analyzed"] = rep.domains_analyzed;
  j["m1_with_notice"] = rep.m1_with_notice;
  j["m2_no_choice"] = rep.m2_no_choice;
  j["m3_default_enabled"] = rep.m3_default_enabled;
  j["notes"] = {{"dedicated_page_in_m1", true}, {"dedicated_page_in_m2", false}};
  nlohmann::ordered_json per = nlohmann::ordered_json::array();
  for (const auto& d : rep.per_domain) {
    nlohmann::ordered_json e;
    e["domain"] = d.domain;
    e["status"] = store::status_name(d.status);
    e["m_flags"] = {{"m1", d.flags.m1}, {"m2", d.flags.m2}, {"m3", d.flags.m3}};
    per.push_back(std::move(e));
  }
  j["per_domain"] = std::move(per);
  return j.dump(2) + "\n";
}

MeasureRun measure(const std::vector<std::string>& domains, const PipelineConfig& config, int workers) {
  std::vector<std::optional<PipelineResult>> results(domains.size());
  std::atomic<std::size_t> next{0};
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(domains.size(), 1))));

  auto work = [&] {
    std::optional<driver::Session> session;
    for (std::size_t i = next++; i < domains.size(); i = next++) {
      if (!session) {
        try {
          session.emplace(driver::open_session(config.driver_endpoint, config.headless, config.session));
        } catch (const std::exception& e) {
          PipelineResult failed;
          failed.record.domain = store::registrable_domain(domains[i]);
          failed.record.region = config.region;
          failed.record.generated_at = config.clock();
          failed.record.status = store::RecordStatus::kError;
          failed.record.error_stage = "session";
          failed.error = e.what();
          results[i] = std::move(failed);
          continue;
        }
      }
      results[i] = run_pipeline(*session, domains[i], config);
      // A crashed page poisons the session; start clean for the next domain.
      if (results[i]->record.status == store::RecordStatus::kError) {
        try {
          session->close();
        } catch (const std::exception&) {
        }
        session.reset();
      }
    }
    if (session) {
      try {
        session->close();
      } catch (const std::exception&) {
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  MeasureRun run;
  for (auto& r : results) {
    if (!r || r->skipped_language) continue;
    if (r->record.status == store::RecordStatus::kError) ++run.failures;
    run.records.push_back(std::move(r->record));
  }
  run.report = fold_records(config.region, domains.size(), run.records);
  return run;
}

std::vector<std::string> read_domain_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read domain list " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = text::normalize_whitespace(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace cookiepilot::measure
