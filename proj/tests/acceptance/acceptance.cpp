// Runs every acceptance criterion against the fixture corpus and prints
// one PASS/FAIL line per criterion.
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cookiepilot/decide/plan.hpp"
#include "cookiepilot/decide/serialize.hpp"
#include "cookiepilot/detect/classifier.hpp"
#include "cookiepilot/detect/detector.hpp"
#include "cookiepilot/dom/stacking.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/fixture/harness.hpp"
#include "cookiepilot/measure/measure.hpp"
#include "cookiepilot/store/enforcement_db.hpp"
#include "unit/model_oracle.hpp"
#include "unit/reference_cases.hpp"
#include "unit/support.hpp"

namespace cp = cookiepilot;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_s;
  std::function<Verdict()> run;
  bool uses_fixture_run = false;
};

double g_fixture_run_s = 0;

std::vector<cp::fixture::SiteRun>& site_runs() {
  static std::vector<cp::fixture::SiteRun> runs = [] {
    auto start = Clock::now();
    auto& server = testsupport::fixture_server();
    auto config = cp::fixture::fixture_config(server.endpoint());
    auto session = cp::driver::open_session(server.endpoint(), true, config.session);
    std::vector<cp::fixture::SiteRun> out;
    for (const auto& site : testsupport::sites()) out.push_back(cp::fixture::run_site(session, site, config));
    session.close();
    g_fixture_run_s = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }();
  return runs;
}

Verdict decision_rows() {
  int ok = 0;
  std::string bad;
  for (const auto& r : testsupport::reference::kDecisionRows) {
    auto text = cp::decide::parse_serialized(r.input);
    auto p = cp::decide::plan({r.input, text}, cp::decide::PlanProvider::kRules);
    if (testsupport::squash(p.rendered) == testsupport::squash(r.output)) {
      ++ok;
    } else {
      bad += std::string(" ") + r.site + "=\"" + p.rendered + "\"";
    }
  }
  return {ok == 5, std::to_string(ok) + "/5 rows" + bad};
}

Verdict reference_examples() {
  auto& server = testsupport::fixture_server();
  auto config = cp::fixture::fixture_config(server.endpoint());
  auto session = cp::driver::open_session(server.endpoint(), true, config.session);
  auto r = cp::measure::run_pipeline(session, "askubuntu.test", config);
  session.close();
  bool serialized = r.record.serialized_notice == testsupport::reference::kAskUbuntuSerialized;
  auto input = testsupport::reference::kDoNotAllowInput;
  auto p = cp::decide::plan({input, cp::decide::parse_serialized(input)}, cp::decide::PlanProvider::kRules);
  bool planned = p.rendered == testsupport::reference::kDoNotAllowPlan;
  return {serialized && planned, std::string("askubuntu serialization ") + (serialized ? "exact" : "differs") +
                                     ", do-not-allow plan \"" + p.rendered + "\""};
}

Verdict end_to_end() {
  const auto& runs = site_runs();
  int ok = 0;
  std::string missed;
  for (const auto& r : runs) {
    if (r.plan_ok && r.status_ok) {
      ++ok;
    } else {
      missed += " " + r.domain;
    }
  }
  double rate = runs.empty() ? 0 : double(ok) / runs.size();
  std::ostringstream d;
  d.precision(3);
  d << ok << "/" << runs.size() << " sites = " << rate * 100 << "%, missed:" << missed;
  return {runs.size() >= 25 && rate >= 0.9, d.str()};
}

Verdict roles() {
  std::size_t total = 0, matched = 0, extra = 0;
  std::string bad;
  for (const auto& r : site_runs()) {
    const auto& want = testsupport::site(r.domain).expected.roles;
    for (const auto& [node, role] : want) {
      ++total;
      auto it = r.roles.find(node);
      if (it != r.roles.end() && it->second == role) {
        ++matched;
      } else {
        bad += " " + r.domain + ":" + node;
      }
    }
    for (const auto& [node, role] : r.roles) {
      if (!want.count(node)) {
        ++extra;
        bad += " " + r.domain + ":" + node + "(unexpected)";
      }
    }
  }
  return {total > 0 && matched == total && extra == 0,
          std::to_string(matched) + "/" + std::to_string(total) + " elements" + bad};
}

Verdict detector() {
  auto& server = testsupport::fixture_server();
  auto config = cp::fixture::fixture_config(server.endpoint());
  auto session = cp::driver::open_session(server.endpoint(), true, config.session);
  int pages = 0, contained = 0;
  for (const auto& site : testsupport::sites()) {
    if (!site.failure.empty()) continue;
    auto top = session.reset(cp::measure::domain_url(config, site.domain));
    auto located = cp::detect::locate_notice(session, top, config.classifier);
    session.switch_to_top();
    if (!located) continue;
    ++pages;
    for (const auto& c : cp::dom::stacking_candidates(located->page)) {
      if (c.node_id == located->candidate.element.node_id) {
        ++contained;
        break;
      }
    }
  }
  session.close();

  std::ifstream in(testsupport::fixtures_dir() + "/classifier/labeled.jsonl");
  auto h = cp::detect::ClassifierHandle::baseline();
  int tp = 0, fp = 0, fn = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    bool predicted = cp::detect::classify(h, j["text"].get<std::string>()) >= h.threshold;
    bool label = j["label"].get<int>() == 1;
    tp += predicted && label;
    fp += predicted && !label;
    fn += !predicted && label;
  }
  double precision = tp + fp ? double(tp) / (tp + fp) : 0;
  double recall = tp + fn ? double(tp) / (tp + fn) : 0;
  double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0;
  std::ostringstream d;
  d.precision(4);
  d << contained << "/" << pages << " detections among candidates, F1 " << f1;
  return {pages > 0 && contained == pages && f1 >= 0.9, d.str()};
}

Verdict round_trip() {
  int fixture_models = 0;
  std::string bad;
  for (const auto& r : site_runs()) {
    if (!r.result.model || !r.result.plan) continue;
    ++fixture_models;
    auto sn = cp::decide::serialize(*r.result.model);
    auto why = testsupport::check_round_trip(sn, *r.result.plan);
    if (why.empty() && sn.text != r.result.record.serialized_notice) why = "record text differs";
    if (!why.empty()) bad += " " + r.domain + "(" + why + ")";
  }
  std::mt19937 rng(20240611);
  int fuzzed = 0, fuzz_bad = 0;
  for (int n = 0; n < 1000; ++n) {
    auto out = testsupport::check_generated(testsupport::random_model(rng));
    ++fuzzed;
    if (!out.failure.empty()) {
      ++fuzz_bad;
      if (fuzz_bad <= 3) bad += " fuzz#" + std::to_string(n) + "(" + out.failure + ")";
    }
  }
  return {bad.empty() && fixture_models > 0, std::to_string(fixture_models) + " fixture models, " +
                                                   std::to_string(fuzzed - fuzz_bad) + "/" +
                                                   std::to_string(fuzzed) + " fuzzed models" + bad};
}

Verdict measurement() {
  auto& server = testsupport::fixture_server();
  auto config = cp::fixture::fixture_config(server.endpoint());
  auto domains = cp::measure::read_domain_list(testsupport::fixtures_dir() + "/measure_domains.txt");
  std::size_t m1 = 0, m2 = 0, m3 = 0;
  for (const auto& d : domains) {
    const auto& want = testsupport::site(d).measure.value();
    m1 += want["m1"].get<bool>();
    m2 += want["m2"].get<bool>();
    m3 += want["m3"].get<bool>();
  }
  auto first = cp::measure::measure(domains, config, 4);
  auto second = cp::measure::measure(domains, config, 2);
  const auto& rep = first.report;
  bool exact = rep.m1_with_notice == m1 && rep.m2_no_choice == m2 && rep.m3_default_enabled == m3;
  bool same = cp::measure::report_json(rep) == cp::measure::report_json(second.report);
  std::ostringstream d;
  d << "M1 " << rep.m1_with_notice << "/" << m1 << " M2 " << rep.m2_no_choice << "/" << m2 << " M3 "
    << rep.m3_default_enabled << "/" << m3 << " over " << domains.size() << " domains, reruns "
    << (same ? "byte-identical" : "differ");
  return {exact && same, d.str()};
}

Verdict database() {
  std::vector<cp::store::EnforcementRecord> recs;
  for (const auto& r : site_runs()) {
    if (r.result.record.status != cp::store::RecordStatus::kError) recs.push_back(r.result.record);
  }
  for (auto& r : recs) r.region = "acceptance";
  cp::store::EnforcementDb a(":memory:"), b(":memory:");
  for (const auto& r : recs) a.put(r);
  for (auto it = recs.rbegin(); it != recs.rend(); ++it) b.put(*it);
  auto bytes = a.export_bundle("acceptance");
  bool same = bytes == a.export_bundle("acceptance") && bytes == b.export_bundle("acceptance");

  std::size_t accepted_tamper = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    auto t = bytes;
    t[i] = static_cast<char>(t[i] ^ 0x01);
    try {
      cp::store::verify_bundle(t);
      ++accepted_tamper;
    } catch (const cp::Error&) {
    }
  }
  bool intact = true;
  try {
    intact = cp::store::verify_bundle(bytes).records.size() == recs.size();
  } catch (const cp::Error&) {
    intact = false;
  }
  return {same && intact && accepted_tamper == 0,
          std::to_string(recs.size()) + " records, " + std::to_string(bytes.size()) + " bytes, exports " +
              (same ? "identical" : "differ") + ", " + std::to_string(accepted_tamper) +
              " single-byte tamperings accepted"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"decision table 5/5", 1, decision_rows},
      {"reference serialization and plan", 1, reference_examples},
      {"end-to-end fixture plans >= 90%", 15 * 60, end_to_end, true},
      {"role oracle 100%", 10 * 60, roles, true},
      {"detector candidates and F1 >= 0.9", 60, detector},
      {"serializer and plan round trip", 60, round_trip, true},
      {"measurement fold and determinism", 60, measurement},
      {"bundle determinism and tamper rejection", 60, database, true},
  };
  try {
    site_runs();
  } catch (const std::exception& e) {
    std::cout << "fixture run failed: " << e.what() << std::endl;
  }
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.uses_fixture_run) secs += g_fixture_run_s;
    bool in_time = secs < c.limit_s;
    bool pass = v.pass && in_time;
    failed += !pass;
    std::ostringstream t;
    t.precision(3);
    t << secs;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << " | " << v.detail << " | " << t.str() << "s";
    if (!in_time) std::cout << " (limit " << c.limit_s << "s)";
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
