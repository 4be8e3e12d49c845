#include <doctest.h>

#include <fstream>
#include <thread>

#include <httplib.h>

#include "cookiepilot/error.hpp"
#include "cookiepilot/fixture/harness.hpp"
#include "cookiepilot/measure/measure.hpp"
#include "cookiepilot/measure/pipeline.hpp"
#include "unit/support.hpp"

namespace cp = cookiepilot;
using cp::store::EnforcementRecord;
using cp::store::RecordStatus;

namespace {

EnforcementRecord record(std::string domain, RecordStatus status, std::string notice,
                         std::vector<std::string> steps = {}) {
  EnforcementRecord r;
  r.domain = std::move(domain);
  r.region = "eu";
  r.generated_at = "2026-01-01T00:00:00Z";
  r.status = status;
  r.serialized_notice = std::move(notice);
  for (auto& t : steps) {
    cp::store::EnforcementStep s;
    s.tag_rendered = t;
    s.selector = {"#" + t, cp::dom::SelectorStrategy::kById};
    r.steps.push_back(s);
  }
  return r;
}

struct SeqStub {
  explicit SeqStub(std::function<std::string(const std::string&)> reply) {
    server.Post("/plan", [reply](const httplib::Request& req, httplib::Response& res) {
      auto in = nlohmann::json::parse(req.body)["input"].get<std::string>();
      res.set_content(nlohmann::json{{"output", reply(in)}}.dump(), "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~SeqStub() {
    server.stop();
    thread.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port) + "/plan"; }

  httplib::Server server;
  int port = 0;
  std::thread thread;
};

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("flags on hand-built records") {
  using cp::measure::measure_flags;
  using F = cp::measure::MeasureFlags;
  CHECK(measure_flags(record("a.test", RecordStatus::kNoNotice, "")) == F{false, false, false});
  CHECK(measure_flags(record("a.test", RecordStatus::kError, "button0 - ok <end>")) == F{false, false, false});
  CHECK(measure_flags(record("a.test", RecordStatus::kAcceptOnly, "button0 - got it <end>")) ==
        F{true, true, false});
  CHECK(measure_flags(record("a.test", RecordStatus::kAcceptOnly,
                             "button0 - accept || button1 - more info <end>")) == F{true, false, false});
  CHECK(measure_flags(record("a.test", RecordStatus::kDedicatedPage, "button0 - accept <end>")) ==
        F{true, false, false});

  auto on = record("a.test", RecordStatus::kPlan,
                   "switch0 - analytics cookies, selected || button1 - save <end>", {"switch0", "button1"});
  CHECK(measure_flags(on) == F{true, false, true});
  auto off = record("a.test", RecordStatus::kPlan,
                    "switch0 - analytics cookies, not selected || button1 - save <end>", {"button1"});
  CHECK(measure_flags(off) == F{true, false, false});
  auto negated = record("a.test", RecordStatus::kPlan,
                        "switch0 - do not sell my data, not selected || button1 - save <end>",
                        {"switch0", "button1"});
  CHECK(measure_flags(negated).m3);
  auto reject = record("a.test", RecordStatus::kPlan, "button0 - accept || button1 - reject <end>", {"button1"});
  CHECK(measure_flags(reject) == F{true, false, false});
}

TEST_CASE("fold counts and order") {
  std::vector<EnforcementRecord> recs = {
      record("c.test", RecordStatus::kAcceptOnly, "button0 - ok <end>"),
      record("a.test", RecordStatus::kPlan, "switch0 - ads, selected || button1 - save <end>",
             {"switch0", "button1"}),
      record("b.test", RecordStatus::kError, ""),
      record("d.test", RecordStatus::kNoNotice, ""),
  };
  auto rep = cp::measure::fold_records("eu", 5, recs);
  CHECK(rep.domains_total == 5);
  CHECK(rep.domains_analyzed == 3);
  CHECK(rep.m1_with_notice == 2);
  CHECK(rep.m2_no_choice == 1);
  CHECK(rep.m3_default_enabled == 1);
  REQUIRE(rep.per_domain.size() == 4);
  CHECK(rep.per_domain[0].domain == "a.test");
  CHECK(rep.per_domain[3].domain == "d.test");

  auto shuffled = recs;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(cp::measure::report_json(rep) ==
        cp::measure::report_json(cp::measure::fold_records("eu", 5, shuffled)));
  auto j = nlohmann::json::parse(cp::measure::report_json(rep));
  CHECK(j["m1_with_notice"] == 2);
  CHECK(j["per_domain"][1]["status"] == "ERROR");
  CHECK(cp::measure::report_json(rep).back() == '\n');
}

TEST_CASE("empty domain list") {
  cp::measure::PipelineConfig config;
  auto run = cp::measure::measure({}, config, 4);
  CHECK(run.records.empty());
  CHECK(run.report.domains_total == 0);
  CHECK(run.report.m1_with_notice == 0);
  CHECK(run.report.m2_no_choice == 0);
  CHECK(run.report.m3_default_enabled == 0);
}

TEST_CASE("measurement subset matches the hand counts") {
  auto& server = testsupport::fixture_server();
  auto config = cp::fixture::fixture_config(server.endpoint());
  config.region = "eu";
  auto domains = cp::measure::read_domain_list(testsupport::fixtures_dir() + "/measure_domains.txt");
  REQUIRE(domains.size() == 10);

  std::size_t m1 = 0, m2 = 0, m3 = 0;
  for (const auto& d : domains) {
    const auto& site = testsupport::site(d);
    REQUIRE(site.measure);
    m1 += (*site.measure)["m1"].get<bool>();
    m2 += (*site.measure)["m2"].get<bool>();
    m3 += (*site.measure)["m3"].get<bool>();
  }
  CHECK(m1 == 6);
  CHECK(m2 == 2);
  CHECK(m3 == 3);

  auto run = cp::measure::measure(domains, config, 3);
  CHECK(run.failures == 0);
  CHECK(run.report.m1_with_notice == m1);
  CHECK(run.report.m2_no_choice == m2);
  CHECK(run.report.m3_default_enabled == m3);
  for (const auto& dm : run.report.per_domain) {
    CAPTURE(dm.domain);
    const auto& want = *testsupport::site(dm.domain).measure;
    CHECK(dm.flags.m1 == want["m1"].get<bool>());
    CHECK(dm.flags.m2 == want["m2"].get<bool>());
    CHECK(dm.flags.m3 == want["m3"].get<bool>());
  }

  auto again = cp::measure::measure(domains, config, 1);
  CHECK(cp::measure::report_json(run.report) == cp::measure::report_json(again.report));
}

TEST_CASE("domain lists and urls") {
  auto path = testsupport::temp_path("domains");
  {
    std::ofstream out(path);
    out << "# comment\n\n  example.com  \nshop.test # trailing\n";
  }
  auto d = cp::measure::read_domain_list(path);
  CHECK(d == std::vector<std::string>{"example.com", "shop.test"});
  CHECK_THROWS_AS(cp::measure::read_domain_list(path + ".missing"), cp::Error);

  cp::measure::PipelineConfig c;
  CHECK(cp::measure::domain_url(c, "a.test") == "https://a.test/");
  c.url_template = "http://127.0.0.1:8080/{domain}/?d={domain}";
  CHECK(cp::measure::domain_url(c, "a.test") == "http://127.0.0.1:8080/a.test/?d=a.test");
}

TEST_CASE("english heuristic") {
  cp::dom::PageSnapshot p;
  cp::dom::ElementSnapshot e;
  e.node_id = "t";
  e.displayed = true;
  e.bbox = {0, 0, 10, 10};
  e.own_text = "We use cookies to improve the site";
  p.elements.push_back(e);
  CHECK(cp::measure::looks_english(p));
  p.elements[0].own_text = "Мы используем файлы cookie";
  CHECK_FALSE(cp::measure::looks_english(p));
  p.elements[0].displayed = false;
  CHECK(cp::measure::looks_english(p));

  auto& server = testsupport::fixture_server();
  auto config = cp::fixture::fixture_config(server.endpoint());
  config.english_only = true;
  config.is_english = [](const cp::dom::PageSnapshot&) { return false; };
  auto run = cp::measure::measure({"askubuntu.test", "streamly.test"}, config, 1);
  CHECK(run.records.empty());
  CHECK(run.report.domains_total == 2);
  CHECK(run.report.domains_analyzed == 0);
}

TEST_CASE("external planner") {
  auto& server = testsupport::fixture_server();
  auto config = cp::fixture::fixture_config(server.endpoint());
  auto session = cp::driver::open_session(server.endpoint(), true, config.session);
  config.provider = cp::decide::PlanProvider::kExternal;

  SeqStub good([](const std::string& in) {
    return in.find("button0 - customize settings") == 0 ? "Click button0 ** Click button6." : "";
  });
  config.planner.endpoint = good.url();
  auto r = cp::measure::run_pipeline(session, "askubuntu.test", config);
  CHECK(r.record.status == RecordStatus::kPlan);
  CHECK(r.record.plan_text == "Click button0 ** Click button6.");

  // An accept-all plan is rejected by validation.
  SeqStub bad([](const std::string&) { return std::string("Click button1."); });
  config.planner.endpoint = bad.url();
  auto rejected = cp::measure::run_pipeline(session, "askubuntu.test", config);
  CHECK(rejected.record.status == RecordStatus::kError);
  CHECK(rejected.record.error_stage == "plan");

  config.planner.endpoint = "http://127.0.0.1:1/plan";
  config.planner.timeout_ms = 500;
  auto down = cp::measure::run_pipeline(session, "askubuntu.test", config);
  CHECK(down.record.status == RecordStatus::kError);
}

}  // TEST_SUITE
