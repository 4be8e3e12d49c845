#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "cookiepilot/error.hpp"
#include "cookiepilot/fixture/browser.hpp"
#include "cookiepilot/fixture/html_export.hpp"
#include "cookiepilot/measure/measure.hpp"
#include "cookiepilot/store/enforcement_db.hpp"

namespace cp = cookiepilot;

namespace {

constexpr int kExitPartial = 2;
constexpr int kExitConfig = 3;

struct Options {
  std::string driver = "http://127.0.0.1:4444";
  std::string classifier_endpoint;
  double threshold = 0.5;
  std::string planner = "rules";
  std::string planner_endpoint;
  std::string url_template = "https://{domain}/";
  std::string audit_path;
  std::string region = "default";
  std::string db_path;
  int settle_ms = 2000;
  int click_gap_ms = 500;
  int click_budget = 120;
  bool headed = false;
};

cp::measure::PipelineConfig make_config(const Options& o, cp::AuditLog* audit) {
  cp::measure::PipelineConfig c;
  c.driver_endpoint = o.driver;
  c.headless = !o.headed;
  c.session.settle_delay_ms = o.settle_ms;
  c.session.probe_click_gap_ms = o.click_gap_ms;
  if (!o.classifier_endpoint.empty()) c.classifier = cp::detect::ClassifierHandle::external(o.classifier_endpoint);
  c.classifier.threshold = o.threshold;
  c.classifier.validate();
  if (o.planner == "external") {
    if (o.planner_endpoint.empty()) throw cp::Error(cp::ErrorCode::kConfig, "--planner external needs --planner-endpoint");
    c.provider = cp::decide::PlanProvider::kExternal;
    c.planner.endpoint = o.planner_endpoint;
  } else if (o.planner != "rules") {
    throw cp::Error(cp::ErrorCode::kConfig, "unknown planner " + o.planner);
  }
  c.url_template = o.url_template;
  c.region = o.region;
  c.click_budget = o.click_budget;
  c.audit = audit;
  return c;
}

std::atomic<bool> g_stop{false};
std::function<void()> g_on_signal;

void on_signal(int) {
  g_stop = true;
  if (g_on_signal) g_on_signal();
}

std::string fixtures_dir(const std::string& given) {
  if (!given.empty()) return given;
  return std::string(COOKIEPILOT_FIXTURES_DIR) + "/sites";
}

int serve_static(const std::string& dir, const std::string& host, int port) {
  auto sites = cp::fixture::load_sites(dir);
  httplib::Server server;
  server.Get(".*", [&](const httplib::Request& req, httplib::Response& res) {
    std::string host_header = req.get_header_value("Host");
    if (auto colon = host_header.find(':'); colon != std::string::npos) host_header.erase(colon);
    std::string path = req.path;
    const cp::fixture::FixtureSite* site = nullptr;
    for (const auto& s : sites) {
      if (s.domain == host_header) site = &s;
    }
    if (!site) {
      // http://host:port/<domain>/<path> when the Host header is not a fixture domain.
      auto slash = path.find('/', 1);
      std::string first = path.substr(1, slash == std::string::npos ? std::string::npos : slash - 1);
      for (const auto& s : sites) {
        if (s.domain == first) site = &s;
      }
      if (site) path = slash == std::string::npos ? "/" : path.substr(slash);
    }
    if (!site) {
      std::string index = "<!doctype html><ul>";
      for (const auto& s : sites) index += "<li><a href=\"/" + s.domain + "/\">" + s.domain + "</a></li>";
      res.set_content(index + "</ul>", "text/html");
      return;
    }
    std::string html = cp::fixture::render_html(*site, path);
    if (html.empty()) {
      res.status = 404;
      res.set_content("<!doctype html><h1>Not found</h1>", "text/html");
      return;
    }
    res.set_content(html, "text/html; charset=utf-8");
  });
  g_on_signal = [&] { server.stop(); };
  std::cerr << "serving " << sites.size() << " fixture sites on http://" << host << ':' << port << "\n";
  if (!server.listen(host, port)) throw cp::Error(cp::ErrorCode::kConfig, "cannot listen on port " + std::to_string(port));
  return 0;
}

int serve_webdriver(const std::string& dir, const std::string& host, int port) {
  cp::fixture::WebDriverServer server(cp::fixture::load_sites(dir));
  g_on_signal = [&] { server.stop(); };
  std::cerr << "fixture webdriver on http://" << host << ':' << port << "\n";
  server.run(host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cookiepilot: detect cookie notices and compute opt-out click plans"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--driver", o.driver, "WebDriver endpoint");
  app.add_option("--classifier-endpoint", o.classifier_endpoint, "external notice classifier URL");
  app.add_option("--threshold", o.threshold, "notice score threshold");
  app.add_option("--planner", o.planner, "rules or external")->check(CLI::IsMember({"rules", "external"}));
  app.add_option("--planner-endpoint", o.planner_endpoint, "seq2seq planner URL");
  app.add_option("--url-template", o.url_template, "URL for a domain, {domain} is substituted");
  app.add_option("--audit", o.audit_path, "append JSON lines describing every probe");
  app.add_option("--settle-ms", o.settle_ms, "wait after page load");
  app.add_option("--click-gap-ms", o.click_gap_ms, "wait between probe clicks");
  app.add_option("--click-budget", o.click_budget, "clicks per domain");
  app.add_flag("--headed", o.headed, "show the browser window");

  std::string domain;
  auto* analyze = app.add_subcommand("analyze", "run the pipeline on one domain");
  analyze->add_option("domain", domain)->required();
  analyze->add_option("--region", o.region);
  analyze->add_option("--out", o.db_path, "enforcement database to store the record in");

  std::string domains_file, report_path;
  int workers = 4;
  bool english_only = false;
  auto* measure = app.add_subcommand("measure", "run the pipeline on a domain list and report M1-M3");
  measure->add_option("--domains", domains_file)->required()->check(CLI::ExistingFile);
  measure->add_option("--report", report_path)->required();
  measure->add_option("--workers", workers)->check(CLI::PositiveNumber);
  measure->add_option("--region", o.region);
  measure->add_option("--out", o.db_path, "enforcement database to store records in");
  measure->add_flag("--english-only", english_only);

  std::string bundle_path;
  auto* exporter = app.add_subcommand("export", "write the hash-verified bundle for one region");
  exporter->add_option("--region", o.region)->required();
  exporter->add_option("--bundle", bundle_path)->required();
  exporter->add_option("--db", o.db_path)->required();

  std::string fixture_dir, listen_host = "127.0.0.1";
  int port = 8080;
  auto* fixtures = app.add_subcommand("fixtures", "serve the fixture corpus");
  fixtures->require_subcommand(1);
  auto* serve = fixtures->add_subcommand("serve", "static HTML server");
  auto* webdriver = fixtures->add_subcommand("webdriver", "scripted WebDriver endpoint");
  for (auto* sub : {serve, webdriver}) {
    sub->add_option("--port", port);
    sub->add_option("--host", listen_host);
    sub->add_option("--dir", fixture_dir, "directory of site JSON files");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    std::optional<cp::AuditLog> audit;
    if (!o.audit_path.empty()) audit.emplace(o.audit_path);
    cp::AuditLog* audit_ptr = audit ? &*audit : nullptr;

    if (*analyze) {
      auto config = make_config(o, audit_ptr);
      cp::store::EnforcementRecord rec = cp::measure::run_pipeline(domain, config);
      std::cout << cp::store::record_to_json(rec).dump(2) << "\n";
      if (!o.db_path.empty()) {
        cp::store::EnforcementDb db(o.db_path);
        db.put(rec);
      }
      return rec.status == cp::store::RecordStatus::kError ? kExitPartial : 0;
    }
    if (*measure) {
      auto config = make_config(o, audit_ptr);
      config.english_only = english_only;
      auto domains = cp::measure::read_domain_list(domains_file);
      cp::measure::MeasureRun run = cp::measure::measure(domains, config, workers);
      std::ofstream out(report_path, std::ios::binary);
      if (!out) throw cp::Error(cp::ErrorCode::kConfig, "cannot write " + report_path);
      out << cp::measure::report_json(run.report);
      if (!o.db_path.empty()) {
        cp::store::EnforcementDb db(o.db_path);
        for (const auto& r : run.records) {
          if (r.status != cp::store::RecordStatus::kError) db.put(r);
        }
      }
      std::cerr << run.report.domains_analyzed << "/" << run.report.domains_total << " analyzed, "
                << run.failures << " failed\n";
      return run.failures > 0 ? kExitPartial : 0;
    }
    if (*exporter) {
      if (!std::filesystem::exists(o.db_path)) throw cp::Error(cp::ErrorCode::kConfig, "no database at " + o.db_path);
      cp::store::EnforcementDb db(o.db_path);
      db.export_bundle(o.region, bundle_path);
      return 0;
    }
    if (*serve) return serve_static(fixtures_dir(fixture_dir), listen_host, port);
    if (*webdriver) return serve_webdriver(fixtures_dir(fixture_dir), listen_host, port);
  } catch (const cp::Error& e) {
    std::cerr << e.what() << "\n";
    if (e.code() == cp::ErrorCode::kConfig || e.code() == cp::ErrorCode::kEmptyRegion) return kExitConfig;
    return kExitPartial;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitPartial;
  }
  return 0;
}
