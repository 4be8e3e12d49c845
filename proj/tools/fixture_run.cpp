// Runs the pipeline on every fixture site and prints the differences
// from each site's expected outcome.
#include <iostream>

#include <CLI11.hpp>

#include "cookiepilot/driver/session.hpp"
#include "cookiepilot/fixture/browser.hpp"
#include "cookiepilot/fixture/harness.hpp"

namespace cp = cookiepilot;

int main(int argc, char** argv) {
  CLI::App app{"run the pipeline against the fixture corpus"};
  std::string dir = std::string(COOKIEPILOT_FIXTURES_DIR) + "/sites";
  std::vector<std::string> only;
  bool verbose = false;
  std::string audit_path;
  app.add_option("--dir", dir);
  app.add_option("--only", only, "domains to run");
  app.add_flag("-v,--verbose", verbose, "print serialized notices and plans");
  app.add_option("--audit", audit_path, "JSON-lines probe log");
  CLI11_PARSE(app, argc, argv);

  auto sites = cp::fixture::load_sites(dir);
  cp::fixture::WebDriverServer server(sites);
  server.start();
  auto config = cp::fixture::fixture_config(server.endpoint());
  std::optional<cp::AuditLog> audit;
  if (!audit_path.empty()) config.audit = &audit.emplace(audit_path);
  auto session = cp::driver::open_session(config.driver_endpoint, true, config.session);

  int ok = 0, total = 0;
  for (const auto& site : sites) {
    if (!only.empty() && std::find(only.begin(), only.end(), site.domain) == only.end()) continue;
    ++total;
    auto run = cp::fixture::run_site(session, site, config);
    bool pass = run.ok();
    ok += pass;
    std::cout << (pass ? "ok   " : "FAIL ") << site.domain << "  " << run.status;
    if (!site.expected.expect_failure.empty()) std::cout << "  [known: " << site.expected.expect_failure << "]";
    std::cout << "\n";
    for (const auto& m : run.mismatches) std::cout << "       " << m << "\n";
    if (verbose) {
      std::cout << run.result.record.serialized_notice << "\n" << run.result.record.plan_text << "\n";
      if (!run.result.error.empty()) std::cout << "error: " << run.result.error << "\n";
    }
  }
  std::cout << ok << "/" << total << " sites match\n";
  session.close();
  server.stop();
  return ok == total ? 0 : 1;
}
