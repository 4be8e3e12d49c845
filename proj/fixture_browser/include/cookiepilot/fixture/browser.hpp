#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cookiepilot/fixture/site.hpp"

namespace cookiepilot::fixture {

struct BrowserOptions {
  bool reject_sessions = false;
  // Every reply body is replaced by non-JSON text.
  bool malformed_replies = false;
};

struct WireResult {
  int status = 200;
  nlohmann::json value;
};

// Scripted browser behind the W3C WebDriver wire protocol. Scripts are
// recognized by their marker comment rather than evaluated.
class FixtureBrowser {
 public:
  explicit FixtureBrowser(std::vector<FixtureSite> sites, BrowserOptions options = {});
  ~FixtureBrowser();
  FixtureBrowser(const FixtureBrowser&) = delete;
  FixtureBrowser& operator=(const FixtureBrowser&) = delete;

  // Handles one command; `path` as in the HTTP request line.
  WireResult dispatch(const std::string& method, const std::string& path, const nlohmann::json& body);

  std::size_t open_sessions() const;
  std::size_t clicks() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// FixtureBrowser on a loopback HTTP port, served from a background thread.
class WebDriverServer {
 public:
  explicit WebDriverServer(std::vector<FixtureSite> sites, BrowserOptions options = {});
  ~WebDriverServer();

  // Binds (port 0 picks a free one) and returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  // Blocks until stop() is called from another thread.
  void run(const std::string& host, int port);
  void stop();

  std::string endpoint() const;
  FixtureBrowser& browser() { return browser_; }

 private:
  struct Impl;
  FixtureBrowser browser_;
  BrowserOptions options_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cookiepilot::fixture
