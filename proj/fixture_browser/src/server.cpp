#include <thread>

#include <httplib.h>

#include "cookiepilot/error.hpp"
#include "cookiepilot/fixture/browser.hpp"

namespace cookiepilot::fixture {

struct WebDriverServer::Impl {
  httplib::Server server;
  std::thread thread;
  std::string host = "127.0.0.1";
  int port = 0;
};

WebDriverServer::WebDriverServer(std::vector<FixtureSite> sites, BrowserOptions options)
    : browser_(std::move(sites), options), options_(options), impl_(std::make_unique<Impl>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    if (options_.malformed_replies) {
      res.status = 502;
      res.set_content("<html><body>Bad Gateway</body></html>", "text/html");
      return;
    }
    nlohmann::json body = nlohmann::json::object();
    if (!req.body.empty()) {
      body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        res.status = 400;
        res.set_content(R"({"value":{"error":"invalid argument","message":"body is not JSON"}})",
                        "application/json");
        return;
      }
    }
    WireResult r = browser_.dispatch(req.method, req.path, body);
    res.status = r.status;
    res.set_content(nlohmann::json{{"value", r.value}}.dump(), "application/json; charset=utf-8");
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Delete(".*", handler);
}

WebDriverServer::~WebDriverServer() { stop(); }

int WebDriverServer::start(const std::string& host, int port) {
  impl_->host = host;
  impl_->port = port == 0 ? impl_->server.bind_to_any_port(host) : port;
  if (port != 0 && !impl_->server.bind_to_port(host, port)) impl_->port = -1;
  if (impl_->port <= 0) throw Error(ErrorCode::kConfig, "cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void WebDriverServer::run(const std::string& host, int port) {
  impl_->host = host;
  impl_->port = port;
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::kConfig, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void WebDriverServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string WebDriverServer::endpoint() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

}  // namespace cookiepilot::fixture
