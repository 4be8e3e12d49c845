#pragma once

#include <string>

namespace cookiepilot {

// Splits "http://host:port/path" into the scheme+authority part that
// httplib::Client takes and the request path.
struct HttpEndpoint {
  std::string origin;
  std::string path = "/";

  static HttpEndpoint parse(const std::string& url);
};

}  // namespace cookiepilot
