#include "cookiepilot/http_endpoint.hpp"

#include "cookiepilot/error.hpp"

namespace cookiepilot {

HttpEndpoint HttpEndpoint::parse(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::kConfig, "not a URL: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  HttpEndpoint ep;
  if (path_start == std::string::npos) {
    ep.origin = url;
  } else {
    ep.origin = url.substr(0, path_start);
    ep.path = url.substr(path_start);
  }
  if (ep.origin.size() <= scheme_end + 3) throw Error(ErrorCode::kConfig, "missing host: " + url);
  return ep;
}

}  // namespace cookiepilot
