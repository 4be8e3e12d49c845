#pragma once

#include <string>
#include <string_view>

namespace cookiepilot::url {

struct Parts {
  std::string scheme;     // lowercase, no "://"
  std::string authority;  // host[:port], lowercase
  std::string path;       // starts with '/'
  std::string query;      // without '?'
  std::string fragment;   // without '#'
};

Parts parse(std::string_view url);
std::string origin(std::string_view url);

// RFC 3986 reference resolution (no dot-segment removal beyond ./ and ../).
std::string resolve(std::string_view base, std::string_view reference);

// True when `href` leads to another document than `page_url`
// (different origin, path or query; fragments ignored). Non-navigating
// references such as "#", "javascript:" and empty hrefs return false.
bool leaves_document(std::string_view page_url, std::string_view href);

}  // namespace cookiepilot::url
