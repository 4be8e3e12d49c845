#include "cookiepilot/url.hpp"

#include <vector>

#include "cookiepilot/text.hpp"

namespace cookiepilot::url {
namespace {

std::string remove_dot_segments(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    std::string seg = path.substr(i, j - i);
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
    } else if (seg != "." && !(seg.empty() && i != 0 && j != path.size())) {
      out.push_back(seg);
    }
    i = j + 1;
  }
  std::string joined;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k > 0) joined += '/';
    joined += out[k];
  }
  if (joined.empty() || joined.front() != '/') joined.insert(joined.begin(), '/');
  return joined;
}

std::string join(const Parts& p) {
  std::string out = p.scheme + "://" + p.authority + p.path;
  if (!p.query.empty()) out += "?" + p.query;
  if (!p.fragment.empty()) out += "#" + p.fragment;
  return out;
}

}  // namespace

Parts parse(std::string_view url) {
  Parts p;
  std::string s(url);
  auto hash = s.find('#');
  if (hash != std::string::npos) {
    p.fragment = s.substr(hash + 1);
    s.resize(hash);
  }
  auto q = s.find('?');
  if (q != std::string::npos) {
    p.query = s.substr(q + 1);
    s.resize(q);
  }
  auto scheme_end = s.find("://");
  if (scheme_end != std::string::npos) {
    p.scheme = text::to_lower(s.substr(0, scheme_end));
    auto path_start = s.find('/', scheme_end + 3);
    p.authority = text::to_lower(s.substr(scheme_end + 3, path_start == std::string::npos
                                                              ? std::string::npos
                                                              : path_start - scheme_end - 3));
    p.path = path_start == std::string::npos ? "/" : s.substr(path_start);
  } else {
    p.path = s;
  }
  return p;
}

std::string origin(std::string_view u) {
  Parts p = parse(u);
  return p.scheme + "://" + p.authority;
}

std::string resolve(std::string_view base, std::string_view reference) {
  std::string ref(reference);
  if (ref.find("://") != std::string::npos) {
    Parts p = parse(ref);
    p.path = remove_dot_segments(p.path);
    return join(p);
  }
  Parts b = parse(base);
  if (ref.rfind("//", 0) == 0) return resolve(base, b.scheme + ":" + ref);
  Parts r;
  r.scheme = b.scheme;
  r.authority = b.authority;
  std::string rest = ref;
  auto hash = rest.find('#');
  if (hash != std::string::npos) {
    r.fragment = rest.substr(hash + 1);
    rest.resize(hash);
  }
  auto q = rest.find('?');
  bool has_query = q != std::string::npos;
  if (has_query) {
    r.query = rest.substr(q + 1);
    rest.resize(q);
  }
  if (rest.empty()) {
    r.path = b.path;
    if (!has_query) r.query = b.query;
  } else if (rest.front() == '/') {
    r.path = remove_dot_segments(rest);
  } else {
    auto slash = b.path.rfind('/');
    std::string dir = slash == std::string::npos ? "/" : b.path.substr(0, slash + 1);
    r.path = remove_dot_segments(dir + rest);
  }
  return join(r);
}

bool leaves_document(std::string_view page_url, std::string_view href) {
  std::string h = text::normalize_whitespace(href);
  if (h.empty() || h.front() == '#') return false;
  std::string lower = text::to_lower(h);
  if (lower.rfind("javascript:", 0) == 0) return false;
  if (lower.rfind("mailto:", 0) == 0 || lower.rfind("tel:", 0) == 0) return true;
  Parts a = parse(resolve(page_url, page_url));
  Parts b = parse(resolve(page_url, h));
  return a.scheme != b.scheme || a.authority != b.authority || a.path != b.path ||
         a.query != b.query;
}

}  // namespace cookiepilot::url
