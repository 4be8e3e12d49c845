#include "cookiepilot/fixture/html_export.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace cookiepilot::fixture {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool void_tag(const std::string& tag) { return tag == "input" || tag == "img" || tag == "br"; }

void emit(std::ostringstream& out, const FixtureNode& n) {
  out << '<' << n.tag << " data-fx=\"" << escape(n.id) << '"';
  for (const auto& [k, v] : n.attrs) out << ' ' << k << "=\"" << escape(v) << '"';
  if (n.frame && !n.attrs.count("src")) out << " src=\"" << escape(n.frame->path) << '"';
  if (n.checked) {
    if (n.tag == "input") {
      if (*n.checked) out << " checked";
    } else {
      out << " aria-checked=\"" << (*n.checked ? "true" : "false") << '"';
    }
  }
  if (!n.on_click.empty()) {
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : n.on_click) actions.push_back({{"op", a.op}, {"target", a.target}, {"top", a.top_document}});
    out << " data-fx-click=\"" << escape(actions.dump()) << '"';
  }
  if (!n.gate.empty()) out << " data-fx-gate=\"" << escape(n.gate) << '"';
  if (n.appear_after_ms > 0) out << " data-fx-appear=\"" << n.appear_after_ms << '"';
  std::ostringstream style;
  style << "position:absolute;left:" << n.box[0]
        << "px;top:" << n.box[1] << "px;width:" << n.box[2] << "px;height:" << n.box[3] << "px;";
  if (n.z) style << "z-index:" << *n.z << ';';
  if (n.hidden || n.appear_after_ms > 0) style << "display:none;";
  if (n.detached) style << "display:none;";
  out << " style=\"" << style.str() << "\">";
  if (void_tag(n.tag)) return;
  out << escape(n.text);
  for (const auto& c : n.children) emit(out, c);
  out << "</" << n.tag << ">\n";
}

// Interprets data-fx-click actions the same way the fixture browser does.
constexpr const char* kRuntime = R"JS(
(function () {
  function node(id, top) {
    var doc = top && window.parent ? window.parent.document : document;
    return doc.querySelector('[data-fx="' + id + '"]');
  }
  var gated = document.cookie.split(';').map(function (c) { return c.trim().split('=')[0]; });
  document.querySelectorAll('[data-fx-gate]').forEach(function (el) {
    if (gated.indexOf(el.getAttribute('data-fx-gate')) >= 0) el.remove();
  });
  document.querySelectorAll('[data-fx-appear]').forEach(function (el) {
    setTimeout(function () { el.style.display = ''; }, parseInt(el.getAttribute('data-fx-appear'), 10));
  });
  document.addEventListener('click', function (ev) {
    for (var el = ev.target; el && el.getAttribute; el = el.parentElement) {
      var spec = el.getAttribute('data-fx-click');
      if (!spec) continue;
      JSON.parse(spec).forEach(function (a) {
        var t = a.target ? node(a.target, a.top) : el;
        if (a.op === 'toggle' && t) {
          var on = t.getAttribute('aria-checked') !== 'true';
          t.setAttribute('aria-checked', on ? 'true' : 'false');
        } else if (a.op === 'show' && t) { t.style.display = ''; }
        else if (a.op === 'hide' && t) { t.style.display = 'none'; }
        else if (a.op === 'toggle_display' && t) { t.style.display = t.style.display === 'none' ? '' : 'none'; }
        else if (a.op === 'set_cookie') { document.cookie = a.target + '=1; path=/'; }
        else if (a.op === 'navigate') { location.href = a.target; }
        else if (a.op === 'open_tab') { window.open(a.target, '_blank'); }
      });
    }
  });
})();
)JS";

const FrameContent* find_frame(const std::vector<FixtureNode>& nodes, const std::string& path) {
  for (const auto& n : nodes) {
    if (n.frame && n.frame->path == path) return n.frame.get();
    if (const auto* f = find_frame(n.children, path)) return f;
  }
  return nullptr;
}

}  // namespace

std::string render_html(const FixtureSite& site, const std::string& path) {
  const std::vector<FixtureNode>* nodes = nullptr;
  std::string title;
  if (auto it = site.pages.find(path); it != site.pages.end()) {
    nodes = &it->second.nodes;
    title = it->second.title;
  } else {
    for (const auto& [_, page] : site.pages) {
      if (const auto* f = find_frame(page.nodes, path)) nodes = &f->nodes;
    }
  }
  if (!nodes) return {};
  std::ostringstream out;
  out << "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>" << escape(title)
      << "</title></head>\n<body style=\"margin:0;position:relative\">\n";
  for (const auto& n : *nodes) emit(out, n);
  out << "<script>" << kRuntime << "</script>\n</body></html>\n";
  return out.str();
}

}  // namespace cookiepilot::fixture
