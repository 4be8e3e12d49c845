#include "cookiepilot/fixture/browser.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cookiepilot/dom/selector.hpp"
#include "cookiepilot/driver/scripts.hpp"
#include "cookiepilot/driver/session.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/url.hpp"

namespace cookiepilot::fixture {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Document;

struct LiveNode {
  const FixtureNode* def = nullptr;
  std::string id;
  std::string tag;
  std::map<std::string, std::string> attrs;
  int parent = -1;
  std::vector<int> children;
  bool displayed = true;
  bool attached = true;
  std::optional<bool> checked;
  std::shared_ptr<Document> frame;
};

struct Document {
  std::string url = "about:blank";
  std::string host;
  std::string title;
  std::vector<LiveNode> nodes;  // pre-order
  std::unordered_map<std::string, int> by_id;
  Clock::time_point loaded_at = Clock::now();
  std::uint64_t generation = 0;
  double viewport_w = 1280;
  double viewport_h = 800;
  int active = -1;

  int find(const std::string& id) const {
    auto it = by_id.find(id);
    return it == by_id.end() ? -1 : it->second;
  }
};

struct Window {
  std::string handle;
  std::shared_ptr<Document> doc;
};

struct ElementRef {
  std::string handle;
  std::vector<std::string> frame_path;
  std::string node;
  std::uint64_t generation = 0;
};

struct SessionState {
  std::set<std::string> cookies;  // host + '\t' + name
  std::vector<Window> windows;
  std::string current;
  std::vector<std::string> frame_path;
  std::map<std::string, ElementRef> refs;
  std::map<std::string, std::string> ref_by_key;
};

struct Failure {
  int status;
  std::string error;
  std::string message;
};

[[noreturn]] void fail(int status, std::string error, std::string message = {}) {
  throw Failure{status, std::move(error), std::move(message)};
}

std::string bare_host(const std::string& url_text) {
  std::string host = url::parse(url_text).authority;
  if (auto colon = host.find(':'); colon != std::string::npos) host.erase(colon);
  if (host.rfind("www.", 0) == 0) host.erase(0, 4);
  return host;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

struct FixtureBrowser::State {
  std::vector<FixtureSite> sites;
  BrowserOptions options;
  mutable std::mutex mu;
  std::map<std::string, SessionState> sessions;
  std::uint64_t next_generation = 1;
  std::uint64_t next_id = 1;
  std::size_t clicks = 0;
  std::mt19937_64 rng{0x5eed};

  const FixtureSite* site_for(const std::string& host) const {
    for (const auto& s : sites) {
      if (lower(s.domain) == host) return &s;
    }
    return nullptr;
  }

  std::string fresh_id(const char* prefix) {
    std::ostringstream os;
    os << prefix << std::hex << rng() << '-' << std::dec << next_id++;
    return os.str();
  }

  // ---- document construction ----

  void add_nodes(Document& doc, const std::vector<FixtureNode>& defs, int parent, const SessionState& s) {
    for (const auto& d : defs) {
      if (!d.gate.empty() && s.cookies.count(doc.host + '\t' + d.gate)) continue;
      int idx = static_cast<int>(doc.nodes.size());
      LiveNode n;
      n.def = &d;
      n.id = d.id;
      n.tag = lower(d.tag);
      n.attrs = d.attrs;
      n.parent = parent;
      n.displayed = !d.hidden;
      n.attached = !d.detached;
      n.checked = d.checked;
      doc.nodes.push_back(std::move(n));
      doc.by_id.emplace(d.id, idx);
      if (parent >= 0) doc.nodes[parent].children.push_back(idx);
      if (d.frame) {
        if (!doc.nodes[idx].attrs.count("src")) doc.nodes[idx].attrs["src"] = d.frame->path;
        auto inner = std::make_shared<Document>();
        inner->url = url::resolve(doc.url, doc.nodes[idx].attrs["src"]);
        inner->host = bare_host(inner->url);
        inner->generation = next_generation++;
        inner->viewport_w = d.box[2];
        inner->viewport_h = d.box[3];
        add_nodes(*inner, d.frame->nodes, -1, s);
        doc.nodes[idx].frame = std::move(inner);
      }
      add_nodes(doc, d.children, idx, s);
    }
  }

  std::shared_ptr<Document> build(const std::string& target_url, const SessionState& s) {
    auto doc = std::make_shared<Document>();
    doc->url = target_url;
    doc->generation = next_generation++;
    if (target_url == "about:blank") return doc;
    doc->host = bare_host(target_url);
    std::string path = url::parse(target_url).path;
    if (path.empty()) path = "/";
    const FixtureSite* site = site_for(doc->host);
    const FixturePage* page = nullptr;
    if (site) {
      auto it = site->pages.find(path);
      if (it != site->pages.end()) page = &it->second;
    }
    if (page) {
      doc->title = page->title;
      add_nodes(*doc, page->nodes, -1, s);
    } else {
      doc->title = doc->host + path;
      static const std::vector<FixtureNode> placeholder = [] {
        FixtureNode main;
        main.id = "main";
        main.tag = "main";
        main.box[2] = 1280;
        main.box[3] = 800;
        FixtureNode h1;
        h1.id = "heading";
        h1.tag = "h1";
        h1.text = "Page";
        h1.box[2] = 1280;
        h1.box[3] = 60;
        main.children.push_back(h1);
        return std::vector<FixtureNode>{main};
      }();
      add_nodes(*doc, placeholder, -1, s);
    }
    return doc;
  }

  // ---- visibility ----

  static bool appeared(const Document& doc, int i, Clock::time_point now) {
    return now - doc.loaded_at >= std::chrono::milliseconds(doc.nodes[i].def->appear_after_ms);
  }
  static bool present(const Document& doc, int i, Clock::time_point now) {
    for (int j = i; j >= 0; j = doc.nodes[j].parent) {
      if (!doc.nodes[j].attached || !appeared(doc, j, now)) return false;
    }
    return true;
  }
  static bool displayed(const Document& doc, int i) {
    for (int j = i; j >= 0; j = doc.nodes[j].parent) {
      if (!doc.nodes[j].displayed) return false;
    }
    return true;
  }
  static bool visible(const Document& doc, int i, Clock::time_point now) {
    const auto& b = doc.nodes[i].def->box;
    return present(doc, i, now) && displayed(doc, i) && b[2] > 0 && b[3] > 0;
  }
  static bool is_ancestor(const Document& doc, int ancestor, int i) {
    for (int j = doc.nodes[i].parent; j >= 0; j = doc.nodes[j].parent) {
      if (j == ancestor) return true;
    }
    return false;
  }

  static std::map<std::string, std::string> live_attrs(const LiveNode& n) {
    auto a = n.attrs;
    if (n.checked && n.tag != "input") a["aria-checked"] = *n.checked ? "true" : "false";
    return a;
  }

  static json snapshot_json(const Document& doc) {
    const auto now = Clock::now();
    json elements = json::array();
    int order = 0;
    for (int i = 0; i < static_cast<int>(doc.nodes.size()); ++i) {
      if (!present(doc, i, now)) continue;
      const LiveNode& n = doc.nodes[i];
      bool shown = displayed(doc, i);
      const auto& b = n.def->box;
      json e;
      e["node_id"] = n.id;
      e["parent_id"] = n.parent >= 0 ? doc.nodes[n.parent].id : "";
      e["tag_name"] = n.tag;
      e["attributes"] = live_attrs(n);
      e["z_index"] = n.def->z ? json(*n.def->z) : json("auto");
      e["bbox"] = {{"x", b[0]}, {"y", b[1]}, {"width", shown ? b[2] : 0.0}, {"height", shown ? b[3] : 0.0}};
      e["displayed"] = shown;
      e["own_text"] = n.def->text;
      e["doc_order"] = order++;
      elements.push_back(std::move(e));
    }
    return {{"url", doc.url},
            {"title", doc.title},
            {"ready", true},
            {"viewport", {{"width", doc.viewport_w}, {"height", doc.viewport_h}}},
            {"elements", std::move(elements)}};
  }

  // ---- session plumbing ----

  SessionState& session(const std::string& id) {
    auto it = sessions.find(id);
    if (it == sessions.end()) fail(404, "invalid session id", id);
    return it->second;
  }

  static Window& window(SessionState& s) {
    for (auto& w : s.windows) {
      if (w.handle == s.current) return w;
    }
    fail(404, "no such window", "current window was closed");
  }

  static Document* descend(Document* doc, const std::vector<std::string>& frame_path) {
    for (const auto& f : frame_path) {
      int idx = doc->find(f);
      if (idx < 0 || !doc->nodes[idx].frame) return nullptr;
      doc = doc->nodes[idx].frame.get();
    }
    return doc;
  }

  static Document& context(SessionState& s) {
    Document* doc = descend(window(s).doc.get(), s.frame_path);
    if (!doc) fail(404, "no such frame", "frame went away");
    return *doc;
  }

  std::string make_ref(SessionState& s, const Document& doc, int idx) {
    std::string key = s.current + '|' + std::to_string(doc.generation) + '|' + doc.nodes[idx].id;
    auto it = s.ref_by_key.find(key);
    if (it != s.ref_by_key.end()) return it->second;
    std::string eid = fresh_id("el-");
    s.refs[eid] = ElementRef{s.current, s.frame_path, doc.nodes[idx].id, doc.generation};
    s.ref_by_key[key] = eid;
    return eid;
  }

  static std::pair<Document*, int> resolve(SessionState& s, const std::string& eid) {
    auto it = s.refs.find(eid);
    if (it == s.refs.end()) fail(404, "no such element", eid);
    const ElementRef& r = it->second;
    for (auto& w : s.windows) {
      if (w.handle != r.handle) continue;
      Document* doc = descend(w.doc.get(), r.frame_path);
      if (!doc || doc->generation != r.generation) break;
      int idx = doc->find(r.node);
      if (idx < 0 || !present(*doc, idx, Clock::now())) break;
      return {doc, idx};
    }
    fail(404, "stale element reference", eid);
  }

  static std::string ref_arg(const json& body, std::size_t pos = 0) {
    const json& args = body.contains("args") ? body["args"] : json::array();
    if (!args.is_array() || args.size() <= pos || !args[pos].is_object() ||
        !args[pos].contains(driver::kElementKey)) {
      fail(400, "invalid argument", "element reference expected");
    }
    return args[pos][driver::kElementKey].get<std::string>();
  }

  // ---- navigation ----

  void load(SessionState& s, Window& w, const std::string& target) {
    w.doc = build(target, s);
    if (w.handle == s.current) s.frame_path.clear();
  }

  void navigate(SessionState& s, const std::string& target) {
    std::string host = bare_host(target);
    const FixtureSite* site = site_for(host);
    if (!site) fail(500, "unknown error", "net::ERR_NAME_NOT_RESOLVED " + target);
    if (site->failure == "crash") fail(500, "unknown error", "tab crashed");
    if (site->failure == "timeout") fail(500, "timeout", "page load timed out");
    load(s, window(s), target);
  }

  // ---- clicks ----

  struct ClickEffects {
    std::optional<std::string> navigate_to;
  };

  static int outer_z(const Document& doc, int i) {
    int z = 0;
    for (int j = i; j >= 0; j = doc.nodes[j].parent) {
      if (doc.nodes[j].def->z) z = *doc.nodes[j].def->z;
    }
    return z;
  }

  static int hit_test(const Document& doc, double px, double py) {
    const auto now = Clock::now();
    int best = -1;
    int best_z = 0;
    for (int i = 0; i < static_cast<int>(doc.nodes.size()); ++i) {
      if (!visible(doc, i, now)) continue;
      const auto& b = doc.nodes[i].def->box;
      if (px < b[0] || py < b[1] || px >= b[0] + b[2] || py >= b[1] + b[3]) continue;
      int z = outer_z(doc, i);
      if (best < 0 || z >= best_z) {
        best = i;
        best_z = z;
      }
    }
    return best;
  }

  Document* action_doc(SessionState& s, Document& here, const Action& a) {
    return a.top_document ? window(s).doc.get() : &here;
  }

  void run_actions(SessionState& s, Document& doc, int idx, ClickEffects& fx) {
    for (const Action& a : doc.nodes[idx].def->on_click) {
      Document* d = action_doc(s, doc, a);
      auto node = [&]() -> LiveNode* {
        int t = a.target.empty() ? (d == &doc ? idx : -1) : d->find(a.target);
        return t < 0 ? nullptr : &d->nodes[t];
      };
      if (a.op == "toggle") {
        if (LiveNode* n = node()) n->checked = !n->checked.value_or(false);
      } else if (a.op == "show") {
        if (LiveNode* n = node()) n->displayed = true;
      } else if (a.op == "hide") {
        if (LiveNode* n = node()) n->displayed = false;
      } else if (a.op == "toggle_display") {
        if (LiveNode* n = node()) n->displayed = !n->displayed;
      } else if (a.op == "attach") {
        if (LiveNode* n = node()) n->attached = true;
      } else if (a.op == "detach") {
        if (LiveNode* n = node()) n->attached = false;
      } else if (a.op == "set_cookie") {
        s.cookies.insert(window(s).doc->host + '\t' + a.target);
      } else if (a.op == "navigate") {
        fx.navigate_to = url::resolve(doc.url, a.target);
      } else if (a.op == "open_tab") {
        open_tab(s, url::resolve(doc.url, a.target));
      }
    }
  }

  void open_tab(SessionState& s, const std::string& target) {
    Window w{fresh_id("win-"), nullptr};
    w.doc = build(target, s);
    s.windows.push_back(std::move(w));
  }

  void set_checked(Document& doc, int idx, bool value) {
    LiveNode& n = doc.nodes[idx];
    n.checked = value;
    if (!value || lower(n.attrs.count("type") ? n.attrs.at("type") : "") != "radio") return;
    auto name = n.attrs.find("name");
    if (name == n.attrs.end()) return;
    for (auto& other : doc.nodes) {
      if (&other == &n || other.tag != "input") continue;
      auto on = other.attrs.find("name");
      if (on != other.attrs.end() && on->second == name->second) other.checked = false;
    }
  }

  int label_control(const Document& doc, int label) {
    auto f = doc.nodes[label].attrs.find("for");
    if (f != doc.nodes[label].attrs.end()) {
      for (int i = 0; i < static_cast<int>(doc.nodes.size()); ++i) {
        auto id = doc.nodes[i].attrs.find("id");
        if (id != doc.nodes[i].attrs.end() && id->second == f->second) {
          return doc.nodes[i].tag == "input" ? i : -1;
        }
      }
      return -1;
    }
    for (int i = label + 1; i < static_cast<int>(doc.nodes.size()) && is_ancestor(doc, label, i); ++i) {
      if (doc.nodes[i].tag == "input") return i;
    }
    return -1;
  }

  static std::string input_type(const LiveNode& n) {
    auto t = n.attrs.find("type");
    return t == n.attrs.end() ? "text" : lower(t->second);
  }

  // Default action plus handlers of `idx` and its ancestors.
  void activate(SessionState& s, Document& doc, int idx, ClickEffects& fx, int depth = 0) {
    if (doc.nodes[idx].attrs.count("disabled")) return;
    for (int j = idx; j >= 0; j = doc.nodes[j].parent) {
      const LiveNode& n = doc.nodes[j];
      if (n.tag == "input") {
        std::string type = input_type(n);
        if (type == "checkbox") set_checked(doc, j, !n.checked.value_or(false));
        if (type == "radio") set_checked(doc, j, true);
        break;
      }
      if (n.tag == "label") {
        int control = label_control(doc, j);
        if (control >= 0 && control != idx && depth == 0) activate(s, doc, control, fx, depth + 1);
        break;
      }
      if (n.tag == "a" && n.attrs.count("href")) {
        const std::string& href = n.attrs.at("href");
        auto target = n.attrs.find("target");
        if (target != n.attrs.end() && target->second == "_blank") {
          open_tab(s, url::resolve(doc.url, href));
        } else if (url::leaves_document(doc.url, href)) {
          fx.navigate_to = url::resolve(doc.url, href);
        }
        break;
      }
    }
    for (int j = idx; j >= 0; j = doc.nodes[j].parent) run_actions(s, doc, j, fx);
  }

  json click(SessionState& s, const std::string& eid) {
    auto [doc, idx] = resolve(s, eid);
    ++clicks;
    const auto now = Clock::now();
    if (!visible(*doc, idx, now)) fail(400, "element not interactable", doc->nodes[idx].id);
    const auto& b = doc->nodes[idx].def->box;
    int top = hit_test(*doc, b[0] + b[2] / 2, b[1] + b[3] / 2);
    if (top != idx && !is_ancestor(*doc, idx, top)) {
      fail(400, "element click intercepted", "other element would receive the click: " + doc->nodes[top].id);
    }
    ClickEffects fx;
    activate(s, *doc, idx, fx);
    if (fx.navigate_to) {
      load(s, window(s), *fx.navigate_to);
    }
    return nullptr;
  }

  // ---- keyboard ----

  static bool focusable(const Document& doc, int i, Clock::time_point now) {
    const LiveNode& n = doc.nodes[i];
    if (!visible(doc, i, now) || n.attrs.count("disabled")) return false;
    auto ti = n.attrs.find("tabindex");
    if (ti != n.attrs.end()) return std::atoi(ti->second.c_str()) >= 0;
    if (n.tag == "button" || n.tag == "select" || n.tag == "textarea") return true;
    if (n.tag == "a") return n.attrs.count("href") > 0;
    if (n.tag == "input") return input_type(n) != "hidden";
    return false;
  }

  static void press_tab(Document& doc) {
    const auto now = Clock::now();
    for (int i = doc.active + 1; i < static_cast<int>(doc.nodes.size()); ++i) {
      if (focusable(doc, i, now)) {
        doc.active = i;
        return;
      }
    }
    doc.active = -1;
  }

  // ---- scripts ----

  json execute(SessionState& s, const json& body) {
    const std::string script = body.value("script", "");
    auto has = [&](std::string_view marker) { return script.find(marker) != std::string::npos; };
    namespace sc = driver::scripts;
    if (has(sc::kReadyMarker)) return "complete";
    if (has(sc::kClearStorageMarker)) return true;
    if (has(sc::kSnapshotMarker)) return snapshot_json(context(s));
    if (has(sc::kFocusMarker)) {
      auto [doc, idx] = resolve(s, ref_arg(body));
      doc->active = idx;
      return true;
    }
    if (has(sc::kActiveMarker)) {
      auto [doc, container] = resolve(s, ref_arg(body));
      if (doc->active < 0 || !present(*doc, doc->active, Clock::now())) {
        return {{"node_id", nullptr}, {"inside", false}};
      }
      return {{"node_id", doc->nodes[doc->active].id}, {"inside", is_ancestor(*doc, container, doc->active)}};
    }
    if (has(sc::kStateMarker)) {
      auto [doc, idx] = resolve(s, ref_arg(body));
      const LiveNode& n = doc->nodes[idx];
      bool shown = displayed(*doc, idx);
      auto attrs = live_attrs(n);
      json out;
      out["displayed"] = shown;
      out["width"] = shown ? n.def->box[2] : 0.0;
      out["height"] = shown ? n.def->box[3] : 0.0;
      std::string type = input_type(n);
      out["native_checkable"] = n.tag == "input" && (type == "checkbox" || type == "radio");
      out["role"] = attrs.count("role") ? json(attrs["role"]) : json(nullptr);
      out["aria_checked"] = attrs.count("aria-checked") ? json(attrs["aria-checked"]) : json(nullptr);
      out["label_control_checked"] = nullptr;
      if (n.tag == "label") {
        int control = label_control(*doc, idx);
        if (control >= 0) {
          std::string ct = input_type(doc->nodes[control]);
          if (ct == "checkbox" || ct == "radio") {
            out["label_control_checked"] = doc->nodes[control].checked.value_or(false);
          }
        }
      }
      return out;
    }
    fail(500, "javascript error", "script not supported by the fixture browser");
  }

  // ---- routing ----

  WireResult route(const std::string& method, const std::vector<std::string>& parts, const json& body) {
    if (parts.size() == 1 && parts[0] == "status" && method == "GET") {
      return {200, {{"ready", true}, {"message", "fixture browser"}}};
    }
    if (parts.empty() || parts[0] != "session") fail(404, "unknown command", "no such route");
    if (parts.size() == 1 && method == "POST") {
      if (options.reject_sessions) fail(500, "session not created", "browser refused to start");
      std::string id = fresh_id("");
      SessionState st;
      st.current = fresh_id("win-");
      st.windows.push_back(Window{st.current, build("about:blank", st)});
      sessions.emplace(id, std::move(st));
      return {200, {{"sessionId", id}, {"capabilities", {{"browserName", "fixture"}}}}};
    }
    if (parts.size() < 2) fail(404, "unknown command", "no such route");
    const std::string& sid = parts[1];
    if (parts.size() == 2 && method == "DELETE") {
      session(sid);
      sessions.erase(sid);
      return {200, nullptr};
    }
    SessionState& s = session(sid);
    const std::string cmd = parts.size() > 2 ? parts[2] : "";

    if (cmd == "url" && parts.size() == 3) {
      if (method == "POST") {
        navigate(s, body.value("url", ""));
        return {200, nullptr};
      }
      return {200, window(s).doc->url};
    }
    if (cmd == "execute" && parts.size() == 4 && parts[3] == "sync") return {200, execute(s, body)};
    if (cmd == "element" && parts.size() == 3 && method == "POST") {
      Document& doc = context(s);
      dom::PageSnapshot page = snapshot_json(doc).get<dom::PageSnapshot>();
      dom::PageIndex index(page);
      std::vector<std::size_t> hits;
      try {
        hits = dom::query_all(index, body.value("value", ""));
      } catch (const Error& e) {
        fail(400, "invalid selector", e.what());
      }
      if (hits.empty()) fail(404, "no such element", body.value("value", ""));
      int idx = doc.find(page.elements[hits.front()].node_id);
      return {200, {{driver::kElementKey, make_ref(s, doc, idx)}}};
    }
    if (cmd == "element" && parts.size() == 5 && parts[4] == "click" && method == "POST") {
      return {200, click(s, parts[3])};
    }
    if (cmd == "element" && parts.size() == 5 && parts[4] == "selected" && method == "GET") {
      auto [doc, idx] = resolve(s, parts[3]);
      return {200, doc->nodes[idx].checked.value_or(false)};
    }
    if (cmd == "actions" && method == "POST") {
      for (const auto& source : body.value("actions", json::array())) {
        if (source.value("type", "") != "key") continue;
        for (const auto& a : source.value("actions", json::array())) {
          if (a.value("type", "") == "keyDown" && a.value("value", "") == "\xEE\x80\x84") press_tab(context(s));
        }
      }
      return {200, nullptr};
    }
    if (cmd == "cookie" && method == "DELETE") {
      s.cookies.clear();
      return {200, nullptr};
    }
    if (cmd == "window") {
      if (parts.size() == 4 && parts[3] == "handles") {
        json handles = json::array();
        for (const auto& w : s.windows) handles.push_back(w.handle);
        return {200, handles};
      }
      if (method == "POST") {
        std::string h = body.value("handle", "");
        bool known = std::any_of(s.windows.begin(), s.windows.end(), [&](const Window& w) { return w.handle == h; });
        if (!known) fail(404, "no such window", h);
        s.current = h;
        s.frame_path.clear();
        return {200, nullptr};
      }
      if (method == "DELETE") {
        window(s);
        std::erase_if(s.windows, [&](const Window& w) { return w.handle == s.current; });
        s.current.clear();
        json handles = json::array();
        for (const auto& w : s.windows) handles.push_back(w.handle);
        return {200, handles};
      }
    }
    if (cmd == "frame" && method == "POST") {
      const json& id = body.contains("id") ? body["id"] : json(nullptr);
      if (id.is_null()) {
        s.frame_path.clear();
        return {200, nullptr};
      }
      if (!id.is_object() || !id.contains(driver::kElementKey)) fail(400, "invalid argument", "frame id");
      auto [doc, idx] = resolve(s, id[driver::kElementKey].get<std::string>());
      if (doc != &context(s) || !doc->nodes[idx].frame) fail(404, "no such frame", doc->nodes[idx].id);
      s.frame_path.push_back(doc->nodes[idx].id);
      return {200, nullptr};
    }
    fail(404, "unknown command", method + " " + cmd);
  }
};

FixtureBrowser::FixtureBrowser(std::vector<FixtureSite> sites, BrowserOptions options)
    : state_(std::make_unique<State>()) {
  state_->sites = std::move(sites);
  state_->options = options;
}

FixtureBrowser::~FixtureBrowser() = default;

WireResult FixtureBrowser::dispatch(const std::string& method, const std::string& path, const json& body) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '/');) {
    if (!part.empty()) parts.push_back(part);
  }
  std::lock_guard lock(state_->mu);
  try {
    return state_->route(method, parts, body);
  } catch (const Failure& f) {
    return {f.status, {{"error", f.error}, {"message", f.message}, {"stacktrace", ""}}};
  } catch (const std::exception& e) {
    return {500, {{"error", "unknown error"}, {"message", e.what()}, {"stacktrace", ""}}};
  }
}

std::size_t FixtureBrowser::open_sessions() const {
  std::lock_guard lock(state_->mu);
  return state_->sessions.size();
}

std::size_t FixtureBrowser::clicks() const {
  std::lock_guard lock(state_->mu);
  return state_->clicks;
}

}  // namespace cookiepilot::fixture
