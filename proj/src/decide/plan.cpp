#include "cookiepilot/decide/plan.hpp"

#include <chrono>
#include <semaphore>
#include <set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cookiepilot/decide/semantics.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/http_endpoint.hpp"
#include "cookiepilot/text.hpp"

namespace cookiepilot::decide {
namespace {

constexpr std::ptrdiff_t kExternalInFlight = 4;

std::counting_semaphore<kExternalInFlight>& external_slots() {
  static std::counting_semaphore<kExternalInFlight> slots(kExternalInFlight);
  return slots;
}

bool is_switch(const InteractiveElement& e) { return e.role == Role::kTypeA; }

LabelSemantics semantics(const InteractiveElement& e) { return classify_label_semantics(e.label); }

bool reject_option(const InteractiveElement& e) {
  if (!e.serializable() || is_switch(e)) return false;
  auto s = semantics(e);
  return s == LabelSemantics::kRejectAll || s == LabelSemantics::kEssentialOnlyPositive;
}

const InteractiveElement* find_reject(const View& v) {
  for (const auto& e : v.elements) {
    if (reject_option(e)) return &e;
  }
  return nullptr;
}

class Builder {
 public:
  explicit Builder(const NoticeModel& m) : model_(m) {}

  void click(int view, const InteractiveElement& e) {
    if (!e.revealed_by.empty() && !clicked_.count(e.revealed_by)) {
      if (const auto* r = model_.find_node(e.revealed_by)) click(view, *r);
    }
    steps_.push_back({view, e.tag, e.snapshot.node_id});
    clicked_.insert(e.snapshot.node_id);
  }

  ClickPlan done() {
    ClickPlan p;
    p.rendered = render_plan(steps_);
    p.steps = std::move(steps_);
    return p;
  }

  bool empty() const { return steps_.empty(); }

 private:
  const NoticeModel& model_;
  std::vector<PlanStep> steps_;
  std::set<std::string> clicked_;
};

ClickPlan no_opt_out() {
  ClickPlan p;
  p.status = PlanStatus::kNoOptOut;
  return p;
}

// Two stateless buttons, one accept and one that is neither an option to
// see more nor a plain dismissal: the other one is the refusal.
const InteractiveElement* binary_refusal(const View& v) {
  std::vector<const InteractiveElement*> buttons;
  for (const auto& e : v.elements) {
    if (!e.serializable()) continue;
    if (is_switch(e)) return nullptr;
    buttons.push_back(&e);
  }
  if (buttons.size() != 2) return nullptr;
  auto a = semantics(*buttons[0]), b = semantics(*buttons[1]);
  const InteractiveElement* other = nullptr;
  if (a == LabelSemantics::kAcceptAll && b != LabelSemantics::kAcceptAll) other = buttons[1];
  if (b == LabelSemantics::kAcceptAll && a != LabelSemantics::kAcceptAll) other = buttons[0];
  if (!other || semantics(*other) != LabelSemantics::kNeutral || is_dismissal(other->label)) {
    return nullptr;
  }
  return other;
}

const InteractiveElement* opener_of(const NoticeModel& m, std::size_t k) {
  if (k + 1 < m.views.size() && m.views[k + 1].opened_by) {
    const auto& ob = *m.views[k + 1].opened_by;
    if (ob.view_index == static_cast<int>(k)) {
      if (!ob.node_id.empty()) {
        if (const auto* e = m.find_node(ob.node_id)) return e;
      }
      if (const auto* e = m.find(ob.view_index, ob.tag)) return e;
    }
  }
  return nullptr;
}

bool objection(const InteractiveElement& e) {
  return e.serializable() && !is_switch(e) && e.role != Role::kTypeD &&
         objects_to_legitimate_interest(e.label);
}

void append_view_plan(std::vector<std::string>& out, const std::vector<PlanStep>& group) {
  std::string s;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (i > 0) s += " | ";
    s += "Click " + group[i].tag.rendered();
  }
  out.push_back(std::move(s));
}

}  // namespace

std::optional<SettingState> target_state(const InteractiveElement& sw) {
  auto s = semantics(sw);
  if (s == LabelSemantics::kNegatedConsent || s == LabelSemantics::kEssentialOnlyPositive) {
    return SettingState::kSelected;
  }
  if (essential_category(sw.label)) return std::nullopt;
  return SettingState::kNotSelected;
}

std::string render_plan(const std::vector<PlanStep>& steps) {
  if (steps.empty()) return {};
  std::vector<std::string> groups;
  std::vector<PlanStep> current;
  for (const auto& s : steps) {
    if (!current.empty() && current.back().view_index != s.view_index) {
      append_view_plan(groups, current);
      current.clear();
    }
    current.push_back(s);
  }
  append_view_plan(groups, current);
  std::string out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i > 0) out += " ** ";
    out += groups[i];
  }
  return out + ".";
}

ClickPlan plan_rules(const NoticeModel& model) {
  if (model.views.empty()) throw Error(ErrorCode::kEmptyModel, model.domain);
  if (model.accept_only || is_accept_only(model)) return no_opt_out();

  Builder b(model);
  if (const auto* r = find_reject(model.views[0])) {
    b.click(0, *r);
    return b.done();
  }
  if (const auto* r = binary_refusal(model.views[0])) {
    b.click(0, *r);
    return b.done();
  }

  for (std::size_t k = 0; k < model.views.size(); ++k) {
    const View& v = model.views[k];
    const int vi = static_cast<int>(k);
    if (k > 0) {
      if (const auto* r = find_reject(v)) {
        b.click(vi, *r);
        return b.done();
      }
    }
    bool settings_view = false;
    for (const auto& e : v.elements) {
      if ((e.serializable() && is_switch(e)) || objection(e)) settings_view = true;
    }
    if (settings_view) {
      for (const auto& e : v.elements) {
        if (!e.serializable()) continue;
        if (is_switch(e)) {
          auto target = target_state(e);
          if (target && e.state != *target) b.click(vi, e);
        } else if (objection(e)) {
          b.click(vi, e);
        }
      }
      const InteractiveElement* save = nullptr;
      for (const auto& e : v.elements) {
        if (e.serializable() && !is_switch(e) && semantics(e) == LabelSemantics::kSaveConfirm) {
          save = &e;
          break;
        }
      }
      if (save) {
        b.click(vi, *save);
        return b.done();
      }
    }
    const InteractiveElement* next = opener_of(model, k);
    if (!next) break;
    b.click(vi, *next);
  }
  // Settings were changed but nothing confirms them; some notices apply
  // toggles immediately, so the toggles alone are the plan.
  ClickPlan partial = b.done();
  bool toggled = false;
  for (const auto& s : partial.steps) {
    const auto* e = model.find_node(s.node_id);
    if (e && (is_switch(*e) || objection(*e))) toggled = true;
  }
  return toggled ? partial : no_opt_out();
}

ClickPlan parse_plan(std::string_view text, const NoticeModel& model) {
  std::string body = text::normalize_whitespace(text);
  if (!body.empty() && body.back() == '.') body = text::normalize_whitespace(body.substr(0, body.size() - 1));
  if (body.empty()) throw Error(ErrorCode::kPlanSyntaxError, "empty plan");

  ClickPlan out;
  int view = 0;
  std::size_t group_start = 0;
  while (group_start <= body.size()) {
    std::size_t group_end = body.find("**", group_start);
    if (group_end == std::string::npos) group_end = body.size();
    std::string group = body.substr(group_start, group_end - group_start);
    if (group_start > 0) {
      // Later groups continue in the view the previous group opened.
      const std::string& last = out.steps.back().node_id;
      int next = view + 1;
      for (std::size_t k = 0; k < model.views.size(); ++k) {
        const auto& ob = model.views[k].opened_by;
        if (ob && !last.empty() && ob->node_id == last) next = static_cast<int>(k);
      }
      view = next;
    }
    std::size_t step_start = 0;
    while (step_start <= group.size()) {
      std::size_t step_end = group.find('|', step_start);
      if (step_end == std::string::npos) step_end = group.size();
      std::string step = text::normalize_whitespace(std::string_view(group).substr(step_start, step_end - step_start));
      if (step.rfind("Click ", 0) != 0) throw Error(ErrorCode::kPlanSyntaxError, "expected 'Click <tag>' in '" + step + "'");
      std::string tag_text = text::normalize_whitespace(std::string_view(step).substr(6));
      auto tag = ElementTag::parse(tag_text);
      if (!tag) throw Error(ErrorCode::kPlanSyntaxError, "bad tag '" + tag_text + "'");
      if (view < 0 || static_cast<std::size_t>(view) >= model.views.size()) {
        throw Error(ErrorCode::kUnknownTag, tag->rendered() + " in missing view " + std::to_string(view));
      }
      const InteractiveElement* e = model.find(view, *tag);
      if (!e) {
        // Same index under the other kind, if unambiguous.
        const InteractiveElement* only = nullptr;
        int hits = 0;
        for (const auto& c : model.views[view].elements) {
          if (c.serializable() && c.tag.index == tag->index) {
            only = &c;
            ++hits;
          }
        }
        if (hits == 1) e = only;
      }
      if (!e) throw Error(ErrorCode::kUnknownTag, tag->rendered() + " in view " + std::to_string(view));
      out.steps.push_back({view, e->tag, e->snapshot.node_id});
      step_start = step_end + 1;
    }
    group_start = group_end + 2;
  }
  out.rendered = render_plan(out.steps);
  return out;
}

void validate_plan(const ClickPlan& p, const NoticeModel& model) {
  auto reject = [](const std::string& why) { throw Error(ErrorCode::kPlanRejected, why); };
  if (p.status == PlanStatus::kNoOptOut) {
    if (!p.steps.empty()) reject("no-opt-out plan with steps");
    return;
  }
  if (p.steps.empty()) reject("empty plan");
  bool view0_reject = !model.views.empty() && find_reject(model.views[0]);
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    const InteractiveElement* e = model.find_node(s.node_id);
    if (!e || e->view_index != s.view_index || !e->serializable() || !(e->tag == s.tag)) {
      reject(s.tag.rendered() + " not in view " + std::to_string(s.view_index));
    }
    if (!is_switch(*e) && semantics(*e) == LabelSemantics::kAcceptAll) {
      reject(s.tag.rendered() + " accepts cookies");
    }
    if (view0_reject && s.view_index > 0) reject("opens later views although view 0 can reject");
    bool last_in_view = i + 1 == p.steps.size() || p.steps[i + 1].view_index != s.view_index;
    if (e->role == Role::kTypeD && !last_in_view) reject(s.tag.rendered() + " ends the view early");
  }
}

ClickPlan plan(const SerializedNotice& sn, PlanProvider provider, const PlannerConfig& config) {
  const NoticeModel& model = sn.model_ref;
  if (model.accept_only || is_accept_only(model)) return no_opt_out();
  ClickPlan p;
  if (provider == PlanProvider::kRules) {
    p = plan_rules(model);
  } else {
    if (config.endpoint.empty()) throw Error(ErrorCode::kConfig, "seq2seq endpoint not set");
    HttpEndpoint ep = HttpEndpoint::parse(config.endpoint);
    std::string output;
    {
      auto& slots = external_slots();
      slots.acquire();
      struct Release {
        std::counting_semaphore<kExternalInFlight>& s;
        ~Release() { s.release(); }
      } release{slots};
      httplib::Client client(ep.origin);
      auto timeout = std::chrono::milliseconds(config.timeout_ms);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      auto res = client.Post(ep.path, nlohmann::json{{"input", sn.text}}.dump(), "application/json");
      if (!res) throw Error(ErrorCode::kPlanRejected, "seq2seq unreachable", httplib::to_string(res.error()));
      if (res->status != 200) {
        throw Error(ErrorCode::kPlanRejected, "seq2seq status " + std::to_string(res->status));
      }
      auto j = nlohmann::json::parse(res->body, nullptr, false);
      if (j.is_discarded() || !j.contains("output") || !j["output"].is_string()) {
        throw Error(ErrorCode::kPlanRejected, "seq2seq reply has no output");
      }
      output = j["output"].get<std::string>();
    }
    try {
      p = parse_plan(output, model);
    } catch (const Error& e) {
      throw Error(ErrorCode::kPlanRejected, "unparseable seq2seq output", e.what());
    }
  }
  validate_plan(p, model);
  return p;
}

}  // namespace cookiepilot::decide
