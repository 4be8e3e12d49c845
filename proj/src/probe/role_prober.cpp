#include "cookiepilot/probe/role_prober.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "cookiepilot/dom/selector.hpp"
#include "cookiepilot/dom/stacking.hpp"
#include "cookiepilot/error.hpp"

namespace cookiepilot::probe {

using driver::ElementState;

namespace {

bool checkable(ElementState s) { return s == ElementState::kSelected || s == ElementState::kNotSelected; }

// node_id of the first visible match of `css`, if any.
std::optional<std::string> visible_match(const dom::PageSnapshot& page, const std::string& css) {
  dom::PageIndex index(page);
  for (std::size_t i : dom::query_all(index, css)) {
    if (dom::is_visible(index.at(i))) return index.at(i).node_id;
  }
  return std::nullopt;
}

bool same_rendering(const dom::PageSnapshot& a, const dom::PageSnapshot& b) {
  if (a.url != b.url || a.elements.size() != b.elements.size()) return false;
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    const auto& x = a.elements[i];
    const auto& y = b.elements[i];
    if (x.node_id != y.node_id || x.displayed != y.displayed || !(x.bbox == y.bbox) ||
        x.own_text != y.own_text || x.attributes != y.attributes) {
      return false;
    }
  }
  return true;
}

void pause(const driver::Session& s) {
  std::this_thread::sleep_for(std::chrono::milliseconds(s.options().probe_click_gap_ms));
}

SettingState to_setting(ElementState s) {
  switch (s) {
    case ElementState::kSelected: return SettingState::kSelected;
    case ElementState::kNotSelected: return SettingState::kNotSelected;
    default: return SettingState::kStateless;
  }
}

}  // namespace

void to_json(nlohmann::json& j, const ProbeEvidence& e) {
  j = nlohmann::json{{"first_click", e.first_click},
                     {"second_click", e.second_click},
                     {"state_before", driver::element_state_name(e.state_before)},
                     {"state_after_first", driver::element_state_name(e.state_after_first)},
                     {"state_after_second", driver::element_state_name(e.state_after_second)},
                     {"notice_gone_after_first", e.notice_gone_after_first},
                     {"new_notice_detected", e.new_notice_detected},
                     {"element_visible_after", e.element_visible_after},
                     {"dom_changed", e.dom_changed}};
}

RoleDecision assign_role(const ProbeEvidence& e) {
  const bool navigated = e.first_click.url_changed || e.first_click.new_tab_opened ||
                         e.second_click.url_changed || e.second_click.new_tab_opened;
  if (!e.first_click.clicked || e.first_click.url_changed || e.first_click.new_tab_opened) {
    return {Role::kUnknown, false};
  }
  const bool both = e.second_click.clicked;
  if (both && e.element_visible_after && checkable(e.state_before) &&
      checkable(e.state_after_first) && checkable(e.state_after_second) &&
      e.state_after_first != e.state_before && e.state_after_second != e.state_after_first) {
    return {Role::kTypeA, false};
  }
  if (e.notice_gone_after_first && e.new_notice_detected) return {Role::kTypeB, false};
  if (both && !navigated && !e.new_notice_detected && e.state_after_first == e.state_before &&
      e.state_after_second == e.state_before) {
    return {Role::kTypeC, !e.dom_changed};
  }
  if (!both && !e.new_notice_detected && !navigated) return {Role::kTypeD, false};
  return {Role::kUnknown, false};
}

RoleProbeResult probe_role(driver::Session& s, const InteractiveElement& el,
                           const detect::ClassifierHandle& detector,
                           const dom::SelectorPath& notice) {
  const dom::SelectorPath& target = el.click_target.empty() ? el.snapshot.selector_path : el.click_target;
  RoleProbeResult r;
  ProbeEvidence& ev = r.evidence;

  ev.state_before = s.query_state(target);
  if (ev.state_before == ElementState::kGone) {
    throw Error(ErrorCode::kProbeAborted, target.css + " not visible before first click");
  }
  r.before = s.snapshot();
  const dom::PageSnapshot& before = r.before;
  const auto notice_node = visible_match(before, notice.css);

  ev.first_click = s.click(target);
  pause(s);
  ev.state_after_first = s.query_state(target);
  if (!ev.first_click.url_changed) {
    r.after_first = s.snapshot();
    ev.dom_changed = !same_rendering(before, r.after_first);
    ev.notice_gone_after_first = !visible_match(r.after_first, notice.css).has_value();
    if (ev.notice_gone_after_first) {
      std::optional<detect::NoticeCandidate> found;
      try {
        found = detect::detect_notice(r.after_first, detector);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::kEmptyPage) throw;
      }
      if (found && (!notice_node || found->element.node_id != *notice_node)) {
        ev.new_notice_detected = true;
        r.new_notice = std::move(found);
      }
    }
  } else {
    ev.dom_changed = true;
    ev.notice_gone_after_first = true;
  }

  ev.second_click = s.click(target);
  pause(s);
  ev.state_after_second = s.query_state(target);
  ev.element_visible_after = ev.state_after_second != ElementState::kGone;

  RoleDecision d = assign_role(ev);
  r.role = d.role;
  r.low_confidence = d.low_confidence;
  return r;
}

ProbeContext::ProbeContext(driver::Session& s, std::string u, std::string d, int budget)
    : session(s), url(std::move(u)), domain(std::move(d)), click_budget(budget),
      clicks_at_start(s.clicks_issued()) {}

void ProbeContext::restore(const std::vector<dom::SelectorPath>& replay) {
  session.reset(url);
  if (frame) session.switch_to_frame(*frame);
  for (const auto& target : replay) {
    session.click(target);
    pause(session);
  }
}

void ProbeContext::log(int view, const std::string& tag, const std::string& action,
                       const nlohmann::json& outcome, const std::string& reason) const {
  if (audit) audit->record(domain, view, tag, action, outcome, reason);
}

std::vector<dom::SelectorPath> replay_chain(const NoticeModel& model, int view,
                                            const std::string& revealer_node) {
  std::vector<dom::SelectorPath> chain;
  auto target_of = [](const InteractiveElement& e) {
    return e.click_target.empty() ? e.snapshot.selector_path : e.click_target;
  };
  for (int v = view; v > 0 && static_cast<std::size_t>(v) < model.views.size();) {
    const auto& ob = model.views[v].opened_by;
    if (!ob) break;
    const InteractiveElement* opener = model.find_node(ob->node_id);
    if (!opener) break;
    // An opener that is itself revealed needs its revealer first.
    chain.push_back(target_of(*opener));
    if (!opener->revealed_by.empty()) {
      if (const auto* r = model.find_node(opener->revealed_by)) chain.push_back(target_of(*r));
    }
    v = ob->view_index;
  }
  std::reverse(chain.begin(), chain.end());
  std::vector<dom::SelectorPath> reveal;
  for (const auto* r = model.find_node(revealer_node); r && reveal.size() < model.element_count();
       r = model.find_node(r->revealed_by)) {
    reveal.push_back(target_of(*r));
    if (r->revealed_by.empty()) break;
  }
  chain.insert(chain.end(), reveal.rbegin(), reveal.rend());
  return chain;
}

NoticeModel probe_all(ProbeContext& ctx, NoticeModel model, const detect::ClassifierHandle& detector,
                      ProbeAllOptions options) {
  bool pristine = false;  // page currently shows the state a probe needs
  std::string shown_revealer;
  int shown_view = -1;
  for (std::size_t v = 0; v < model.views.size(); ++v) {
    View& view = model.views[v];
    const dom::SelectorPath& notice = view.notice_selector.empty() ? model.notice_selector : view.notice_selector;
    for (auto& el : view.elements) {
      if (el.role && !options.force) continue;
      if (!pristine || shown_view != static_cast<int>(v) || shown_revealer != el.revealed_by) {
        auto chain = replay_chain(model, static_cast<int>(v), el.revealed_by);
        if (!ctx.has_budget(static_cast<int>(chain.size()) + 2)) {
          throw Error(ErrorCode::kExplorationBudgetExceeded,
                      ctx.domain + " after " + std::to_string(ctx.clicks_used()) + " clicks");
        }
        ctx.restore(chain);
        shown_view = static_cast<int>(v);
        shown_revealer = el.revealed_by;
      } else if (!ctx.has_budget(2)) {
        throw Error(ErrorCode::kExplorationBudgetExceeded,
                    ctx.domain + " after " + std::to_string(ctx.clicks_used()) + " clicks");
      }
      try {
        RoleProbeResult r = probe_role(ctx.session, el, detector, notice);
        el.role = r.role;
        el.low_confidence = r.low_confidence;
        if (r.role == Role::kTypeA) {
          el.tag.kind = ElementTag::Kind::kSwitch;
          el.state = to_setting(r.evidence.state_before);
        } else {
          el.tag.kind = ElementTag::Kind::kButton;
        }
        ctx.log(static_cast<int>(v), el.tag.rendered(), "probe",
                {{"role", role_name(r.role)}, {"evidence", r.evidence}},
                r.low_confidence ? "no observable change" : "");
        pristine = r.role == Role::kTypeA;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kProbeAborted) throw;
        el.role = Role::kUnknown;
        ctx.log(static_cast<int>(v), el.tag.rendered(), "probe", {{"role", "UNKNOWN"}}, e.what());
        pristine = false;
      }
    }
  }
  ctx.session.reset(ctx.url);
  return model;
}

}  // namespace cookiepilot::probe
