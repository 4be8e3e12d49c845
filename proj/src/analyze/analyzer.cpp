#include "cookiepilot/analyze/analyzer.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "cookiepilot/decide/semantics.hpp"
#include "cookiepilot/dom/selector.hpp"
#include "cookiepilot/dom/stacking.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/probe/role_prober.hpp"
#include "cookiepilot/text.hpp"
#include "cookiepilot/url.hpp"

namespace cookiepilot::analyze {
namespace {

std::string finish_label(std::string_view s) {
  return text::truncate_chars(text::normalize_whitespace(text::to_lower(s)), kMaxLabelChars);
}

std::optional<std::size_t> visible_container(const dom::PageIndex& index, const std::string& css) {
  for (std::size_t i : dom::query_all(index, css)) {
    if (dom::is_visible(index.at(i))) return i;
  }
  return std::nullopt;
}

std::string subtree_text(const dom::PageIndex& index, std::size_t i) {
  std::string out = index.at(i).own_text;
  for (std::size_t d : index.descendants(i)) {
    const auto& e = index.at(d);
    if (!e.displayed || e.own_text.empty()) continue;
    if (!out.empty()) out += ' ';
    out += e.own_text;
  }
  return text::normalize_whitespace(out);
}

bool checkbox_like(const dom::ElementSnapshot& e) {
  if (e.tag_name != "input") return false;
  std::string type = text::to_lower(e.attr("type"));
  return type == "checkbox" || type == "radio";
}

SettingState to_setting(driver::ElementState s) {
  switch (s) {
    case driver::ElementState::kSelected: return SettingState::kSelected;
    case driver::ElementState::kNotSelected: return SettingState::kNotSelected;
    default: return SettingState::kStateless;
  }
}

const dom::SelectorPath& target_of(const InteractiveElement& e) {
  return e.click_target.empty() ? e.snapshot.selector_path : e.click_target;
}

// Visible label element of a hidden checkbox, or the element itself when
// it is visible. nullptr when the element cannot be operated.
const dom::ElementSnapshot* operable_target(const dom::PageSnapshot& page, const dom::ElementSnapshot& e) {
  if (dom::is_visible(e)) return &e;
  if (!checkbox_like(e)) return nullptr;
  const dom::ElementSnapshot* label = label_for(page, e);
  return label && dom::is_visible(*label) ? label : nullptr;
}

InteractiveElement make_element(driver::Session& s, const dom::PageSnapshot& page,
                                const dom::ElementSnapshot& e, const dom::ElementSnapshot& target,
                                Discovery discovery) {
  InteractiveElement el;
  el.snapshot = e;
  el.discovery = discovery;
  el.click_target = target.selector_path;
  el.state = to_setting(s.query_state(target.selector_path));
  std::string aria = text::normalize_whitespace(e.attr("aria-label"));
  el.label = !aria.empty() ? finish_label(aria) : extract_label(page, target.node_id == e.node_id ? e : target);
  return el;
}

// Interactive elements that became operable inside the container between
// the two snapshots.
std::vector<const dom::ElementSnapshot*> revealed_between(const dom::PageSnapshot& before,
                                                          const dom::PageSnapshot& after,
                                                          const std::string& container_css,
                                                          const std::set<std::string>& known) {
  std::vector<const dom::ElementSnapshot*> out;
  dom::PageIndex index(after);
  auto container = visible_container(index, container_css);
  if (!container) return out;
  for (std::size_t d : index.descendants(*container)) {
    const auto& e = index.at(d);
    if (known.count(e.node_id)) continue;
    const dom::ElementSnapshot* target = operable_target(after, e);
    if (!target || !(dom::is_interactive(e) || target != &e)) continue;
    if (!dom::is_interactive(e) && !checkbox_like(e)) continue;
    const dom::ElementSnapshot* prior = before.find(target->node_id);
    if (prior && dom::is_visible(*prior)) continue;
    out.push_back(&e);
  }
  return out;
}

}  // namespace

const dom::ElementSnapshot* label_for(const dom::PageSnapshot& page, const dom::ElementSnapshot& input) {
  dom::PageIndex index(page);
  auto i = index.index_of(input.node_id);
  if (!i) return nullptr;
  for (std::size_t a = index.parent(*i); a != dom::PageIndex::kRoot; a = index.parent(a)) {
    if (index.at(a).tag_name == "label") return &index.at(a);
  }
  std::string id = input.attr("id");
  if (id.empty()) return nullptr;
  for (const auto& e : page.elements) {
    if (e.tag_name == "label" && e.attr("for") == id) return &e;
  }
  return nullptr;
}

std::string extract_label(const dom::PageSnapshot& page, const dom::ElementSnapshot& el) {
  std::string aria = text::normalize_whitespace(el.attr("aria-label"));
  if (!aria.empty()) return finish_label(aria);
  dom::PageIndex index(page);
  auto i = index.index_of(el.node_id);
  if (!i) return {};
  std::string own = subtree_text(index, *i);
  if (own.empty() && el.tag_name == "input") own = text::normalize_whitespace(el.attr("value"));
  if (!own.empty()) return finish_label(own);

  const double cx = el.bbox.center_x(), cy = el.bbox.center_y();
  for (std::size_t a = index.parent(*i); a != dom::PageIndex::kRoot; a = index.parent(a)) {
    const dom::ElementSnapshot* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t d : index.descendants(a)) {
      if (d == *i || index.is_descendant(d, *i)) continue;
      const auto& e = index.at(d);
      if (e.own_text.empty() || !dom::is_visible(e)) continue;
      double dist = std::hypot(e.bbox.center_x() - cx, e.bbox.center_y() - cy);
      if (dist < best_d) {
        best_d = dist;
        best = &e;
      }
    }
    if (best) return finish_label(best->own_text);
  }
  return {};
}

std::vector<InteractiveElement> discover_elements(driver::Session& s, const dom::SelectorPath& notice) {
  dom::PageSnapshot page = s.snapshot();
  dom::PageIndex index(page);
  auto container = visible_container(index, notice.css);
  if (!container) throw Error(ErrorCode::kContainerGone, notice.css);

  std::vector<InteractiveElement> out;
  std::set<std::string> seen;
  for (const auto& t : s.tab_cycle(notice)) {
    const dom::ElementSnapshot* e = page.find(t.node_id);
    if (!e || !seen.insert(t.node_id).second) continue;
    out.push_back(make_element(s, page, *e, *e, Discovery::kTabbed));
  }
  for (std::size_t d : index.descendants(*container)) {
    const auto& e = index.at(d);
    if (seen.count(e.node_id)) continue;
    bool candidate = e.tag_name == "button" || e.tag_name == "a" ||
                     (e.tag_name == "input" && text::to_lower(e.attr("type")) != "hidden");
    if (!candidate) continue;
    const dom::ElementSnapshot* target = operable_target(page, e);
    if (!target || (target != &e && seen.count(target->node_id))) continue;
    seen.insert(e.node_id);
    out.push_back(make_element(s, page, e, *target, Discovery::kHiddenSupplement));
  }
  return out;
}

OutboundResult filter_outbound(probe::ProbeContext& ctx, const dom::PageSnapshot& page,
                               std::vector<InteractiveElement> elements, int view,
                               const std::vector<dom::SelectorPath>& replay) {
  OutboundResult result;
  for (auto& el : elements) {
    const auto& e = el.snapshot;
    const std::string tag = el.tag.rendered();
    const bool more_options = decide::classify_label_semantics(el.label) == decide::LabelSemantics::kMoreOptions;
    auto drop = [&](const std::string& reason, const nlohmann::json& outcome) {
      ctx.log(view, tag, "filter_outbound", outcome, reason);
      if (more_options) result.dedicated_page = true;
    };
    if (el.state != SettingState::kStateless) {
      result.kept.push_back(std::move(el));
      continue;
    }
    if (text::to_lower(e.attr("target")) == "_blank") {
      drop("target=_blank", {{"removed", true}});
      continue;
    }
    if (e.tag_name == "a" && e.has_attribute("href")) {
      if (url::leaves_document(page.url, e.attr("href"))) {
        drop("href leaves document", {{"removed", true}, {"href", e.attr("href")}});
        continue;
      }
      result.kept.push_back(std::move(el));
      continue;
    }
    const bool ambiguous = (e.tag_name == "a") || text::to_lower(e.attr("role")) == "link" || more_options;
    if (ambiguous && ctx.has_budget(1 + static_cast<int>(replay.size()))) {
      driver::ClickOutcome outcome = ctx.session.click(target_of(el));
      ctx.restore(replay);
      if (outcome.url_changed || outcome.new_tab_opened) {
        drop("probe click left the page", outcome);
        continue;
      }
    }
    result.kept.push_back(std::move(el));
  }
  return result;
}

NoticeModel explore_views(probe::ProbeContext& ctx, const detect::LocatedNotice& notice,
                          const detect::ClassifierHandle& detector, ExploreOptions options) {
  NoticeModel model;
  model.domain = ctx.domain;
  model.url = ctx.url;
  model.notice_selector = notice.candidate.element.selector_path;
  model.frame = notice.frame;
  ctx.frame = notice.frame;

  struct Pending {
    std::optional<ViewOpener> opener;
    dom::SelectorPath container;
    int depth = 0;
  };
  std::deque<Pending> queue{{std::nullopt, model.notice_selector, 0}};
  std::set<std::string> containers{notice.candidate.element.node_id};
  std::set<std::string> known;
  int next_index = 0;
  bool fresh = true;

  auto stop = [&](int view) {
    model.truncated = true;
    ctx.log(view, "", "explore", {{"clicks", ctx.clicks_used()}}, "click budget exhausted");
  };

  while (!queue.empty() && !model.truncated) {
    Pending p = queue.front();
    queue.pop_front();
    const int vi = static_cast<int>(model.views.size());
    model.views.push_back(View{{}, p.opener, p.container});
    auto chain = probe::replay_chain(model, vi);
    if (!fresh) {
      if (!ctx.has_budget(static_cast<int>(chain.size()))) {
        model.views.pop_back();
        stop(vi);
        break;
      }
      ctx.restore(chain);
    }
    fresh = false;

    std::vector<InteractiveElement> found;
    dom::PageSnapshot page;
    try {
      found = discover_elements(ctx.session, p.container);
      page = ctx.session.snapshot();
    } catch (const Error& e) {
      if (vi == 0 || e.code() != ErrorCode::kContainerGone) throw;
      ctx.log(vi, "", "discover", nlohmann::json::object(), e.what());
      model.views.pop_back();
      continue;
    }
    std::erase_if(found, [&](const InteractiveElement& el) { return known.count(el.snapshot.node_id) > 0; });
    for (auto& el : found) {
      el.view_index = vi;
      el.tag.index = next_index++;
      if (el.label.empty()) ctx.log(vi, el.tag.rendered(), "label", discovery_name(el.discovery), "no label");
    }
    OutboundResult ob = filter_outbound(ctx, page, std::move(found), vi, chain);
    model.dedicated_page = model.dedicated_page || ob.dedicated_page;
    if (ob.kept.empty() && vi > 0) {
      model.views.pop_back();
      continue;
    }
    for (const auto& el : ob.kept) known.insert(el.snapshot.node_id);
    model.views[vi].elements = std::move(ob.kept);

    bool pristine = true;
    std::string shown_revealer;
    for (std::size_t i = 0; i < model.views[vi].elements.size(); ++i) {
      InteractiveElement el = model.views[vi].elements[i];
      if (!pristine || shown_revealer != el.revealed_by) {
        auto c = probe::replay_chain(model, vi, el.revealed_by);
        if (!ctx.has_budget(static_cast<int>(c.size()) + 2)) {
          stop(vi);
          break;
        }
        ctx.restore(c);
        shown_revealer = el.revealed_by;
      } else if (!ctx.has_budget(2)) {
        stop(vi);
        break;
      }

      probe::RoleProbeResult r;
      try {
        r = probe::probe_role(ctx.session, el, detector, p.container);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kProbeAborted) throw;
        model.views[vi].elements[i].role = Role::kUnknown;
        ctx.log(vi, el.tag.rendered(), "probe", {{"role", "UNKNOWN"}}, e.what());
        pristine = false;
        continue;
      }
      {
        InteractiveElement& m = model.views[vi].elements[i];
        m.role = r.role;
        m.low_confidence = r.low_confidence;
        m.tag.kind = r.role == Role::kTypeA ? ElementTag::Kind::kSwitch : ElementTag::Kind::kButton;
        if (r.role == Role::kTypeA) m.state = to_setting(r.evidence.state_before);
        el = m;
      }
      ctx.log(vi, el.tag.rendered(), "probe", {{"role", role_name(r.role)}, {"evidence", r.evidence}},
              r.low_confidence ? "no observable change" : "");
      pristine = r.role == Role::kTypeA;

      if (r.role == Role::kUnknown && r.evidence.first_click.url_changed &&
          decide::classify_label_semantics(el.label) == decide::LabelSemantics::kMoreOptions) {
        model.dedicated_page = true;
      }
      if (r.role == Role::kTypeB && r.new_notice && p.depth + 1 < options.max_view_depth &&
          containers.insert(r.new_notice->element.node_id).second) {
        queue.push_back({ViewOpener{vi, el.tag, el.snapshot.node_id},
                         r.new_notice->element.selector_path, p.depth + 1});
      }
      if (r.role != Role::kTypeC) continue;

      auto revealed = revealed_between(r.before, r.after_first, p.container.css, known);
      if (revealed.empty()) continue;
      std::set<std::string> wanted;
      for (const auto* e : revealed) wanted.insert(e->node_id);
      auto c = probe::replay_chain(model, vi, el.snapshot.node_id);
      if (!ctx.has_budget(static_cast<int>(c.size()))) {
        stop(vi);
        break;
      }
      ctx.restore(c);
      shown_revealer = el.snapshot.node_id;
      pristine = true;
      dom::PageSnapshot shown = ctx.session.snapshot();
      std::vector<InteractiveElement> added;
      for (const auto& e : shown.elements) {
        if (!wanted.count(e.node_id)) continue;
        const dom::ElementSnapshot* target = operable_target(shown, e);
        if (!target) continue;
        InteractiveElement n = make_element(ctx.session, shown, e, *target, Discovery::kDynamic);
        n.view_index = vi;
        n.revealed_by = el.snapshot.node_id;
        n.tag.index = next_index++;
        added.push_back(std::move(n));
      }
      OutboundResult ob2 = filter_outbound(ctx, shown, std::move(added), vi, c);
      model.dedicated_page = model.dedicated_page || ob2.dedicated_page;
      for (auto& n : ob2.kept) {
        ctx.log(vi, n.tag.rendered(), "reveal", {{"revealed_by", el.tag.rendered()}});
        known.insert(n.snapshot.node_id);
        model.views[vi].elements.push_back(std::move(n));
      }
    }
  }

  for (auto& v : model.views) {
    for (auto& el : v.elements) {
      if (!el.role) el.role = Role::kUnknown;
    }
  }
  model.accept_only = decide::is_accept_only(model);
  return model;
}

}  // namespace cookiepilot::analyze
