#include "unit/model_oracle.hpp"

#include <regex>
#include <set>

#include "cookiepilot/decide/semantics.hpp"
#include "cookiepilot/error.hpp"
#include "unit/support.hpp"

namespace cp = cookiepilot;
using cp::ElementTag;
using cp::Role;
using cp::SettingState;
using cp::decide::LabelSemantics;

namespace testsupport {

namespace {

constexpr auto kButton = ElementTag::Kind::kButton;
constexpr auto kSwitch = ElementTag::Kind::kSwitch;

struct Pools {
  std::vector<std::string> positive = {"analytics cookies", "advertising", "personalised ads and content",
                                       "performance cookies", "social media cookies", "measure audience"};
  std::vector<std::string> negated = {"do not allow non-essential cookies", "do not sell my personal information"};
  std::vector<std::string> essential = {"strictly necessary cookies", "essential cookies"};
  std::vector<std::string> only = {"only allow necessary cookies"};
  std::vector<std::string> accept = {"accept all", "i accept", "allow all cookies", "agree"};
  std::vector<std::string> reject = {"reject all", "decline", "refuse non-essential cookies"};
  std::vector<std::string> save = {"save settings", "confirm my choices", "save and exit"};
  std::vector<std::string> more = {"manage settings", "customize", "show purposes", "cookie settings"};
  std::vector<std::string> neutral = {"learn more", "privacy policy details", "vendor list"};
  std::vector<std::string> objection = {"object to legitimate interests"};
};

// Oracle-side reading of a switch label.
enum class SwitchKind { kPositive, kInverted, kEssential };

SwitchKind oracle_switch_kind(const std::string& label) {
  if (label.rfind("do not", 0) == 0 || label.rfind("only", 0) == 0) return SwitchKind::kInverted;
  if (label.find("necessary") != std::string::npos || label.find("essential") != std::string::npos) {
    return SwitchKind::kEssential;
  }
  return SwitchKind::kPositive;
}

}  // namespace

Generated random_model(std::mt19937& rng) {
  static const Pools pools;
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  Generated g;
  int views = 1 + static_cast<int>(rng() % 3);
  int index = 0;
  for (int v = 0; v < views; ++v) {
    cp::View view;
    int count = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < count; ++i) {
      int r = static_cast<int>(rng() % 100);
      std::string pool, label;
      Role role = Role::kTypeD;
      if (r < 30) {
        int s = static_cast<int>(rng() % 10);
        pool = s < 6 ? "positive" : s < 8 ? "negated" : s < 9 ? "essential" : "only";
        label = pick(pool == "positive" ? pools.positive
                     : pool == "negated" ? pools.negated
                     : pool == "essential" ? pools.essential
                                           : pools.only);
        role = Role::kTypeA;
      } else if (r < 50) {
        pool = "accept", label = pick(pools.accept);
      } else if (r < 58) {
        pool = "reject", label = pick(pools.reject);
      } else if (r < 72) {
        pool = "save", label = pick(pools.save);
      } else if (r < 85) {
        pool = "neutral", label = pick(pools.neutral), role = Role::kTypeC;
      } else if (r < 92) {
        pool = "objection", label = pick(pools.objection), role = Role::kTypeC;
      } else {
        pool = "unknown", label = pick(pools.neutral), role = Role::kUnknown;
      }
      auto kind = role == Role::kTypeA ? kSwitch : kButton;
      auto state = role == Role::kTypeA ? (rng() % 2 ? SettingState::kSelected : SettingState::kNotSelected)
                                        : SettingState::kStateless;
      auto e = element(v, kind, index, label, role, state);
      g.kind[e.snapshot.node_id] = pool;
      view.elements.push_back(e);
      ++index;
    }
    if (v + 1 < views) {
      auto opener = element(v, kButton, index, pick(pools.more), Role::kTypeB);
      g.kind[opener.snapshot.node_id] = "more";
      auto pos = view.elements.begin() + static_cast<long>(rng() % (view.elements.size() + 1));
      view.elements.insert(pos, opener);
      ++index;
    }
    if (v > 0) {
      const auto& prev = g.model.views[v - 1].elements;
      for (const auto& e : prev) {
        if (e.role == Role::kTypeB) view.opened_by = cp::ViewOpener{v - 1, e.tag, e.snapshot.node_id};
      }
    }
    g.model.views.push_back(std::move(view));
  }
  return g;
}

std::string simulate(const Generated& g, const cp::decide::ClickPlan& plan) {
  std::map<std::string, SettingState> state;
  for (const auto& v : g.model.views) {
    for (const auto& e : v.elements) state[e.snapshot.node_id] = e.state;
  }
  std::set<int> reached{0};
  bool rejected = false;
  for (const auto& s : plan.steps) {
    if (!reached.count(s.view_index)) return "click in unreached view " + std::to_string(s.view_index);
    const auto& pool = g.kind.at(s.node_id);
    if (pool == "accept") return "clicked accept";
    if (pool == "more") reached.insert(s.view_index + 1);
    if (pool == "reject") rejected = true;
    auto& st = state[s.node_id];
    if (st == SettingState::kSelected) {
      st = SettingState::kNotSelected;
    } else if (st == SettingState::kNotSelected) {
      st = SettingState::kSelected;
    }
  }
  if (rejected) return {};
  for (const auto& v : g.model.views) {
    for (const auto& e : v.elements) {
      if (e.role != Role::kTypeA || !reached.count(e.view_index)) continue;
      auto kind = oracle_switch_kind(e.label);
      if (kind == SwitchKind::kEssential) continue;
      auto want = kind == SwitchKind::kInverted ? SettingState::kSelected : SettingState::kNotSelected;
      if (state[e.snapshot.node_id] != want) return e.tag.rendered() + " (" + e.label + ") left enabled";
    }
  }
  return {};
}

bool has_reachable_opt_out(const Generated& g) {
  for (const auto& v : g.model.views) {
    for (const auto& e : v.elements) {
      const auto& pool = g.kind.at(e.snapshot.node_id);
      if (pool == "reject" || pool == "objection") return true;
      if (e.role == Role::kTypeA) {
        auto kind = oracle_switch_kind(e.label);
        if (kind == SwitchKind::kPositive && e.state == SettingState::kSelected) return true;
        if (kind == SwitchKind::kInverted && e.state == SettingState::kNotSelected) return true;
      }
    }
  }
  return false;
}

bool grammar_ok(const std::string& text, const cp::NoticeModel& model) {
  static const std::regex button(R"(button\d+ - [^,]*(,(?! (not )?selected$)[^,]*)*)");
  static const std::regex sw(R"(switch\d+ - .+, (selected|not selected))");
  if (text.size() < 6 || text.compare(text.size() - 6, 6, " <end>") != 0) return false;
  std::string body = text.substr(0, text.size() - 6);
  std::size_t switches = 0;
  std::size_t start = 0;
  while (true) {
    auto end = body.find(" ** ", start);
    std::string view = body.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::size_t es = 0;
    while (true) {
      auto ee = view.find(" || ", es);
      std::string entry = view.substr(es, ee == std::string::npos ? std::string::npos : ee - es);
      if (std::regex_match(entry, sw)) {
        ++switches;
      } else if (!std::regex_match(entry, button)) {
        return false;
      }
      if (ee == std::string::npos) break;
      es = ee + 4;
    }
    if (end == std::string::npos) break;
    start = end + 4;
  }
  std::size_t type_a = 0;
  for (const auto& v : model.views) {
    for (const auto& e : v.elements) type_a += e.role == Role::kTypeA;
  }
  return switches == type_a;
}

std::string check_round_trip(const cp::decide::SerializedNotice& sn, const cp::decide::ClickPlan& p) {
  if (!grammar_ok(sn.text, sn.model_ref)) return "serialization grammar";
  auto reparsed = cp::decide::parse_serialized(sn.text);
  if (cp::decide::serialize(reparsed).text != sn.text) return "serialize round trip";
  if (p.status == cp::decide::PlanStatus::kNoOptOut) return p.steps.empty() ? "" : "steps without opt-out";
  try {
    cp::decide::validate_plan(p, sn.model_ref);
    auto back = cp::decide::parse_plan(p.rendered, sn.model_ref);
    if (back.steps != p.steps || back.rendered != p.rendered) return "parse_plan round trip";
  } catch (const cp::Error& e) {
    return e.what();
  }
  for (const auto& s : p.steps) {
    const auto* e = sn.model_ref.find_node(s.node_id);
    if (!e) return "plan names a missing node";
    if (cp::decide::classify_label_semantics(e->label) == LabelSemantics::kAcceptAll) return "accept clicked";
  }
  return {};
}

FuzzOutcome check_generated(const Generated& g) {
  FuzzOutcome out;
  cp::decide::SerializedNotice sn;
  try {
    sn = cp::decide::serialize(g.model);
  } catch (const cp::Error& e) {
    if (e.code() != cp::ErrorCode::kEmptyModel) out.failure = e.what();
    return out;
  }
  out.serialized = sn.text;
  auto p = cp::decide::plan(sn, cp::decide::PlanProvider::kRules);
  out.plan = p.rendered;
  out.kind = p.status == cp::decide::PlanStatus::kNoOptOut ? FuzzOutcome::kNoOptOut : FuzzOutcome::kPlan;
  out.failure = check_round_trip(sn, p);
  if (!out.failure.empty()) return out;
  if (out.kind == FuzzOutcome::kNoOptOut) {
    if (has_reachable_opt_out(g)) out.failure = "opt-out reachable but none planned";
    return out;
  }
  bool view0_reject = false;
  for (const auto& e : g.model.views[0].elements) {
    view0_reject = view0_reject || (e.serializable() && e.role != Role::kTypeA &&
                                    cp::decide::classify_label_semantics(e.label) == LabelSemantics::kRejectAll);
  }
  if (view0_reject && p.steps.size() != 1) {
    out.failure = "first-view reject not used alone";
    return out;
  }
  out.failure = simulate(g, p);
  return out;
}

}  // namespace testsupport
