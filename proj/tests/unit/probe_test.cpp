#include <doctest.h>

#include "cookiepilot/probe/role_prober.hpp"
#include "unit/support.hpp"

namespace cp = cookiepilot;
using cp::Role;
using cp::driver::ClickError;
using cp::driver::ClickOutcome;
using cp::driver::ElementState;
using cp::probe::ProbeEvidence;

namespace {

bool checkable(ElementState s) { return s == ElementState::kSelected || s == ElementState::kNotSelected; }

bool left_page(const ClickOutcome& c) { return c.url_changed || c.new_tab_opened; }

// Table of the four criteria, each read on its own.
std::vector<Role> matching_criteria(const ProbeEvidence& e) {
  std::vector<Role> out;
  bool second_ok = e.second_click.clicked;
  bool leaves = left_page(e.first_click) || left_page(e.second_click);
  if (second_ok && e.element_visible_after && checkable(e.state_before) && checkable(e.state_after_first) &&
      checkable(e.state_after_second) && e.state_before != e.state_after_first &&
      e.state_after_first != e.state_after_second) {
    out.push_back(Role::kTypeA);
  }
  if (e.notice_gone_after_first && e.new_notice_detected) out.push_back(Role::kTypeB);
  if (second_ok && !leaves && !e.new_notice_detected && e.state_after_first == e.state_before &&
      e.state_after_second == e.state_before) {
    out.push_back(Role::kTypeC);
  }
  if (!second_ok && !e.new_notice_detected && !leaves) out.push_back(Role::kTypeD);
  return out;
}

std::vector<ClickOutcome> outcomes() {
  std::vector<ClickOutcome> v;
  v.push_back({true, ClickError::kNone, false, false});
  v.push_back({false, ClickError::kNotInteractable, false, false});
  v.push_back({false, ClickError::kIntercepted, false, false});
  v.push_back({true, ClickError::kNone, true, false});
  v.push_back({true, ClickError::kNone, false, true});
  return v;
}

}  // namespace

TEST_SUITE("probe") {

TEST_CASE("roles over the whole evidence space") {
  const ElementState states[] = {ElementState::kSelected, ElementState::kNotSelected, ElementState::kStateless,
                                 ElementState::kGone};
  std::map<Role, int> seen;
  int total = 0;
  for (const auto& c1 : outcomes()) {
    for (const auto& c2 : outcomes()) {
      for (auto s0 : states) {
        for (auto s1 : states) {
          for (auto s2 : states) {
            for (int bits = 0; bits < 16; ++bits) {
              ProbeEvidence e;
              e.first_click = c1;
              e.second_click = c2;
              e.state_before = s0;
              e.state_after_first = s1;
              e.state_after_second = s2;
              e.notice_gone_after_first = bits & 1;
              e.new_notice_detected = bits & 2;
              e.element_visible_after = bits & 4;
              e.dom_changed = bits & 8;

              auto d = cp::probe::assign_role(e);
              auto again = cp::probe::assign_role(e);
              REQUIRE(d.role == again.role);
              REQUIRE(d.low_confidence == again.low_confidence);

              auto crit = matching_criteria(e);
              bool probeable = c1.clicked && !left_page(c1);
              Role want = !probeable || crit.empty() ? Role::kUnknown : crit.front();
              CAPTURE(bits);
              CHECK(d.role == want);
              if (d.low_confidence) {
                CHECK(d.role == Role::kTypeC);
                CHECK_FALSE(e.dom_changed);
              }
              ++seen[d.role];
              ++total;
            }
          }
        }
      }
    }
  }
  CHECK(total == 5 * 5 * 64 * 16);
  for (Role r : {Role::kTypeA, Role::kTypeB, Role::kTypeC, Role::kTypeD, Role::kUnknown}) CHECK(seen[r] > 0);
}

TEST_CASE("named evidence") {
  ProbeEvidence toggle;
  toggle.first_click = toggle.second_click = {true, ClickError::kNone, false, false};
  toggle.state_before = ElementState::kNotSelected;
  toggle.state_after_first = ElementState::kSelected;
  toggle.state_after_second = ElementState::kNotSelected;
  toggle.element_visible_after = true;
  toggle.dom_changed = true;
  CHECK(cp::probe::assign_role(toggle).role == Role::kTypeA);

  ProbeEvidence more;
  more.first_click = {true, ClickError::kNone, false, false};
  more.second_click = {false, ClickError::kNotInteractable, false, false};
  more.state_before = ElementState::kStateless;
  more.state_after_first = more.state_after_second = ElementState::kGone;
  more.notice_gone_after_first = true;
  more.new_notice_detected = true;
  more.dom_changed = true;
  CHECK(cp::probe::assign_role(more).role == Role::kTypeB);

  ProbeEvidence tab = toggle;
  tab.state_before = tab.state_after_first = tab.state_after_second = ElementState::kStateless;
  CHECK(cp::probe::assign_role(tab).role == Role::kTypeC);
  CHECK_FALSE(cp::probe::assign_role(tab).low_confidence);
  tab.dom_changed = false;
  CHECK(cp::probe::assign_role(tab).low_confidence);

  ProbeEvidence submit = more;
  submit.new_notice_detected = false;
  CHECK(cp::probe::assign_role(submit).role == Role::kTypeD);

  ProbeEvidence covered = submit;
  covered.first_click = {false, ClickError::kIntercepted, false, false};
  CHECK(cp::probe::assign_role(covered).role == Role::kUnknown);

  ProbeEvidence link = submit;
  link.first_click.url_changed = true;
  CHECK(cp::probe::assign_role(link).role == Role::kUnknown);
}

TEST_CASE("evidence serializes") {
  ProbeEvidence e;
  nlohmann::json j = e;
  CHECK(j.contains("first_click"));
  CHECK(j["state_before"] == "STATELESS");
}

}  // TEST_SUITE
