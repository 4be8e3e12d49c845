#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cookiepilot/decide/serialize.hpp"

namespace cookiepilot::decide {

struct PlanStep {
  int view_index = 0;
  ElementTag tag;
  std::string node_id;  // bound model element

  bool operator==(const PlanStep&) const = default;
};

enum class PlanStatus { kOk, kNoOptOut };

// output   := viewplan (" ** " viewplan)* "."
// viewplan := "Click " tag (" | Click " tag)*
struct ClickPlan {
  std::vector<PlanStep> steps;
  std::string rendered;
  PlanStatus status = PlanStatus::kOk;
};

enum class PlanProvider { kRules, kExternal };

struct PlannerConfig {
  std::string endpoint;  // seq2seq service, required for kExternal
  int timeout_ms = 10000;
};

// Produces a validated plan. An accept-only notice yields an empty plan
// with status kNoOptOut. Throws Error(kPlanRejected) when the plan fails
// validate_plan.
ClickPlan plan(const SerializedNotice& sn, PlanProvider provider, const PlannerConfig& config = {});

ClickPlan plan_rules(const NoticeModel& model);

// Throws Error(kPlanSyntaxError) or Error(kUnknownTag).
ClickPlan parse_plan(std::string_view text, const NoticeModel& model);

// Throws Error(kPlanRejected).
void validate_plan(const ClickPlan& plan, const NoticeModel& model);

std::string render_plan(const std::vector<PlanStep>& steps);

// Switch state that leaves the element's non-essential cookies off, or
// nullopt for essential categories, which are left alone.
std::optional<SettingState> target_state(const InteractiveElement& sw);

}  // namespace cookiepilot::decide
