#pragma once

#include <map>
#include <random>
#include <string>

#include "cookiepilot/analyze/notice_model.hpp"
#include "cookiepilot/decide/plan.hpp"
#include "cookiepilot/decide/serialize.hpp"

// Random notice models, and an independent simulator that executes a plan
// against a model and judges the final consent state.
namespace testsupport {

struct Generated {
  cookiepilot::NoticeModel model;
  std::map<std::string, std::string> kind;  // node id -> pool name
};

Generated random_model(std::mt19937& rng);

// Empty when the end state keeps every non-essential category off, else the reason.
std::string simulate(const Generated& g, const cookiepilot::decide::ClickPlan& plan);

bool has_reachable_opt_out(const Generated& g);

// Entry-by-entry grammar of a serialized notice, and one switch entry per type A element.
bool grammar_ok(const std::string& text, const cookiepilot::NoticeModel& model);

// Grammar, serialize round trip, plan validity and parse_plan identity.
// Empty on success.
std::string check_round_trip(const cookiepilot::decide::SerializedNotice& sn,
                             const cookiepilot::decide::ClickPlan& plan);

struct FuzzOutcome {
  enum Kind { kEmpty, kNoOptOut, kPlan } kind = kEmpty;
  std::string serialized;
  std::string plan;
  std::string failure;  // empty when every check held
};

FuzzOutcome check_generated(const Generated& g);

}  // namespace testsupport
