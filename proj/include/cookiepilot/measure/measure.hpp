#pragma once

#include <string>
#include <vector>

#include "cookiepilot/measure/pipeline.hpp"
#include "cookiepilot/store/enforcement_db.hpp"

namespace cookiepilot::measure {

struct MeasureFlags {
  bool m1 = false;  // notice present
  bool m2 = false;  // exactly one interactable element
  bool m3 = false;  // plan turns off a non-essential setting that was on

  bool operator==(const MeasureFlags&) const = default;
};

// M1: status PLAN, ACCEPT_ONLY or DEDICATED_PAGE. M2: M1 and the
// serialized notice has one entry (DEDICATED_PAGE excluded, the choice
// exists off-notice). M3: a PLAN step toggles a switch whose recorded
// state was the consent-enabled one.
MeasureFlags measure_flags(const store::EnforcementRecord& record);

struct DomainMeasurement {
  std::string domain;
  store::RecordStatus status = store::RecordStatus::kNoNotice;
  MeasureFlags flags;
};

struct MeasurementReport {
  std::string region;
  std::size_t domains_total = 0;
  std::size_t domains_analyzed = 0;
  std::size_t m1_with_notice = 0;
  std::size_t m2_no_choice = 0;
  std::size_t m3_default_enabled = 0;
  std::vector<DomainMeasurement> per_domain;  // sorted by domain
};

// Pure fold. Records with status ERROR count toward domains_total only.
MeasurementReport fold_records(const std::string& region, std::size_t domains_total,
                               const std::vector<store::EnforcementRecord>& records);

// Canonical, timestamp-free JSON text with a trailing newline.
std::string report_json(const MeasurementReport& report);

struct MeasureRun {
  MeasurementReport report;
  std::vector<store::EnforcementRecord> records;  // in input order, skipped domains omitted
  std::size_t failures = 0;
};

// Runs the pipeline over `domains` on `workers` sessions.
MeasureRun measure(const std::vector<std::string>& domains, const PipelineConfig& config, int workers = 4);

std::vector<std::string> read_domain_list(const std::string& path);

}  // namespace cookiepilot::measure
