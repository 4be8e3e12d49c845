#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cookiepilot/analyze/notice_model.hpp"

namespace cookiepilot::store {

inline constexpr int kSchemaVersion = 1;

enum class RecordStatus { kPlan, kAcceptOnly, kNoNotice, kDedicatedPage, kError };

std::string_view status_name(RecordStatus s);  // "PLAN" ...
RecordStatus status_from_name(std::string_view name);

struct EnforcementStep {
  int view_index = 0;
  std::string tag_rendered;
  dom::SelectorPath selector;
  std::optional<SettingState> expected_state_before;  // switches only
  int delay_after_ms = 1000;

  bool operator==(const EnforcementStep&) const = default;
};

struct EnforcementRecord {
  int schema_version = kSchemaVersion;
  std::string domain;
  std::string region;
  std::string generated_at;  // YYYY-MM-DDTHH:MM:SSZ
  RecordStatus status = RecordStatus::kNoNotice;
  dom::SelectorPath notice_selector;
  // Enforcement must switch into this iframe first. Empty for top level.
  dom::SelectorPath frame_selector;
  std::vector<EnforcementStep> steps;
  std::string serialized_notice;
  std::string plan_text;
  // Pipeline stage that failed, for status ERROR.
  std::string error_stage;

  bool operator==(const EnforcementRecord&) const = default;
};

struct DbManifest {
  int schema_version = kSchemaVersion;
  std::size_t record_count = 0;
  std::string generated_at;
  std::string content_hash;  // sha256 hex of the compact records array

  bool operator==(const DbManifest&) const = default;
};

nlohmann::ordered_json record_to_json(const EnforcementRecord& r);
EnforcementRecord record_from_json(const nlohmann::json& j);

// Throws Error(kValidationFailed).
void validate_record(const EnforcementRecord& r);

// "www.Example.COM." -> "example.com".
std::string registrable_domain(std::string_view host);

std::string utc_now();

std::string sha256_hex(std::string_view bytes);

// Canonical bundle bytes for records already sorted by domain.
std::string render_bundle(const std::vector<EnforcementRecord>& records);

struct Bundle {
  DbManifest manifest;
  std::vector<EnforcementRecord> records;
};

// Accepts only canonical bundles whose hash matches. Throws
// Error(kBundleInvalid).
Bundle verify_bundle(std::string_view bytes);

// Single-writer SQLite store keyed by (domain, region).
class EnforcementDb {
 public:
  // ":memory:" for a private in-memory database.
  explicit EnforcementDb(const std::string& path);
  ~EnforcementDb();
  EnforcementDb(const EnforcementDb&) = delete;
  EnforcementDb& operator=(const EnforcementDb&) = delete;

  // Throws Error(kValidationFailed) or Error(kStaleWrite) when the stored
  // record for the key is newer.
  void put(const EnforcementRecord& r);
  std::optional<EnforcementRecord> get(const std::string& domain, const std::string& region) const;
  std::vector<EnforcementRecord> records(const std::string& region) const;

  // Throws Error(kEmptyRegion).
  std::string export_bundle(const std::string& region) const;
  void export_bundle(const std::string& region, const std::string& path) const;

  // Verifies and stores every record of a bundle.
  std::size_t import_bundle(std::string_view bytes);

 private:
  std::optional<std::string> get_unlocked_generated_at(const std::string& domain,
                                                       const std::string& region) const;

  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable std::mutex mu_;
};

}  // namespace cookiepilot::store
