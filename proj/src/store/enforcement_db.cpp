#include "cookiepilot/store/enforcement_db.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <regex>

#include <openssl/evp.h>
#include <sqlite3.h>

#include "cookiepilot/error.hpp"
#include "cookiepilot/text.hpp"

namespace cookiepilot::store {

using nlohmann::ordered_json;

std::string_view status_name(RecordStatus s) {
  switch (s) {
    case RecordStatus::kPlan: return "PLAN";
    case RecordStatus::kAcceptOnly: return "ACCEPT_ONLY";
    case RecordStatus::kNoNotice: return "NO_NOTICE";
    case RecordStatus::kDedicatedPage: return "DEDICATED_PAGE";
    case RecordStatus::kError: return "ERROR";
  }
  return "ERROR";
}

RecordStatus status_from_name(std::string_view name) {
  if (name == "PLAN") return RecordStatus::kPlan;
  if (name == "ACCEPT_ONLY") return RecordStatus::kAcceptOnly;
  if (name == "NO_NOTICE") return RecordStatus::kNoNotice;
  if (name == "DEDICATED_PAGE") return RecordStatus::kDedicatedPage;
  if (name == "ERROR") return RecordStatus::kError;
  throw Error(ErrorCode::kValidationFailed, "unknown status " + std::string(name));
}

namespace {

ordered_json selector_json(const dom::SelectorPath& s) {
  ordered_json j;
  j["css"] = s.css;
  j["strategy"] = dom::strategy_name(s.strategy);
  return j;
}

dom::SelectorPath selector_from(const nlohmann::json& j) {
  dom::SelectorPath s;
  s.css = j.at("css").get<std::string>();
  s.strategy = dom::strategy_from_name(j.at("strategy").get<std::string>());
  return s;
}

SettingState state_from(std::string_view name) {
  if (name == "SELECTED") return SettingState::kSelected;
  if (name == "NOT_SELECTED") return SettingState::kNotSelected;
  if (name == "STATELESS") return SettingState::kStateless;
  throw Error(ErrorCode::kValidationFailed, "unknown state " + std::string(name));
}

std::size_t entry_count(const std::string& serialized) {
  if (serialized.empty()) return 0;
  std::size_t n = 1;
  for (std::size_t pos = 0; (pos = serialized.find("||", pos)) != std::string::npos; pos += 2) ++n;
  for (std::size_t pos = 0; (pos = serialized.find("**", pos)) != std::string::npos; pos += 2) ++n;
  return n;
}

ordered_json records_json(const std::vector<EnforcementRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  return arr;
}

[[noreturn]] void sqlite_fail(sqlite3* db, const std::string& what) {
  throw Error(ErrorCode::kConfig, what + ": " + sqlite3_errmsg(db));
}

}  // namespace

ordered_json record_to_json(const EnforcementRecord& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["domain"] = r.domain;
  j["region"] = r.region;
  j["generated_at"] = r.generated_at;
  j["status"] = status_name(r.status);
  j["notice_selector"] = selector_json(r.notice_selector);
  j["frame_selector"] = selector_json(r.frame_selector);
  ordered_json steps = ordered_json::array();
  for (const auto& s : r.steps) {
    ordered_json js;
    js["view_index"] = s.view_index;
    js["tag_rendered"] = s.tag_rendered;
    js["selector"] = selector_json(s.selector);
    js["expected_state_before"] =
        s.expected_state_before ? ordered_json(setting_state_name(*s.expected_state_before)) : ordered_json();
    js["delay_after_ms"] = s.delay_after_ms;
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  j["serialized_notice"] = r.serialized_notice;
  j["plan_text"] = r.plan_text;
  j["error_stage"] = r.error_stage;
  return j;
}

EnforcementRecord record_from_json(const nlohmann::json& j) {
  EnforcementRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  r.domain = j.at("domain").get<std::string>();
  r.region = j.at("region").get<std::string>();
  r.generated_at = j.at("generated_at").get<std::string>();
  r.status = status_from_name(j.at("status").get<std::string>());
  r.notice_selector = selector_from(j.at("notice_selector"));
  r.frame_selector = selector_from(j.at("frame_selector"));
  for (const auto& js : j.at("steps")) {
    EnforcementStep s;
    s.view_index = js.at("view_index").get<int>();
    s.tag_rendered = js.at("tag_rendered").get<std::string>();
    s.selector = selector_from(js.at("selector"));
    const auto& st = js.at("expected_state_before");
    if (!st.is_null()) s.expected_state_before = state_from(st.get<std::string>());
    s.delay_after_ms = js.at("delay_after_ms").get<int>();
    r.steps.push_back(std::move(s));
  }
  r.serialized_notice = j.at("serialized_notice").get<std::string>();
  r.plan_text = j.at("plan_text").get<std::string>();
  r.error_stage = j.at("error_stage").get<std::string>();
  return r;
}

void validate_record(const EnforcementRecord& r) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kValidationFailed, r.domain + ": " + why);
  };
  static const std::regex kTimestamp(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)");
  if (r.schema_version != kSchemaVersion) fail("schema_version " + std::to_string(r.schema_version));
  if (r.domain.empty() || registrable_domain(r.domain) != r.domain) fail("domain not normalized");
  if (r.region.empty()) fail("empty region");
  if (!std::regex_match(r.generated_at, kTimestamp)) fail("generated_at '" + r.generated_at + "'");
  if (r.status == RecordStatus::kPlan && r.steps.empty()) fail("PLAN without steps");
  if (r.status != RecordStatus::kPlan && !r.steps.empty()) fail("steps on a non-PLAN record");
  if (r.status == RecordStatus::kError && r.error_stage.empty()) fail("ERROR without stage");
  for (const auto& s : r.steps) {
    if (s.delay_after_ms < 0) fail("negative delay");
    if (s.selector.empty()) fail("step without selector");
    if (s.selector == r.notice_selector && entry_count(r.serialized_notice) > 1) {
      fail("step selector equals notice selector");
    }
  }
}

std::string registrable_domain(std::string_view host) {
  std::string d = text::to_lower(text::normalize_whitespace(host));
  while (!d.empty() && d.back() == '.') d.pop_back();
  if (d.rfind("www.", 0) == 0) d.erase(0, 4);
  return d;
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kConfig, "sha256 failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string render_bundle(const std::vector<EnforcementRecord>& records) {
  ordered_json recs = records_json(records);
  DbManifest m;
  m.record_count = records.size();
  for (const auto& r : records) m.generated_at = std::max(m.generated_at, r.generated_at);
  m.content_hash = sha256_hex(recs.dump());
  ordered_json manifest;
  manifest["schema_version"] = m.schema_version;
  manifest["record_count"] = m.record_count;
  manifest["generated_at"] = m.generated_at;
  manifest["content_hash"] = m.content_hash;
  ordered_json bundle;
  bundle["manifest"] = std::move(manifest);
  bundle["records"] = std::move(recs);
  return bundle.dump(2) + "\n";
}

Bundle verify_bundle(std::string_view bytes) {
  Bundle b;
  try {
    auto j = nlohmann::json::parse(bytes);
    const auto& m = j.at("manifest");
    b.manifest.schema_version = m.at("schema_version").get<int>();
    b.manifest.record_count = m.at("record_count").get<std::size_t>();
    b.manifest.generated_at = m.at("generated_at").get<std::string>();
    b.manifest.content_hash = m.at("content_hash").get<std::string>();
    for (const auto& r : j.at("records")) b.records.push_back(record_from_json(r));
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kBundleInvalid, "unreadable bundle", e.what());
  }
  if (b.manifest.schema_version != kSchemaVersion) throw Error(ErrorCode::kBundleInvalid, "schema version");
  if (b.manifest.record_count != b.records.size()) throw Error(ErrorCode::kBundleInvalid, "record_count");
  if (sha256_hex(records_json(b.records).dump()) != b.manifest.content_hash) {
    throw Error(ErrorCode::kBundleInvalid, "content hash mismatch");
  }
  if (render_bundle(b.records) != bytes) throw Error(ErrorCode::kBundleInvalid, "not in canonical form");
  return b;
}

struct EnforcementDb::Impl {
  sqlite3* db = nullptr;
};

EnforcementDb::EnforcementDb(const std::string& path) : impl_(std::make_unique<Impl>()) {
  if (sqlite3_open(path.c_str(), &impl_->db) != SQLITE_OK) {
    std::string msg = impl_->db ? sqlite3_errmsg(impl_->db) : "out of memory";
    sqlite3_close(impl_->db);
    throw Error(ErrorCode::kConfig, "open " + path + ": " + msg);
  }
  const char* ddl =
      "CREATE TABLE IF NOT EXISTS enforcement ("
      " domain TEXT NOT NULL, region TEXT NOT NULL, generated_at TEXT NOT NULL,"
      " body TEXT NOT NULL, PRIMARY KEY (domain, region))";
  if (sqlite3_exec(impl_->db, ddl, nullptr, nullptr, nullptr) != SQLITE_OK) {
    std::string msg = sqlite3_errmsg(impl_->db);
    sqlite3_close(impl_->db);
    throw Error(ErrorCode::kConfig, "schema: " + msg);
  }
}

EnforcementDb::~EnforcementDb() { sqlite3_close(impl_->db); }

void EnforcementDb::put(const EnforcementRecord& r) {
  validate_record(r);
  std::lock_guard lock(mu_);
  sqlite3* db = impl_->db;
  if (auto existing = get_unlocked_generated_at(r.domain, r.region)) {
    if (*existing > r.generated_at) {
      throw Error(ErrorCode::kStaleWrite, r.domain + "/" + r.region + " has " + *existing);
    }
  }
  sqlite3_stmt* st = nullptr;
  const char* sql =
      "INSERT INTO enforcement (domain, region, generated_at, body) VALUES (?1, ?2, ?3, ?4)"
      " ON CONFLICT(domain, region) DO UPDATE SET generated_at = excluded.generated_at,"
      " body = excluded.body";
  if (sqlite3_prepare_v2(db, sql, -1, &st, nullptr) != SQLITE_OK) sqlite_fail(db, "prepare put");
  std::string body = record_to_json(r).dump();
  sqlite3_bind_text(st, 1, r.domain.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(st, 2, r.region.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(st, 3, r.generated_at.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(st, 4, body.c_str(), -1, SQLITE_TRANSIENT);
  int rc = sqlite3_step(st);
  sqlite3_finalize(st);
  if (rc != SQLITE_DONE) sqlite_fail(db, "put");
}

std::optional<std::string> EnforcementDb::get_unlocked_generated_at(const std::string& domain,
                                                                   const std::string& region) const {
  sqlite3_stmt* st = nullptr;
  if (sqlite3_prepare_v2(impl_->db, "SELECT generated_at FROM enforcement WHERE domain = ?1 AND region = ?2",
                         -1, &st, nullptr) != SQLITE_OK) {
    sqlite_fail(impl_->db, "prepare get");
  }
  sqlite3_bind_text(st, 1, domain.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(st, 2, region.c_str(), -1, SQLITE_TRANSIENT);
  std::optional<std::string> out;
  if (sqlite3_step(st) == SQLITE_ROW) out = reinterpret_cast<const char*>(sqlite3_column_text(st, 0));
  sqlite3_finalize(st);
  return out;
}

std::optional<EnforcementRecord> EnforcementDb::get(const std::string& domain, const std::string& region) const {
  std::lock_guard lock(mu_);
  sqlite3_stmt* st = nullptr;
  if (sqlite3_prepare_v2(impl_->db, "SELECT body FROM enforcement WHERE domain = ?1 AND region = ?2", -1, &st,
                         nullptr) != SQLITE_OK) {
    sqlite_fail(impl_->db, "prepare get");
  }
  sqlite3_bind_text(st, 1, domain.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(st, 2, region.c_str(), -1, SQLITE_TRANSIENT);
  std::optional<EnforcementRecord> out;
  if (sqlite3_step(st) == SQLITE_ROW) {
    out = record_from_json(nlohmann::json::parse(reinterpret_cast<const char*>(sqlite3_column_text(st, 0))));
  }
  sqlite3_finalize(st);
  return out;
}

std::vector<EnforcementRecord> EnforcementDb::records(const std::string& region) const {
  std::lock_guard lock(mu_);
  sqlite3_stmt* st = nullptr;
  if (sqlite3_prepare_v2(impl_->db, "SELECT body FROM enforcement WHERE region = ?1 ORDER BY domain", -1, &st,
                         nullptr) != SQLITE_OK) {
    sqlite_fail(impl_->db, "prepare records");
  }
  sqlite3_bind_text(st, 1, region.c_str(), -1, SQLITE_TRANSIENT);
  std::vector<EnforcementRecord> out;
  while (sqlite3_step(st) == SQLITE_ROW) {
    out.push_back(record_from_json(nlohmann::json::parse(reinterpret_cast<const char*>(sqlite3_column_text(st, 0)))));
  }
  sqlite3_finalize(st);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.domain < b.domain; });
  return out;
}

std::string EnforcementDb::export_bundle(const std::string& region) const {
  auto recs = records(region);
  if (recs.empty()) throw Error(ErrorCode::kEmptyRegion, region);
  return render_bundle(recs);
}

void EnforcementDb::export_bundle(const std::string& region, const std::string& path) const {
  std::string bytes = export_bundle(region);
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kConfig, "cannot write " + tmp);
    out << bytes;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorCode::kConfig, "cannot move bundle to " + path);
}

std::size_t EnforcementDb::import_bundle(std::string_view bytes) {
  Bundle b = verify_bundle(bytes);
  for (const auto& r : b.records) put(r);
  return b.records.size();
}

}  // namespace cookiepilot::store
