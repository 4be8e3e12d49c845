#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "cookiepilot/error.hpp"
#include "cookiepilot/store/enforcement_db.hpp"
#include "unit/support.hpp"

namespace cp = cookiepilot;
using cp::store::EnforcementDb;
using cp::store::EnforcementRecord;
using cp::store::RecordStatus;

namespace {

EnforcementRecord plan_record(const std::string& domain, const std::string& when = "2026-01-01T00:00:00Z") {
  EnforcementRecord r;
  r.domain = domain;
  r.region = "eu";
  r.generated_at = when;
  r.status = RecordStatus::kPlan;
  r.notice_selector = {"#notice", cp::dom::SelectorStrategy::kById};
  r.serialized_notice = "button0 - manage || button1 - accept ** switch2 - ads, selected || button3 - save <end>";
  r.plan_text = "Click button0 ** Click switch2 | Click button3.";
  cp::store::EnforcementStep manage{0, "button0", {"#manage", cp::dom::SelectorStrategy::kById}, std::nullopt, 1000};
  cp::store::EnforcementStep ads{1, "switch2", {"[name=\"ads\"]", cp::dom::SelectorStrategy::kByAttrCombo},
                                 cp::SettingState::kSelected, 1000};
  cp::store::EnforcementStep save{1, "button3", {"#notice > div:nth-child(2) > button:nth-child(1)",
                                                 cp::dom::SelectorStrategy::kByNthChildChain},
                                  std::nullopt, 1000};
  r.steps = {manage, ads, save};
  return r;
}

EnforcementRecord accept_only(const std::string& domain) {
  EnforcementRecord r;
  r.domain = domain;
  r.region = "eu";
  r.generated_at = "2026-01-01T00:00:00Z";
  r.status = RecordStatus::kAcceptOnly;
  r.notice_selector = {"div.cookie-bar", cp::dom::SelectorStrategy::kByAttrCombo};
  r.serialized_notice = "button0 - got it <end>";
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("sha256 test vectors") {
  CHECK(cp::store::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(cp::store::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("registrable domain") {
  CHECK(cp::store::registrable_domain("www.Example.COM.") == "example.com");
  CHECK(cp::store::registrable_domain("askubuntu.com") == "askubuntu.com");
  CHECK(cp::store::registrable_domain("  WWW.news.example.org ") == "news.example.org");
}

TEST_CASE("record json round trip") {
  auto r = plan_record("example.com");
  CHECK(cp::store::record_from_json(cp::store::record_to_json(r)) == r);
  auto a = accept_only("b.example");
  CHECK(cp::store::record_from_json(cp::store::record_to_json(a)) == a);
}

TEST_CASE("validation") {
  auto bad = plan_record("example.com");
  bad.steps.clear();
  CHECK_THROWS_WITH_AS(cp::store::validate_record(bad), doctest::Contains("ValidationFailed"), cp::Error);

  bad = accept_only("example.com");
  bad.steps = plan_record("example.com").steps;
  CHECK_THROWS_AS(cp::store::validate_record(bad), cp::Error);

  bad = plan_record("WWW.Example.com");
  CHECK_THROWS_AS(cp::store::validate_record(bad), cp::Error);

  bad = plan_record("example.com", "yesterday");
  CHECK_THROWS_AS(cp::store::validate_record(bad), cp::Error);

  bad = plan_record("example.com");
  bad.steps[1].selector = bad.notice_selector;
  CHECK_THROWS_AS(cp::store::validate_record(bad), cp::Error);

  EnforcementRecord err;
  err.domain = "example.com";
  err.region = "eu";
  err.generated_at = "2026-01-01T00:00:00Z";
  err.status = RecordStatus::kError;
  CHECK_THROWS_AS(cp::store::validate_record(err), cp::Error);
  err.error_stage = "navigate";
  CHECK_NOTHROW(cp::store::validate_record(err));
}

TEST_CASE("put, get and stale writes") {
  EnforcementDb db(":memory:");
  auto r = plan_record("example.com", "2026-02-01T00:00:00Z");
  db.put(r);
  auto got = db.get("example.com", "eu");
  REQUIRE(got);
  CHECK(*got == r);
  CHECK_FALSE(db.get("example.com", "us"));

  auto older = accept_only("example.com");
  older.generated_at = "2026-01-01T00:00:00Z";
  CHECK_THROWS_WITH_AS(db.put(older), doctest::Contains("StaleWrite"), cp::Error);
  CHECK(db.get("example.com", "eu")->status == RecordStatus::kPlan);

  auto newer = accept_only("example.com");
  newer.generated_at = "2026-03-01T00:00:00Z";
  db.put(newer);
  CHECK(db.get("example.com", "eu")->status == RecordStatus::kAcceptOnly);

  auto invalid = plan_record("example.com", "2026-04-01T00:00:00Z");
  invalid.steps.clear();
  CHECK_THROWS_AS(db.put(invalid), cp::Error);
  CHECK(db.get("example.com", "eu")->generated_at == "2026-03-01T00:00:00Z");
}

TEST_CASE("records survive reopening") {
  auto path = testsupport::temp_path("db") + ".sqlite";
  {
    EnforcementDb db(path);
    db.put(plan_record("b.example"));
    db.put(accept_only("a.example"));
  }
  EnforcementDb db(path);
  auto all = db.records("eu");
  REQUIRE(all.size() == 2);
  CHECK(all[0].domain == "a.example");
  CHECK(all[1].domain == "b.example");
  std::filesystem::remove(path);
}

TEST_CASE("export is byte deterministic and independent of insertion order") {
  EnforcementDb one(":memory:");
  one.put(plan_record("b.example"));
  one.put(accept_only("a.example"));
  EnforcementDb two(":memory:");
  two.put(accept_only("a.example"));
  two.put(plan_record("b.example"));
  std::string first = one.export_bundle("eu");
  CHECK(first == one.export_bundle("eu"));
  CHECK(first == two.export_bundle("eu"));

  auto path = testsupport::temp_path("bundle") + ".json";
  one.export_bundle("eu", path);
  CHECK(slurp(path) == first);
  std::filesystem::remove(path);

  CHECK_THROWS_WITH_AS(one.export_bundle("us"), doctest::Contains("EmptyRegion"), cp::Error);
}

TEST_CASE("manifest hash covers the compact records array") {
  EnforcementDb db(":memory:");
  db.put(plan_record("b.example"));
  db.put(accept_only("a.example"));
  std::string bytes = db.export_bundle("eu");
  auto doc = nlohmann::ordered_json::parse(bytes);
  CHECK(doc["manifest"]["content_hash"] == cp::store::sha256_hex(doc["records"].dump()));
  CHECK(doc["manifest"]["record_count"] == 2);
  CHECK(doc["manifest"]["generated_at"] == "2026-01-01T00:00:00Z");

  auto bundle = cp::store::verify_bundle(bytes);
  CHECK(bundle.records.size() == 2);
  CHECK(bundle.records[1] == plan_record("b.example"));
}

TEST_CASE("every single-byte flip is rejected") {
  EnforcementDb db(":memory:");
  db.put(plan_record("b.example"));
  db.put(accept_only("a.example"));
  const std::string bytes = db.export_bundle("eu");
  int rejected = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    for (unsigned char mask : {0x01, 0x20, 0x80}) {
      std::string t = bytes;
      t[i] = static_cast<char>(static_cast<unsigned char>(t[i]) ^ mask);
      try {
        cp::store::verify_bundle(t);
        FAIL("tampered byte " << i << " mask " << int(mask) << " accepted");
      } catch (const cp::Error& e) {
        CHECK(e.code() == cp::ErrorCode::kBundleInvalid);
        ++rejected;
      }
    }
  }
  CHECK(rejected == static_cast<int>(bytes.size() * 3));
}

TEST_CASE("import verifies and stores") {
  EnforcementDb src(":memory:");
  src.put(plan_record("b.example"));
  src.put(accept_only("a.example"));
  std::string bytes = src.export_bundle("eu");

  EnforcementDb dst(":memory:");
  CHECK(dst.import_bundle(bytes) == 2);
  CHECK(dst.export_bundle("eu") == bytes);

  std::string broken = bytes;
  broken[broken.find("button0")] = 'B';
  EnforcementDb empty(":memory:");
  CHECK_THROWS_AS(empty.import_bundle(broken), cp::Error);
  CHECK(empty.records("eu").empty());
}

TEST_CASE("concurrent writers serialize") {
  EnforcementDb db(":memory:");
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&db, t] {
      for (int i = 0; i < 25; ++i) db.put(accept_only("d" + std::to_string(t * 25 + i) + ".example"));
    });
  }
  for (auto& th : threads) th.join();
  CHECK(db.records("eu").size() == 100);
}

}  // TEST_SUITE
