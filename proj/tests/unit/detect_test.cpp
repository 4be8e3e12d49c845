#include <doctest.h>

#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>

#include "cookiepilot/detect/classifier.hpp"
#include "cookiepilot/detect/detector.hpp"
#include "cookiepilot/dom/selector.hpp"
#include "cookiepilot/dom/stacking.hpp"
#include "cookiepilot/driver/session.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/fixture/harness.hpp"
#include "unit/support.hpp"

namespace cp = cookiepilot;
using cp::detect::ClassifierHandle;
using cp::detect::LexicalFeatures;

namespace {

struct Labeled {
  std::string text;
  int label;
};

std::vector<Labeled> corpus() {
  std::ifstream in(testsupport::fixtures_dir() + "/classifier/labeled.jsonl");
  std::vector<Labeled> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    out.push_back({j["text"], j["label"]});
  }
  return out;
}

// Loopback HTTP stub running on a background thread.
class Stub {
 public:
  explicit Stub(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post(".*", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Stub() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path = "/classify") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

cp::dom::PageSnapshot notice_page() {
  cp::dom::PageSnapshot p;
  p.url = "https://n.test/";
  auto add = [&](std::string id, std::string parent, std::string tag, std::string text, std::optional<int> z) {
    cp::dom::ElementSnapshot e;
    e.node_id = id;
    e.parent_id = parent;
    e.tag_name = tag;
    e.own_text = text;
    e.z_index = z;
    e.displayed = true;
    e.bbox = {0, 0, 400, 100};
    e.doc_order = static_cast<int>(p.elements.size());
    p.elements.push_back(e);
  };
  add("main", "", "main", "Today's weather: sunny with a light breeze in the afternoon.", std::nullopt);
  add("banner", "", "div", "We use cookies to personalise content and analyse our traffic.", 100);
  add("ok", "banner", "button", "Accept", std::nullopt);
  add("no", "banner", "button", "Reject", std::nullopt);
  cp::dom::assign_selectors(p);
  return p;
}

}  // namespace

TEST_SUITE("detect") {

TEST_CASE("baseline F1 on the labeled corpus") {
  auto handle = ClassifierHandle::baseline();
  int tp = 0, fp = 0, fn = 0;
  for (const auto& s : corpus()) {
    bool predicted = cp::detect::classify(handle, s.text) >= handle.threshold;
    tp += predicted && s.label;
    fp += predicted && !s.label;
    fn += !predicted && s.label;
  }
  double precision = tp / double(tp + fp);
  double recall = tp / double(tp + fn);
  double f1 = 2 * precision * recall / (precision + recall);
  MESSAGE("precision " << precision << " recall " << recall << " F1 " << f1);
  CHECK(f1 >= 0.9);
}

TEST_CASE("scores are probabilities and deterministic") {
  auto handle = ClassifierHandle::baseline();
  for (const auto& s : corpus()) {
    double p = cp::detect::classify(handle, s.text);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p == cp::detect::classify(handle, s.text));
  }
  CHECK(cp::detect::classify(handle, "") < 0.5);
}

TEST_CASE("adding consent vocabulary never lowers the score") {
  auto handle = ClassifierHandle::baseline();
  std::mt19937 rng(3);
  const char* lexicon[] = {"cookies", "consent", "privacy", "tracking", "personalised", "GDPR"};
  for (const auto& s : corpus()) {
    std::string text = s.text;
    for (int k = 0; k < 12; ++k) {
      double before = cp::detect::classify(handle, text, 2);
      auto words = std::string(" ") + lexicon[rng() % 6] + " ";
      std::size_t at = rng() % (text.size() + 1);
      while (at < text.size() && text[at] != ' ') ++at;
      text.insert(at, words);
      CHECK(cp::detect::classify(handle, text, 2) >= before);
    }
  }
}

TEST_CASE("feature extraction") {
  auto f = cp::detect::extract_features("We use cookies. Accept or Reject cookies", 2);
  CHECK(f.values[LexicalFeatures::kLexiconHits] == 2);
  CHECK(f.values[LexicalFeatures::kActionVerbs] == 2);
  CHECK(f.values[LexicalFeatures::kInteractive] == 2);
  CHECK(f.values[LexicalFeatures::kShort] == 1);

  auto w = cp::detect::default_baseline_weights();
  CHECK(w.w[LexicalFeatures::kLexiconHits] >= 0);
}

TEST_CASE("handle validation") {
  auto h = ClassifierHandle::external("");
  CHECK_THROWS_WITH_AS(h.validate(), doctest::Contains("Config"), cp::Error);
  auto b = ClassifierHandle::baseline();
  b.threshold = 1.5;
  CHECK_THROWS_AS(b.validate(), cp::Error);
}

TEST_CASE("candidate text and detection on a synthetic page") {
  auto page = notice_page();
  CHECK(cp::detect::extract_candidate_text(page, *page.find("banner")) ==
        "We use cookies to personalise content and analyse our traffic. Accept Reject");
  CHECK(cp::detect::extract_candidate_text(page, *page.find("banner"), 3) == "We use cookies");
  CHECK(cp::detect::interactive_descendants(page, *page.find("banner")) == 2);
  auto found = cp::detect::detect_notice(page, ClassifierHandle::baseline());
  REQUIRE(found);
  CHECK(found->element.node_id == "banner");
  CHECK_FALSE(found->degraded);
}

TEST_CASE("external classifier") {
  Stub stub([](const httplib::Request& req, httplib::Response& res) {
    auto j = nlohmann::json::parse(req.body);
    double p = j["text"].get<std::string>().find("cookies") != std::string::npos ? 0.93 : 0.02;
    res.set_content(nlohmann::json{{"p", p}}.dump(), "application/json");
  });
  auto h = ClassifierHandle::external(stub.url());
  CHECK(cp::detect::classify(h, "we use cookies") == doctest::Approx(0.93));
  CHECK(cp::detect::classify(h, "weather") == doctest::Approx(0.02));
  auto found = cp::detect::detect_notice(notice_page(), h);
  REQUIRE(found);
  CHECK(found->element.node_id == "banner");
  CHECK(found->score == doctest::Approx(0.93));
}

TEST_CASE("external classifier failures") {
  Stub broken([](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
    res.set_content("down", "text/plain");
  });
  Stub garbage([](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"p\": 7}", "application/json");
  });
  for (auto url : {broken.url(), garbage.url(), std::string("http://127.0.0.1:1/classify")}) {
    CAPTURE(url);
    auto h = ClassifierHandle::external(url);
    h.timeout_ms = 500;
    CHECK_THROWS_WITH_AS(cp::detect::classify(h, "cookies"), doctest::Contains("ClassifierUnavailable"),
                         cp::Error);
    // Detection falls back to the baseline and marks the result.
    auto found = cp::detect::detect_notice(notice_page(), h);
    REQUIRE(found);
    CHECK(found->degraded);
    CHECK(found->element.node_id == "banner");
  }
}

TEST_CASE("detected notices are stacking candidates on every fixture") {
  auto& server = testsupport::fixture_server();
  auto config = cp::fixture::fixture_config(server.endpoint());
  auto session = cp::driver::open_session(server.endpoint(), true, config.session);
  for (const auto& site : testsupport::sites()) {
    if (!site.failure.empty()) continue;
    CAPTURE(site.domain);
    auto top = session.reset(cp::measure::domain_url(config, site.domain));
    auto located = cp::detect::locate_notice(session, top, config.classifier);
    if (!located) {
      // The cross-origin fixture is a documented miss.
      CHECK((site.expected.notice.empty() || !site.expected.expect_failure.empty()));
      continue;
    }
    std::vector<std::string> ids;
    for (const auto& c : cp::dom::stacking_candidates(located->page)) ids.push_back(c.node_id);
    CHECK(std::find(ids.begin(), ids.end(), located->candidate.element.node_id) != ids.end());
    CHECK(located->candidate.element.node_id == site.expected.notice);
    CHECK(located->frame.has_value() == !site.expected.frame.empty());
    session.switch_to_top();
  }
}

}  // TEST_SUITE
