#include "cookiepilot/detect/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cookiepilot/error.hpp"
#include "cookiepilot/http_endpoint.hpp"
#include "cookiepilot/text.hpp"

namespace cookiepilot::detect {
namespace {

constexpr double kMaxLexiconHits = 10;
constexpr double kMaxInteractive = 6;
constexpr std::size_t kShortBelow = 8;
constexpr std::size_t kLongAbove = 150;

bool lexicon_word(const std::string& w) {
  static const std::set<std::string> kWords = {"cookie", "cookies", "consent", "gdpr", "privacy",
                                               "tracking"};
  return kWords.count(w) > 0 || w.rfind("personalis", 0) == 0 || w.rfind("personaliz", 0) == 0;
}

bool action_verb(const std::string& w) {
  static const std::set<std::string> kVerbs = {"accept", "agree", "allow", "reject",
                                               "decline", "manage", "settings"};
  return kVerbs.count(w) > 0;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double classify_external(const ClassifierHandle& h, std::string_view text) {
  HttpEndpoint ep;
  try {
    ep = HttpEndpoint::parse(*h.endpoint);
  } catch (const Error& e) {
    throw Error(ErrorCode::kClassifierUnavailable, e.what());
  }
  httplib::Client client(ep.origin);
  client.set_connection_timeout(std::chrono::milliseconds(h.timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(h.timeout_ms));
  client.set_write_timeout(std::chrono::milliseconds(h.timeout_ms));
  nlohmann::json body = {{"text", std::string(text)}};
  auto res = client.Post(ep.path, body.dump(), "application/json");
  if (!res) throw Error(ErrorCode::kClassifierUnavailable, httplib::to_string(res.error()));
  if (res->status != 200) {
    throw Error(ErrorCode::kClassifierUnavailable, "status " + std::to_string(res->status));
  }
  auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.is_object() || !reply.contains("p") ||
      !reply["p"].is_number()) {
    throw Error(ErrorCode::kClassifierUnavailable, "malformed reply");
  }
  double p = reply["p"].get<double>();
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kClassifierUnavailable, "p out of range");
  return p;
}

}  // namespace

void ClassifierHandle::validate() const {
  if (kind == ClassifierKind::kExternalHttp && (!endpoint || endpoint->empty())) {
    throw Error(ErrorCode::kConfig, "external classifier requires an endpoint");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kConfig, "threshold outside [0,1]");
  }
}

LexicalFeatures extract_features(std::string_view text, int interactive_count) {
  const std::vector<std::string> ws = text::words(text);
  double hits = 0;
  std::size_t other_tokens = 0;
  std::set<std::string> verbs;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const std::string& w = ws[i];
    if (lexicon_word(w)) {
      ++hits;
      continue;
    }
    if (w == "third" && i + 1 < ws.size() && ws[i + 1].rfind("part", 0) == 0) {
      ++hits;
      ++i;
      continue;
    }
    if (action_verb(w)) verbs.insert(w);
    ++other_tokens;
  }
  LexicalFeatures f;
  f.values[LexicalFeatures::kLexiconHits] = std::min(hits, kMaxLexiconHits);
  f.values[LexicalFeatures::kActionVerbs] = static_cast<double>(verbs.size());
  f.values[LexicalFeatures::kInteractive] =
      std::min(static_cast<double>(std::max(interactive_count, 0)), kMaxInteractive);
  if (other_tokens < kShortBelow) {
    f.values[LexicalFeatures::kShort] = 1;
  } else if (other_tokens > kLongAbove) {
    f.values[LexicalFeatures::kLong] = 1;
  } else {
    f.values[LexicalFeatures::kMedium] = 1;
  }
  return f;
}

double baseline_score(const LexicalFeatures& f, const BaselineWeights& weights) {
  double z = weights.bias;
  for (std::size_t i = 0; i < LexicalFeatures::kSize; ++i) z += weights.w[i] * f.values[i];
  return sigmoid(z);
}

double classify(const ClassifierHandle& h, std::string_view text, int interactive_count) {
  if (h.kind == ClassifierKind::kExternalHttp) {
    h.validate();
    return classify_external(h, text);
  }
  return baseline_score(extract_features(text, interactive_count), default_baseline_weights());
}

double classify(const ClassifierHandle& h, std::string_view text) {
  return classify(h, text, 0);
}

}  // namespace cookiepilot::detect
