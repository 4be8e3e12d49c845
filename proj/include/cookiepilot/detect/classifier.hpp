#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace cookiepilot::detect {

enum class ClassifierKind { kBaselineLexical, kExternalHttp };

struct ClassifierHandle {
  ClassifierKind kind = ClassifierKind::kBaselineLexical;
  double threshold = 0.5;
  std::optional<std::string> endpoint;  // required for kExternalHttp
  std::size_t max_tokens = 256;
  int timeout_ms = 5000;

  // Throws Error(kConfig) when an external handle has no endpoint.
  void validate() const;

  static ClassifierHandle baseline() { return {}; }
  static ClassifierHandle external(std::string url) {
    ClassifierHandle h;
    h.kind = ClassifierKind::kExternalHttp;
    h.endpoint = std::move(url);
    return h;
  }
};

// Feature vector of the baseline scorer. Length buckets count only
// tokens outside the consent lexicon, so adding lexicon words can never
// move a text into a different bucket.
struct LexicalFeatures {
  static constexpr std::size_t kSize = 6;
  enum Index { kLexiconHits, kActionVerbs, kInteractive, kShort, kMedium, kLong };
  std::array<double, kSize> values{};
};

struct BaselineWeights {
  std::array<double, LexicalFeatures::kSize> w{};
  double bias = 0;
};

// Frozen output of tools/calibrate_baseline over fixtures/classifier.
const BaselineWeights& default_baseline_weights();

LexicalFeatures extract_features(std::string_view text, int interactive_count);
double baseline_score(const LexicalFeatures& f, const BaselineWeights& weights);

// Probability that `text` comes from a cookie notice. The baseline is a
// pure function of its inputs. The external kind throws
// Error(kClassifierUnavailable) on any transport or protocol failure.
double classify(const ClassifierHandle& h, std::string_view text);
double classify(const ClassifierHandle& h, std::string_view text, int interactive_count);

}  // namespace cookiepilot::detect
