// Fits the baseline notice scorer by L2-regularized logistic regression
// and prints the weights in the form used by src/detect/baseline_weights.cpp.
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cookiepilot/detect/classifier.hpp"
#include "cookiepilot/detect/detector.hpp"
#include "cookiepilot/driver/session.hpp"
#include "cookiepilot/fixture/browser.hpp"
#include "cookiepilot/fixture/harness.hpp"

namespace cp = cookiepilot;
using cp::detect::LexicalFeatures;

namespace {

struct Sample {
  LexicalFeatures f;
  int label = 0;
  std::string origin;
};

std::vector<Sample> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<Sample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    Sample s;
    s.f = cp::detect::extract_features(j.at("text").get<std::string>(), 0);
    s.label = j.at("label").get<int>();
    s.origin = j.at("text").get<std::string>();
    out.push_back(s);
  }
  return out;
}

// Every stacking candidate on the landing page of every fixture site,
// labeled by whether it is the site's notice container.
std::vector<Sample> fixture_candidates(const std::string& dir) {
  auto sites = cp::fixture::load_sites(dir);
  cp::fixture::WebDriverServer server(sites);
  server.start();
  auto config = cp::fixture::fixture_config(server.endpoint());
  auto session = cp::driver::open_session(config.driver_endpoint, true, config.session);
  std::vector<Sample> out;
  for (const auto& site : sites) {
    if (!site.failure.empty() || !site.expected.frame.empty()) continue;
    cp::dom::PageSnapshot page;
    try {
      page = session.reset(cp::measure::domain_url(config, site.domain));
    } catch (const std::exception&) {
      continue;
    }
    for (const auto& el : page.elements) {
      Sample s;
      auto text = cp::detect::extract_candidate_text(page, el);
      if (text.empty()) continue;
      s.f = cp::detect::extract_features(text, cp::detect::interactive_descendants(page, el));
      s.label = el.node_id == site.expected.notice ? 1 : 0;
      s.origin = site.domain + "#" + el.node_id;
      if (s.label || el.parent_id.empty()) out.push_back(s);
    }
  }
  session.close();
  server.stop();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calibrate the baseline notice scorer"};
  std::string corpus = std::string(COOKIEPILOT_FIXTURES_DIR) + "/classifier/labeled.jsonl";
  std::string sites = std::string(COOKIEPILOT_FIXTURES_DIR) + "/sites";
  double l2 = 0.01;
  int epochs = 20000;
  app.add_option("--corpus", corpus);
  app.add_option("--sites", sites);
  app.add_option("--l2", l2);
  app.add_option("--epochs", epochs);
  CLI11_PARSE(app, argc, argv);

  auto samples = read_corpus(corpus);
  auto extra = fixture_candidates(sites);
  samples.insert(samples.end(), extra.begin(), extra.end());

  cp::detect::BaselineWeights w;
  const double lr = 0.05;
  const double n = static_cast<double>(samples.size());
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::array<double, LexicalFeatures::kSize> grad{};
    double grad_b = 0;
    for (const auto& s : samples) {
      double err = cp::detect::baseline_score(s.f, w) - s.label;
      for (std::size_t i = 0; i < LexicalFeatures::kSize; ++i) grad[i] += err * s.f.values[i];
      grad_b += err;
    }
    for (std::size_t i = 0; i < LexicalFeatures::kSize; ++i) w.w[i] -= lr * (grad[i] / n + l2 * w.w[i]);
    w.bias -= lr * grad_b / n;
    // Keeps the score monotone in lexicon hits.
    w.w[LexicalFeatures::kLexiconHits] = std::max(0.0, w.w[LexicalFeatures::kLexiconHits]);
  }

  int before = 0;
  for (const auto& s : samples) {
    before += (cp::detect::baseline_score(s.f, cp::detect::default_baseline_weights()) >= 0.5) == (s.label == 1);
  }
  std::cerr << "current weights: " << before << "/" << samples.size() << " correct\n";
  int correct = 0;
  for (const auto& s : samples) {
    double p = cp::detect::baseline_score(s.f, w);
    bool hit = (p >= 0.5) == (s.label == 1);
    correct += hit;
    if (!hit) std::cerr << "misclassified " << s.origin << " label " << s.label << " p " << p << "\n";
  }
  std::cerr << correct << "/" << samples.size() << " correct\n";
  std::cout.precision(3);
  std::cout << std::fixed << "{{";
  for (std::size_t i = 0; i < LexicalFeatures::kSize; ++i) std::cout << (i ? ", " : "") << w.w[i];
  std::cout << "}, " << w.bias << "}\n";
}
