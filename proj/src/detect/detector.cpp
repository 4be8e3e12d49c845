#include "cookiepilot/detect/detector.hpp"

#include <future>
#include <semaphore>

#include "cookiepilot/dom/stacking.hpp"
#include "cookiepilot/driver/session.hpp"
#include "cookiepilot/error.hpp"
#include "cookiepilot/text.hpp"
#include "cookiepilot/url.hpp"

namespace cookiepilot::detect {
namespace {

constexpr double kTieWindow = 0.01;
constexpr double kMinFrameAreaFraction = 0.10;
constexpr std::ptrdiff_t kExternalInFlight = 4;

}  // namespace

std::string extract_candidate_text(const dom::PageSnapshot& page, const dom::ElementSnapshot& el,
                                   std::size_t max_tokens) {
  dom::PageIndex index(page);
  auto root = index.index_of(el.node_id);
  if (!root) return {};
  std::vector<std::size_t> nodes{*root};
  auto desc = index.descendants(*root);
  nodes.insert(nodes.end(), desc.begin(), desc.end());

  std::string joined;
  for (std::size_t n : nodes) {
    const dom::ElementSnapshot& e = index.at(n);
    if (!dom::is_visible(e)) continue;
    std::string piece = e.own_text;
    if (piece.empty() && dom::is_interactive(e)) {
      if (const std::string* aria = e.attribute("aria-label")) piece = *aria;
    }
    if (piece.empty()) continue;
    joined += ' ';
    joined += piece;
  }
  return text::truncate_tokens(text::normalize_whitespace(joined), max_tokens);
}

int interactive_descendants(const dom::PageSnapshot& page, const dom::ElementSnapshot& el) {
  dom::PageIndex index(page);
  auto root = index.index_of(el.node_id);
  if (!root) return 0;
  int count = 0;
  for (std::size_t n : index.descendants(*root)) {
    const auto& e = index.at(n);
    if (dom::is_visible(e) && dom::is_interactive(e)) ++count;
  }
  return count;
}

std::vector<NoticeCandidate> score_candidates(const dom::PageSnapshot& page,
                                              const ClassifierHandle& h) {
  h.validate();
  std::vector<NoticeCandidate> out;
  for (auto& el : dom::stacking_candidates(page)) {
    NoticeCandidate c;
    c.concatenated_text = extract_candidate_text(page, el, h.max_tokens);
    c.element = std::move(el);
    out.push_back(std::move(c));
  }

  const ClassifierHandle baseline{ClassifierKind::kBaselineLexical, h.threshold, std::nullopt,
                                  h.max_tokens, h.timeout_ms};
  auto score_one = [&](NoticeCandidate& c) {
    int interactive = interactive_descendants(page, c.element);
    if (h.kind == ClassifierKind::kExternalHttp) {
      try {
        c.score = classify(h, c.concatenated_text, interactive);
        return;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kClassifierUnavailable) throw;
        c.degraded = true;
      }
    }
    c.score = classify(baseline, c.concatenated_text, interactive);
  };

  if (h.kind == ClassifierKind::kExternalHttp) {
    std::counting_semaphore<kExternalInFlight> slots(kExternalInFlight);
    std::vector<std::future<void>> pending;
    for (auto& c : out) {
      pending.push_back(std::async(std::launch::async, [&slots, &score_one, &c] {
        slots.acquire();
        try {
          score_one(c);
        } catch (...) {
          slots.release();
          throw;
        }
        slots.release();
      }));
    }
    for (auto& f : pending) f.get();
  } else {
    for (auto& c : out) score_one(c);
  }
  return out;
}

std::optional<NoticeCandidate> detect_notice(const dom::PageSnapshot& page,
                                             const ClassifierHandle& h) {
  std::optional<NoticeCandidate> best;
  for (auto& c : score_candidates(page, h)) {
    if (c.score < h.threshold) continue;
    if (!best || c.score > best->score + kTieWindow) best = std::move(c);
  }
  return best;
}

bool same_origin(const std::string& page_url, const std::string& other) {
  return url::origin(url::resolve(page_url, other)) == url::origin(page_url);
}

std::optional<LocatedNotice> locate_notice(driver::Session& session, const dom::PageSnapshot& top,
                                           const ClassifierHandle& h) {
  if (auto found = detect_notice(top, h)) {
    return LocatedNotice{std::move(*found), std::nullopt, top};
  }
  for (const auto& e : top.elements) {
    if (e.tag_name != "iframe" || !dom::is_visible(e)) continue;
    if (e.bbox.area() <= kMinFrameAreaFraction * top.viewport.area()) continue;
    const std::string* src = e.attribute("src");
    if (src && !same_origin(top.url, *src)) continue;
    session.switch_to_frame(e.selector_path);
    dom::PageSnapshot inner = session.snapshot();
    try {
      if (auto found = detect_notice(inner, h)) {
        return LocatedNotice{std::move(*found), e.selector_path, std::move(inner)};
      }
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kEmptyPage) throw;
    }
    session.switch_to_top();
  }
  return std::nullopt;
}

}  // namespace cookiepilot::detect
