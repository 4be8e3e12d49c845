#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cookiepilot/detect/classifier.hpp"
#include "cookiepilot/dom/snapshot.hpp"

namespace cookiepilot::driver {
class Session;
}

namespace cookiepilot::detect {

struct NoticeCandidate {
  dom::ElementSnapshot element;
  std::string concatenated_text;  // whitespace-normalized
  double score = 0;
  // Set when the external classifier failed and the baseline stood in.
  bool degraded = false;
};

// Own text of the element and its visible descendants in document order,
// with aria-labels standing in for text-less interactive elements.
std::string extract_candidate_text(const dom::PageSnapshot& page, const dom::ElementSnapshot& el,
                                   std::size_t max_tokens = 256);

int interactive_descendants(const dom::PageSnapshot& page, const dom::ElementSnapshot& el);

// Every stacking candidate with its score, in stacking order.
std::vector<NoticeCandidate> score_candidates(const dom::PageSnapshot& page,
                                              const ClassifierHandle& h);

std::optional<NoticeCandidate> detect_notice(const dom::PageSnapshot& page,
                                             const ClassifierHandle& h);

// A detected notice plus where it lives. `frame` is set when the notice
// was found inside a same-origin iframe of the top document.
struct LocatedNotice {
  NoticeCandidate candidate;
  std::optional<dom::SelectorPath> frame;
  dom::PageSnapshot page;  // snapshot of the context holding the notice
};

// Runs detect_notice on `top`; if nothing is found, retries inside
// same-origin iframes covering more than 10% of the viewport. Leaves the
// session in the context where the notice was found (top otherwise).
std::optional<LocatedNotice> locate_notice(driver::Session& session, const dom::PageSnapshot& top,
                                           const ClassifierHandle& h);

bool same_origin(const std::string& page_url, const std::string& other);

}  // namespace cookiepilot::detect
