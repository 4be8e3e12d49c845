#pragma once

#include <string>
#include <vector>

#include "cookiepilot/analyze/notice_model.hpp"
#include "cookiepilot/audit_log.hpp"
#include "cookiepilot/detect/detector.hpp"
#include "cookiepilot/driver/session.hpp"

namespace cookiepilot::probe {
struct ProbeContext;
}

namespace cookiepilot::analyze {

inline constexpr std::size_t kMaxLabelChars = 120;

// aria-label when non-blank, else the element's own visible text, else
// the text of the closest (bbox center distance) text-bearing element
// inside the nearest ancestor that has any. Lowercased, collapsed,
// truncated to kMaxLabelChars. Empty when nothing qualifies.
std::string extract_label(const dom::PageSnapshot& page, const dom::ElementSnapshot& el);

// The <label> operating a checkbox or radio input: an enclosing label or
// one whose `for` names the input's id.
const dom::ElementSnapshot* label_for(const dom::PageSnapshot& page, const dom::ElementSnapshot& input);

// Tab-order elements of the notice followed by hidden input, button and
// anchor descendants that can be operated through a visible <label>.
// Tags and roles are left unset. Throws Error(kContainerGone).
std::vector<InteractiveElement> discover_elements(driver::Session& s, const dom::SelectorPath& notice);

struct OutboundResult {
  std::vector<InteractiveElement> kept;
  // An element promising more options left the page.
  bool dedicated_page = false;
};

// Drops elements that leave the document: anchors to another document,
// target=_blank elements, and ambiguous elements whose probe click
// navigates or opens a tab. `replay` restores the view after each probe
// click. Elements with a checked state are always kept.
OutboundResult filter_outbound(probe::ProbeContext& ctx, const dom::PageSnapshot& page,
                               std::vector<InteractiveElement> elements, int view,
                               const std::vector<dom::SelectorPath>& replay);

struct ExploreOptions {
  int max_view_depth = 2;  // views along one opener chain
};

// Builds and probes every view of the notice located on ctx.url. Stops
// at the click budget and marks the model truncated; elements left
// unprobed are UNKNOWN.
NoticeModel explore_views(probe::ProbeContext& ctx, const detect::LocatedNotice& notice,
                          const detect::ClassifierHandle& detector, ExploreOptions options = {});

}  // namespace cookiepilot::analyze
