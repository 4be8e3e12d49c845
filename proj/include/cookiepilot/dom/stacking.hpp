#pragma once

#include <vector>

#include "cookiepilot/dom/snapshot.hpp"

namespace cookiepilot::dom {

// Driver-reported display state plus non-zero area. Opacity and
// off-viewport position are deliberately not considered.
bool is_visible(const ElementSnapshot& element);

// Natively or ARIA-interactive: buttons, links with href, form controls,
// switch/checkbox/tab roles and explicitly tabbable elements.
bool is_interactive(const ElementSnapshot& element);

// Notice candidates: visible elements with an explicit z-index >= 0 in
// descending z order (ties: later in the document first), followed by
// the first three and last three visible children of <body>. Throws
// Error(kEmptyPage) when nothing is visible.
std::vector<ElementSnapshot> stacking_candidates(const PageSnapshot& page);

}  // namespace cookiepilot::dom
