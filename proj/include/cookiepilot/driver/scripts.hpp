#pragma once

#include <string_view>

// Scripts sent through POST /session/{id}/execute/sync. Each begins with
// a marker comment so that test doubles of the browser can recognize
// them without evaluating JavaScript.
namespace cookiepilot::driver::scripts {

inline constexpr std::string_view kSnapshotMarker = "/*cookiepilot:snapshot*/";
inline constexpr std::string_view kReadyMarker = "/*cookiepilot:ready*/";
inline constexpr std::string_view kFocusMarker = "/*cookiepilot:focus*/";
inline constexpr std::string_view kActiveMarker = "/*cookiepilot:active*/";
inline constexpr std::string_view kStateMarker = "/*cookiepilot:state*/";
inline constexpr std::string_view kClearStorageMarker = "/*cookiepilot:clear-storage*/";

inline constexpr std::string_view kSnapshot = R"JS(/*cookiepilot:snapshot*/
const skip = new Set(['SCRIPT', 'STYLE', 'NOSCRIPT', 'TEMPLATE']);
const out = [];
let order = 0;
function visit(parent, parentId) {
  let k = 0;
  for (const el of parent.children) {
    if (skip.has(el.tagName)) continue;
    const id = parentId + '/' + (k++);
    const cs = getComputedStyle(el);
    const r = el.getBoundingClientRect();
    const z = cs.position !== 'static' && /^-?\d+$/.test(cs.zIndex) ? parseInt(cs.zIndex, 10) : 'auto';
    const attributes = {};
    for (const a of el.attributes) attributes[a.name] = a.value;
    let text = '';
    for (const n of el.childNodes) if (n.nodeType === Node.TEXT_NODE) text += n.textContent;
    const displayed = cs.display !== 'none' && cs.visibility !== 'hidden' &&
        (el.offsetParent !== null || cs.position === 'fixed');
    out.push({node_id: id, parent_id: parentId, tag_name: el.tagName.toLowerCase(),
              attributes, z_index: z,
              bbox: {x: r.x, y: r.y, width: displayed ? r.width : 0, height: displayed ? r.height : 0},
              displayed, own_text: text.replace(/\s+/g, ' ').trim(), doc_order: order++});
    visit(el, id);
  }
}
visit(document.body, '');
return {url: location.href, title: document.title, ready: document.readyState === 'complete',
        viewport: {width: window.innerWidth, height: window.innerHeight}, elements: out};
)JS";

inline constexpr std::string_view kReady = R"JS(/*cookiepilot:ready*/
return document.readyState;
)JS";

inline constexpr std::string_view kFocus = R"JS(/*cookiepilot:focus*/
const el = arguments[0];
if (!el.hasAttribute('tabindex')) el.setAttribute('tabindex', '-1');
el.focus();
return document.activeElement === el;
)JS";

inline constexpr std::string_view kActive = R"JS(/*cookiepilot:active*/
const container = arguments[0];
const a = document.activeElement;
if (!a || a === document.body || a === document.documentElement) return {node_id: null, inside: false};
const skip = new Set(['SCRIPT', 'STYLE', 'NOSCRIPT', 'TEMPLATE']);
let id = '';
for (let el = a; el && el !== document.body; el = el.parentElement) {
  if (!el.parentElement) return {node_id: null, inside: false};
  let k = 0;
  for (const sib of el.parentElement.children) {
    if (sib === el) break;
    if (!skip.has(sib.tagName)) k++;
  }
  id = '/' + k + id;
}
return {node_id: id, inside: container.contains(a) && a !== container};
)JS";

inline constexpr std::string_view kState = R"JS(/*cookiepilot:state*/
const el = arguments[0];
const cs = getComputedStyle(el);
const r = el.getBoundingClientRect();
const displayed = cs.display !== 'none' && cs.visibility !== 'hidden' &&
    (el.offsetParent !== null || cs.position === 'fixed');
const tag = el.tagName.toLowerCase();
const native = tag === 'input' && (el.type === 'checkbox' || el.type === 'radio');
let control = null;
if (tag === 'label' && el.control && el.control.tagName === 'INPUT' &&
    (el.control.type === 'checkbox' || el.control.type === 'radio')) control = el.control.checked;
return {displayed, width: r.width, height: r.height, native_checkable: native,
        role: el.getAttribute('role'), aria_checked: el.getAttribute('aria-checked'),
        label_control_checked: control};
)JS";

inline constexpr std::string_view kClearStorage = R"JS(/*cookiepilot:clear-storage*/
try { localStorage.clear(); sessionStorage.clear(); } catch (e) {}
return true;
)JS";

}  // namespace cookiepilot::driver::scripts
