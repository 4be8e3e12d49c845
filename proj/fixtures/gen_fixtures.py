#!/usr/bin/env python3
"""Writes the scripted fixture corpus under fixtures/.

sites/*.json      scripted websites served by the fixture browser
pages/*.json      static PageSnapshots for the dom tests
classifier/labeled.jsonl  hand-labeled candidate texts
measure_domains.txt       the measurement subset
"""

import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
VIEWPORT_W = 1280

INTERACTIVE = {"button", "a", "input", "label", "select"}


# ---------------------------------------------------------------- nodes

def N(id, tag="div", text="", kids=(), attrs=None, **kw):
    n = {"id": id, "tag": tag}
    if text:
        n["text"] = text
    if attrs:
        n["attrs"] = dict(attrs)
    for k, v in kw.items():
        if v is not None and (v is not False or k == "checked"):
            n[k] = v
    if kids:
        n["children"] = list(kids)
    return n


def hide(target, top=False):
    a = {"op": "hide", "target": target}
    if top:
        a["top"] = True
    return a


def show(target):
    return {"op": "show", "target": target}


def toggle(target=None):
    return {"op": "toggle", "target": target} if target else {"op": "toggle"}


def toggle_display(target):
    return {"op": "toggle_display", "target": target}


def cookie(name="consent"):
    return {"op": "set_cookie", "target": name}


def open_tab(path):
    return {"op": "open_tab", "target": path}


def button(id, text, *actions, attrs=None, **kw):
    a = {"type": "button"}
    a.update(attrs or {})
    return N(id, "button", text, attrs=a, on_click=list(actions) or None, **kw)


def link(id, text, href, attrs=None, **kw):
    a = {"href": href}
    a.update(attrs or {})
    return N(id, "a", text, attrs=a, **kw)


def para(id, text):
    return N(id, "p", text, h=48)


def switch_row(id, label, checked):
    return N(id + "-row", "div", kids=[
        N(id + "-name", "span", label),
        N(id, "button", attrs={"type": "button", "role": "switch", "class": "toggle"},
          checked=checked, on_click=[toggle()]),
    ], attrs={"class": "purpose"})


def checkbox_row(id, label, checked):
    """CMP-style switch: a hidden checkbox operated through its label."""
    return N(id + "-row", "div", kids=[
        N(id + "-label", "label", label, attrs={"for": id, "class": "slider"}, kids=[
            N(id, "input", attrs={"type": "checkbox", "id": id, "name": id}, checked=checked,
              hidden=True),
        ]),
    ], attrs={"class": "purpose"})


def always_active_row(id, label):
    return N(id + "-row", "div", kids=[N(id + "-name", "span", label), N(id + "-note", "span", "Always active")],
             attrs={"class": "purpose"})


# ---------------------------------------------------------------- layout

def layout(node, x, y, w):
    """Stacks children vertically; returns the bottom edge."""
    kids = node.get("children", [])
    h_hint = node.get("h")
    if "frame" in node:
        fy = 0
        for k in node["frame"]["nodes"]:
            fy = layout(k, 0, fy, w) + 4
    if not kids:
        h = h_hint or (32 if node["tag"] in INTERACTIVE else 24)
        node["box"] = [x, y, w, h]
        return y + h
    pad = 8
    cy = y + pad
    for k in kids:
        cy = layout(k, x + pad, cy, w - 2 * pad) + 4
    h = max(cy - y + pad - 4, h_hint or 0)
    node["box"] = [x, y, w, h]
    return y + h


def strip_hints(nodes):
    for n in nodes:
        n.pop("h", None)
        strip_hints(n.get("children", []))
        if "frame" in n:
            strip_hints(n["frame"]["nodes"])


def place(node, x, y, w=VIEWPORT_W, h=None):
    bottom = layout(node, x, y, w)
    if h is not None:
        node["box"][3] = h
    return bottom


def find(nodes, id):
    for n in nodes:
        if n["id"] == id:
            return n
        hit = find(n.get("children", []), id)
        if hit:
            return hit
        if "frame" in n:
            hit = find(n["frame"]["nodes"], id)
            if hit:
                return hit
    return None


# ---------------------------------------------------------------- page chrome

STORIES = {
    "news": ("City council approves new tram line",
             "The council voted on Tuesday to fund the eastern extension, with construction expected to start next spring."),
    "forum": ("Unanswered questions this week",
              "Browse the latest questions from the community, vote on useful answers and help others get unstuck."),
    "shop": ("Autumn collection now in stock",
             "Wool coats, waterproof boots and knitwear for the colder months, with free returns within thirty days."),
    "travel": ("Weekend breaks under two hours away",
               "From lakeside cabins to old town apartments, our editors picked places that are easy to reach by train."),
    "video": ("Trending documentaries",
              "Watch the most talked about series of the month, from deep sea expeditions to the history of jazz."),
    "blog": ("Notes on sourdough hydration",
             "After three months of experiments the loaf that worked best used a wetter dough and a longer cold proof."),
}


def chrome(kind="news"):
    title, story = STORIES[kind]
    header = N("header", "header", kids=[
        link("nav-home", "Home", "/"),
        link("nav-latest", "Latest", "/latest"),
    ])
    main = N("main", "main", kids=[N("headline", "h1", title), para("story", story)])
    footer = N("footer", "footer", kids=[
        link("footer-about", "About us", "/about"),
        link("footer-contact", "Contact", "/contact"),
    ])
    return [header, main, footer]


def page(title, kind, *overlays, top=None):
    """Chrome laid out from the top, overlays laid out where they say."""
    nodes = chrome(kind)
    y = 0
    for n in nodes:
        y = place(n, 0, y) + 4
    for item in overlays:
        node, oy = item[0], item[1]
        h = item[2] if len(item) > 2 else None
        place(node, 0, oy, VIEWPORT_W, h)
        nodes.append(node)
    if top:
        top(nodes)
    return {"title": title, "nodes": nodes}


def banner(id, text_id, text, buttons, z=1000, extra=(), gate="consent", **kw):
    kids = [para(text_id, text), N(id + "-actions", "div", kids=buttons)] + list(extra)
    return N(id, "div", kids=kids, attrs={"id": id, "role": "dialog", "class": "consent"}, z=z, gate=gate, **kw)


def close(*ids, top=False):
    return [hide(i, top=top) for i in ids] + [cookie()]


def site(domain, description, pages, expected, measure=None, failure=None):
    s = {"domain": domain, "description": description, "pages": pages, "expected": expected}
    if measure is not None:
        s["measure"] = measure
    if failure:
        s["failure"] = failure
    return s


def expect(status, plan=None, roles=None, notice="", frame="", failure=""):
    e = {"status": status, "plan": plan or [], "roles": roles or {}, "notice": notice}
    if frame:
        e["frame"] = frame
    if failure:
        e["expect_failure"] = failure
    return e


SITES = []


def add(s):
    SITES.append(s)


# ---------------------------------------------------------------- measurement subset

for domain, kind, title in [("dailyherald.test", "news", "Daily Herald"),
                            ("pixelforum.test", "forum", "Pixel Forum"),
                            ("recipebox.test", "blog", "Recipe Box")]:
    add(site(domain, "no notice", {"/": page(title, kind)}, expect("NO_NOTICE"),
             {"m1": False, "m2": False, "m3": False}))


def quietblog():
    p = page("Quiet Blog", "blog")
    footer = find(p["nodes"], "footer")
    footer["children"].append(link("footer-cookies", "Cookie policy", "/cookies"))
    # re-run layout so the new link gets a box
    y = 0
    for n in p["nodes"]:
        y = place(n, 0, y) + 4
    return p


add(site("quietblog.test", "no notice; footer mentions cookies", {"/": quietblog()}, expect("NO_NOTICE"),
         {"m1": False, "m2": False, "m3": False}))

add(site("gotit-news.test", "single accept button", {"/": page("Got It News", "news", (
    banner("cookie-bar", "cookie-bar-text",
           "We use cookies and similar tracking technologies to run this site. By continuing to browse you agree to our cookie policy.",
           [button("gotit", "Got it!", *close("cookie-bar"))]), 600))},
    expect("ACCEPT_ONLY", roles={"gotit": "D"}, notice="cookie-bar"),
    {"m1": True, "m2": True, "m3": False}))

add(site("okay-weather.test", "single OK button", {"/": page("Okay Weather", "news", (
    banner("cc-window", "cc-message",
           "This website uses cookies to ensure you get the best experience and to remember your privacy choices.",
           [button("cc-ok", "OK", *close("cc-window"))]), 620))},
    expect("ACCEPT_ONLY", roles={"cc-ok": "D"}, notice="cc-window"),
    {"m1": True, "m2": True, "m3": False}))

add(site("streamly.test", "inline switches enabled by default", {"/": page("Streamly", "video", (
    N("consent", "div", attrs={"id": "consent", "class": "consent"}, z=1000, gate="consent", kids=[
        para("consent-text", "We and our partners use cookies to measure audiences and personalise what you watch. Choose which cookies we may use."),
        switch_row("sw-analytics", "Audience measurement", True),
        switch_row("sw-recs", "Personalised recommendations", True),
        N("consent-actions", "div", kids=[
            button("st-save", "Save choices", *close("consent")),
            button("st-accept", "Accept all", *close("consent")),
        ]),
    ]), 380))},
    expect("PLAN", [["sw-analytics", "sw-recs", "st-save"]],
           {"sw-analytics": "A", "sw-recs": "A", "st-save": "D", "st-accept": "D"}, notice="consent"),
    {"m1": True, "m2": False, "m3": True}))


def two_view(prefix, banner_text, prefs_text, rows, prefs_buttons, banner_buttons=None):
    """Banner whose manage button swaps in a preference center."""
    b_id, p_id = prefix + "-banner", prefix + "-prefs"
    bb = banner_buttons or [
        button(prefix + "-accept", "Accept all", *close(b_id)),
        button(prefix + "-manage", "Manage cookies", hide(b_id), show(p_id)),
    ]
    b = banner(b_id, prefix + "-banner-text", banner_text, bb)
    p = N(p_id, "div", attrs={"id": p_id, "role": "dialog", "class": "prefs"}, z=1000, gate="consent",
          hidden=True, kids=[N(prefix + "-prefs-title", "h2", "Privacy preferences"), para(prefix + "-prefs-text", prefs_text)]
          + rows + [N(prefix + "-prefs-actions", "div", kids=prefs_buttons)])
    return b, p


b, p = two_view("sf", "Shopfront uses cookies to keep your basket, measure visits and show relevant offers.",
                "Choose which cookies Shopfront may set. You can change your mind at any time in the footer.",
                [always_active_row("sf-essential", "Strictly necessary cookies"),
                 switch_row("sf-sw-analytics", "Analytics cookies", True),
                 switch_row("sf-sw-ads", "Advertising cookies", True)],
                [button("sf-save", "Save settings", *close("sf-prefs")),
                 button("sf-accept-all", "Accept all", *close("sf-prefs"))])
add(site("shopfront.test", "two views, switches enabled by default",
         {"/": page("Shopfront", "shop", (b, 600), (p, 300))},
         expect("PLAN", [["sf-manage"], ["sf-sw-analytics", "sf-sw-ads", "sf-save"]],
                {"sf-accept": "D", "sf-manage": "B", "sf-sw-analytics": "A", "sf-sw-ads": "A",
                 "sf-save": "D", "sf-accept-all": "D"}, notice="sf-banner"),
         {"m1": True, "m2": False, "m3": True}))

add(site("travelnest.test", "hidden checkboxes behind labels, enabled by default", {"/": page("Travel Nest", "travel", (
    N("tn-notice", "div", attrs={"id": "tn-notice", "class": "cmp"}, z=1000, gate="consent", kids=[
        para("tn-text", "Travel Nest uses cookies for analytics and advertising. Adjust your privacy settings below."),
        checkbox_row("tn-analytics", "Analytics cookies", True),
        checkbox_row("tn-ads", "Advertising cookies", True),
        checkbox_row("tn-functional", "Functional cookies", False),
        N("tn-actions", "div", kids=[
            button("tn-confirm", "Confirm choices", *close("tn-notice")),
            button("tn-allow", "Allow all", *close("tn-notice")),
        ]),
    ]), 360))},
    expect("PLAN", [["tn-analytics", "tn-ads", "tn-confirm"]],
           {"tn-confirm": "D", "tn-allow": "D", "tn-analytics": "A", "tn-ads": "A", "tn-functional": "A"},
           notice="tn-notice"),
    {"m1": True, "m2": False, "m3": True}))

add(site("citypaper.test", "accept and reject on the first layer", {"/": page("City Paper", "news", (
    banner("cp-banner", "cp-text", "We use cookies to personalise content and ads and to analyse our traffic.",
           [button("cp-accept", "Accept", *close("cp-banner")),
            button("cp-reject", "Reject", *close("cp-banner"))]), 600))},
    expect("PLAN", [["cp-reject"]], {"cp-accept": "D", "cp-reject": "D"}, notice="cp-banner"),
    {"m1": True, "m2": False, "m3": False}))

MEASURE_DOMAINS = [s["domain"] for s in SITES]

# ---------------------------------------------------------------- further variants

b, p = two_view("as", "Ask Ubuntu uses cookies to help deliver our services. By clicking accept you agree to our use of cookies.",
                "We use cookies to personalise content, provide social media features and analyse our traffic.",
                [always_active_row("as-necessary", "Strictly necessary cookies"),
                 switch_row("as-performance", "Performance cookies", False),
                 switch_row("as-functional", "Functional cookies", False),
                 switch_row("as-targeting", "Targeting cookies", False)],
                [button("as-confirm", "Confirm my choices", *close("as-prefs")),
                 button("as-accept-all", "Accept all cookies", *close("as-prefs")),
                 button("as-cancel", "Cancel", hide("as-prefs"), show("as-banner"))],
                banner_buttons=[
                    button("as-customize", "Customize settings", hide("as-banner"), show("as-prefs")),
                    button("as-accept", "Accept all cookies", *close("as-banner")),
                ])
b["children"].append(N("as-links", "div", kids=[link("as-policy", "Cookie policy", "/legal/cookie-policy")]))
add(site("askubuntu.test", "two views; the policy link is filtered out",
         {"/": page("Ask Ubuntu", "forum", (b, 560), (p, 200))},
         expect("PLAN", [["as-customize"], ["as-confirm"]],
                {"as-customize": "B", "as-accept": "D", "as-performance": "A", "as-functional": "A",
                 "as-targeting": "A", "as-confirm": "D", "as-accept-all": "D", "as-cancel": "B"},
                notice="as-banner")))

add(site("forumhub.test", "reject non-essential on the first layer", {"/": page("Forum Hub", "forum", (
    banner("fh-banner", "fh-text", "We use cookies and similar technologies to improve your experience and for advertising.",
           [button("fh-accept", "Accept all", *close("fh-banner")),
            button("fh-reject", "Reject non-essential", *close("fh-banner"))]), 600))},
    expect("PLAN", [["fh-reject"]], {"fh-accept": "D", "fh-reject": "D"}, notice="fh-banner")))

add(site("donotallow.test", "negated switch label", {"/": page("Do Not Allow", "blog", (
    N("dna-notice", "div", attrs={"id": "dna-notice", "class": "consent"}, z=1000, gate="consent", kids=[
        para("dna-text", "This site uses cookies. Tick the box below to refuse tracking cookies."),
        switch_row("dna-switch", "Do not allow non-essential cookies", False),
        N("dna-actions", "div", kids=[
            button("dna-save", "Save", *close("dna-notice")),
            button("dna-accept", "Accept", *close("dna-notice")),
        ]),
    ]), 560))},
    expect("PLAN", [["dna-switch", "dna-save"]], {"dna-switch": "A", "dna-save": "D", "dna-accept": "D"},
           notice="dna-notice")))

add(site("onlynecessary.test", "essential-only button", {"/": page("Only Necessary", "shop", (
    banner("on-banner", "on-text", "We use cookies to improve our shop. You can accept all cookies or keep only what the site needs.",
           [button("on-accept", "Accept all cookies", *close("on-banner")),
            button("on-necessary", "Use necessary cookies only", *close("on-banner"))]), 600))},
    expect("PLAN", [["on-necessary"]], {"on-accept": "D", "on-necessary": "D"}, notice="on-banner")))

add(site("binaryrefusal.test", "refusal phrased without reject vocabulary", {"/": page("Binary", "news", (
    banner("br-banner", "br-text", "With your agreement we and our partners use cookies for audience measurement and advertising.",
           [button("br-accept", "Accept & close", *close("br-banner")),
            button("br-continue", "Continue without accepting", *close("br-banner"))]), 600))},
    expect("PLAN", [["br-continue"]], {"br-accept": "D", "br-continue": "D"}, notice="br-banner")))

add(site("consentwall.test", "blocking wall over the page", {"/": page("Consent Wall", "news",
    (N("wall", "div", attrs={"class": "backdrop"}, z=999, gate="consent", h=800), 0, 800),
    (banner("wall-notice", "wall-text", "To continue reading, please tell us whether we may use cookies for advertising and analytics.",
            [button("wall-accept", "Accept", *close("wall-notice", "wall")),
             button("wall-reject", "Reject", *close("wall-notice", "wall"))]), 300))},
    expect("PLAN", [["wall-reject"]], {"wall-accept": "D", "wall-reject": "D"}, notice="wall-notice")))

b, p = two_view("li", "We and our 120 partners store and access information on your device for personalised ads and content.",
                "Some partners process data on the basis of legitimate interest. You can object to this processing below.",
                [switch_row("li-ads", "Personalised ads", False),
                 N("li-object-row", "div", kids=[
                     button("li-object", "Object to legitimate interest", toggle_display("li-objected")),
                     N("li-objected", "span", "Objection recorded", hidden=True)])],
                [button("li-save", "Save & exit", *close("li-prefs"))],
                banner_buttons=[
                    button("li-accept", "Accept all", *close("li-banner")),
                    button("li-manage", "Manage purposes", hide("li-banner"), show("li-prefs")),
                ])
add(site("legitinterest.test", "legitimate-interest objection in the second view",
         {"/": page("Legit", "news", (b, 600), (p, 260))},
         expect("PLAN", [["li-manage"], ["li-object", "li-save"]],
                {"li-accept": "D", "li-manage": "B", "li-ads": "A", "li-object": "C", "li-save": "D"},
                notice="li-banner")))

add(site("dynamicnotice.test", "injected late; settings expand in place", {"/": page("Dynamic", "video", (
    N("dn-notice", "div", attrs={"id": "dn-notice", "class": "consent"}, z=1000, gate="consent", appear_after_ms=15, kids=[
        para("dn-text", "We use cookies to recommend videos and to measure how our service is used."),
        N("dn-actions", "div", kids=[
            button("dn-accept", "Accept all", *close("dn-notice")),
            button("dn-settings", "Cookie settings", toggle_display("dn-panel")),
        ]),
        N("dn-panel", "div", hidden=True, kids=[
            switch_row("dn-sw-analytics", "Analytics", True),
            switch_row("dn-sw-ads", "Advertising", False),
            button("dn-save", "Save choices", *close("dn-notice")),
        ]),
    ]), 360))},
    expect("PLAN", [["dn-settings", "dn-sw-analytics", "dn-save"]],
           {"dn-accept": "D", "dn-settings": "C", "dn-sw-analytics": "A", "dn-sw-ads": "A", "dn-save": "D"},
           notice="dn-notice")))


def frame_page():
    p = page("Framed", "shop")
    iframe = N("cmp-frame", "iframe", attrs={"title": "Consent"}, z=1000, gate="consent",
               frame={"path": "/cmp/notice.html", "nodes": [
                   N("fr-notice", "div", attrs={"id": "fr-notice"}, z=10, kids=[
                       para("fr-text", "We use cookies and process personal data for analytics and advertising."),
                       button("fr-accept", "Accept all", hide("fr-notice"), hide("cmp-frame", top=True), cookie()),
                       button("fr-reject", "Reject all", hide("fr-notice"), hide("cmp-frame", top=True), cookie()),
                   ])]})
    place(iframe, 0, 500, VIEWPORT_W, 300)
    p["nodes"].append(iframe)
    return p


add(site("framedcmp.test", "same-origin iframe", {"/": frame_page()},
         expect("PLAN", [["fr-reject"]], {"fr-accept": "D", "fr-reject": "D"}, notice="fr-notice", frame="cmp-frame")))


def xorigin_page():
    p = frame_page()
    iframe = p["nodes"][-1]
    iframe["attrs"]["src"] = "https://consent.cmpvendor.test/notice.html"
    return p


add(site("xorigin.test", "cross-origin consent frame", {"/": xorigin_page()},
         expect("PLAN", [["fr-reject"]], {}, notice="fr-notice", frame="cmp-frame",
                failure="the notice is served from a cross-origin frame, which detection does not enter")))

dm_b = banner("dm-banner", "dm-text", "We use cookies to deliver and improve our services and to show personalised advertising.",
              [button("dm-accept", "Accept all", *close("dm-banner")),
               button("dm-manage", "Manage options", hide("dm-banner"), show("dm-purposes"))])
dm_p = N("dm-purposes", "div", attrs={"id": "dm-purposes", "class": "prefs"}, z=1000, gate="consent", hidden=True, kids=[
    para("dm-purposes-text", "Our cookie purposes are listed below. Partner specific cookie settings are on the next page."),
    button("dm-accept-all", "Accept all", *close("dm-purposes")),
    button("dm-partners", "Partner settings", hide("dm-purposes"), show("dm-vendors")),
])
dm_v = N("dm-vendors", "div", attrs={"id": "dm-vendors", "class": "prefs"}, z=1000, gate="consent", hidden=True, kids=[
    para("dm-vendors-text", "Choose which partners may set cookies for advertising and measurement."),
    switch_row("dm-sw-adnet", "Ad network cookies", True),
    button("dm-save", "Save", *close("dm-vendors")),
])
add(site("deepmenu.test", "opt-out three layers deep", {"/": page("Deep", "news", (dm_b, 600), (dm_p, 300), (dm_v, 300))},
         expect("PLAN", [["dm-manage"], ["dm-partners"], ["dm-sw-adnet", "dm-save"]],
                {"dm-accept": "D", "dm-manage": "B", "dm-accept-all": "D", "dm-partners": "B"},
                notice="dm-banner",
                failure="the only opt-out sits in a third view, beyond the two-view exploration depth")))

add(site("decorative.test", "decorative button that does nothing", {"/": page("Decorative", "blog", (
    banner("dc-banner", "dc-text", "We use cookies for analytics. You can accept or reject them.",
           [button("dc-accept", "Accept", *close("dc-banner")),
            button("dc-reject", "Reject", *close("dc-banner")),
            button("dc-learn", "Learn more")]), 600))},
    expect("PLAN", [["dc-reject"]], {"dc-accept": "D", "dc-reject": "D", "dc-learn": "C"}, notice="dc-banner")))

add(site("accordion.test", "purpose descriptions expand in place", {"/": page("Accordion", "travel", (
    banner("ac-banner", "ac-text", "We use cookies to remember your searches and to measure our marketing.",
           [button("ac-accept", "Accept all", *close("ac-banner")),
            button("ac-reject", "Reject all", *close("ac-banner")),
            button("ac-purposes", "Show purposes", toggle_display("ac-details"))],
           extra=[para("ac-details", "Search history, campaign measurement, fraud prevention.")]), 560))},
    expect("PLAN", [["ac-reject"]], {"ac-accept": "D", "ac-reject": "D", "ac-purposes": "C"}, notice="ac-banner")))
find(SITES[-1]["pages"]["/"]["nodes"], "ac-details")["hidden"] = True

add(site("newtablinks.test", "links that open tabs are filtered", {"/": page("New Tab", "news", (
    banner("nt-banner", "nt-text", "We use cookies and share data with advertising partners.",
           [button("nt-accept", "Accept", *close("nt-banner")),
            button("nt-reject", "Decline", *close("nt-banner")),
            link("nt-policy", "Privacy policy", "/privacy", attrs={"target": "_blank"}),
            N("nt-vendors", "span", "Vendor list", attrs={"role": "link", "tabindex": "0"},
              on_click=[open_tab("/vendors")])]), 560))},
    expect("PLAN", [["nt-reject"]], {"nt-accept": "D", "nt-reject": "D"}, notice="nt-banner")))

add(site("dedicatedpage.test", "settings only on a separate page", {"/": page("Dedicated", "shop", (
    banner("dp-banner", "dp-text", "This site uses cookies. Visit the cookie settings page to choose which cookies we may use.",
           [button("dp-ok", "Got it", *close("dp-banner")),
            link("dp-settings", "Manage cookie settings", "/cookie-settings")]), 600))},
    expect("DEDICATED_PAGE", roles={"dp-ok": "D"}, notice="dp-banner")))

add(site("essentialswitch.test", "necessary switch left alone", {"/": page("Essential", "blog", (
    N("es-notice", "div", attrs={"id": "es-notice", "class": "consent"}, z=1000, gate="consent", kids=[
        para("es-text", "Choose which cookies we may use on this site. Your privacy choices are stored for a year."),
        switch_row("es-necessary", "Strictly necessary cookies", True),
        switch_row("es-marketing", "Marketing cookies", True),
        N("es-actions", "div", kids=[
            button("es-save", "Save preferences", *close("es-notice")),
            button("es-accept", "Accept all", *close("es-notice")),
        ]),
    ]), 400))},
    expect("PLAN", [["es-marketing", "es-save"]],
           {"es-necessary": "A", "es-marketing": "A", "es-save": "D", "es-accept": "D"}, notice="es-notice")))

add(site("crashing.test", "renderer crashes on load", {"/": page("Crash", "news")}, expect("ERROR"), failure="crash"))

add(site("notfound.test", "front page missing, 404 placeholder rendered",
         {"/welcome": page("Welcome", "blog")}, expect("NO_NOTICE")))


def intercepted_page():
    def cover(nodes):
        accept = find(nodes, "ic-accept")
        x, y, w, h = accept["box"]
        widget = N("chat", "div", "Chat with us", attrs={"class": "chat-widget"}, z=2000, box=[x, y - 4, w, h + 8])
        nodes.append(widget)
    return page("Intercepted", "shop", (
        banner("ic-banner", "ic-text", "We use cookies to run the shop and for marketing. Please make a choice.",
               [button("ic-accept", "Accept all", *close("ic-banner")),
                button("ic-reject", "Reject all", *close("ic-banner"))]), 600), top=cover)


add(site("intercepted.test", "chat widget covers the accept button", {"/": intercepted_page()},
         expect("PLAN", [["ic-reject"]], {"ic-accept": "UNKNOWN", "ic-reject": "D"}, notice="ic-banner")))

b, p = two_view("ns", "We use cookies to improve your experience and to show relevant advertising.",
                "Manage how we use cookies on this site.",
                [switch_row("ns-performance", "Performance", False), switch_row("ns-ads", "Advertising", False)],
                [button("ns-reject-all", "Reject all", *close("ns-prefs")),
                 button("ns-save", "Save", *close("ns-prefs"))],
                banner_buttons=[
                    button("ns-accept", "Accept all", *close("ns-banner")),
                    button("ns-manage", "Manage preferences", hide("ns-banner"), show("ns-prefs")),
                ])
add(site("scientistweekly.test", "reject in the second view", {"/": page("Scientist Weekly", "news", (b, 600), (p, 300))},
         expect("PLAN", [["ns-manage"], ["ns-reject-all"]],
                {"ns-accept": "D", "ns-manage": "B", "ns-performance": "A", "ns-ads": "A",
                 "ns-reject-all": "D", "ns-save": "D"}, notice="ns-banner")))

add(site("brokenreject.test", "reject button without a handler", {"/": page("Broken", "forum", (
    banner("bk-banner", "bk-text", "We use cookies for analytics and advertising on this forum.",
           [button("bk-accept", "Accept cookies", *close("bk-banner")),
            button("bk-reject", "Reject cookies")]), 600))},
    expect("PLAN", [["bk-reject"]], {"bk-accept": "D", "bk-reject": "C"}, notice="bk-banner")))


# ---------------------------------------------------------------- dom pages

def el(node_id, parent, tag, order, attrs=None, text="", box=(0, 0, 100, 30), z="auto", displayed=True):
    return {"node_id": node_id, "parent_id": parent, "tag_name": tag, "attributes": attrs or {},
            "z_index": z, "bbox": {"x": box[0], "y": box[1], "width": box[2] if displayed else 0,
                                   "height": box[3] if displayed else 0},
            "displayed": displayed, "own_text": text, "doc_order": order}


def snapshot(url, elements, title=""):
    for i, e in enumerate(elements):
        e["doc_order"] = i
    return {"url": url, "title": title, "ready": True, "viewport": {"width": 1280, "height": 800},
            "elements": elements}


PAGES = {
    "nth_child_chain": snapshot("https://chain.test/", [
        el("main", "", "main", 0, text="Welcome", box=(0, 0, 1280, 400)),
        el("notice", "", "div", 0, {"id": "notice"}, box=(0, 600, 1280, 200), z=100),
        el("row1", "notice", "div", 0, box=(0, 600, 1280, 40)),
        el("row1-settings", "row1", "button", 0, {"class": "btn"}, "Settings", box=(0, 600, 100, 40)),
        el("row1-accept", "row1", "button", 0, {"class": "accept"}, "Accept", box=(100, 600, 100, 40)),
        el("row2", "notice", "div", 0, box=(0, 650, 1280, 40)),
        el("row2-settings", "row2", "button", 0, {"class": "btn"}, "Settings", box=(0, 650, 100, 40)),
        el("row2-accept", "row2", "button", 0, {"class": "accept"}, "Accept", box=(100, 650, 100, 40)),
    ]),
    "generated_id": snapshot("https://gen.test/", [
        el("banner", "", "div", 0, {"id": "cookie-banner"}, "We use cookies", box=(0, 600, 1280, 200), z=10),
        el("save", "banner", "button", 0, {"id": "x7f3a9bc1", "data-role": "save"}, "Save", box=(0, 700, 100, 40)),
        el("other", "banner", "button", 0, {"id": "btn-1234567"}, "Accept", box=(100, 700, 100, 40)),
    ]),
    "two_overlays": snapshot("https://overlays.test/", [
        el("content", "", "main", 0, text="Story", box=(0, 0, 1280, 800)),
        el("low", "", "div", 0, {"class": "promo"}, "Subscribe", box=(0, 0, 400, 200), z=10),
        el("high", "", "div", 0, {"class": "consent"}, "Cookies", box=(0, 600, 1280, 200), z=20),
        el("hidden-overlay", "", "div", 0, {"class": "modal"}, "Hidden", z=50, displayed=False),
    ]),
    "one_overlay": snapshot("https://overlay.test/", [
        el("h", "", "header", 0, text="Site", box=(0, 0, 1280, 60)),
        el("nav", "", "nav", 0, text="Menu", box=(0, 60, 1280, 40)),
        el("m", "", "main", 0, text="Article", box=(0, 100, 1280, 500)),
        el("aside", "", "aside", 0, text="Related", box=(0, 600, 1280, 100)),
        el("f", "", "footer", 0, text="Footer", box=(0, 700, 1280, 100)),
        el("overlay", "", "div", 0, {"id": "consent-overlay"}, "We use cookies", box=(0, 500, 1280, 300), z=9999),
        el("overlay-btn", "overlay", "button", 0, {}, "OK", box=(10, 700, 80, 30)),
        el("tail", "", "div", 0, text="Tail", box=(0, 800, 1280, 10)),
    ]),
    "no_z": snapshot("https://flat.test/", [
        el("a", "", "header", 0, text="A", box=(0, 0, 1280, 50)),
        el("b", "", "nav", 0, text="B", box=(0, 50, 1280, 50)),
        el("c", "", "main", 0, text="C", box=(0, 100, 1280, 400)),
        el("c1", "c", "p", 0, text="C1", box=(0, 100, 1280, 40)),
        el("d", "", "section", 0, text="D", box=(0, 500, 1280, 100)),
        el("e", "", "aside", 0, text="E", box=(0, 600, 1280, 100)),
        el("f", "", "div", 0, text="F", box=(0, 700, 1280, 50), displayed=False),
        el("g", "", "footer", 0, text="G", box=(0, 750, 1280, 50)),
        el("h", "", "div", 0, text="H", box=(0, 800, 0, 0)),
    ]),
    "tricky_attributes": snapshot("https://tricky.test/", [
        el("root", "", "div", 0, {"class": "wrap is-open"}, box=(0, 0, 1280, 800)),
        el("q1", "root", "button", 0, {"aria-label": "Say \"yes\"", "class": "btn"}, box=(0, 0, 100, 30)),
        el("q2", "root", "button", 0, {"aria-label": "back\\slash", "class": "btn"}, box=(0, 40, 100, 30)),
        el("q3", "root", "button", 0, {"class": "btn active"}, "Same", box=(0, 80, 100, 30)),
        el("q4", "root", "button", 0, {"class": "btn active"}, "Same", box=(0, 120, 100, 30)),
        el("dup1", "root", "span", 0, {"id": "dup"}, "x", box=(0, 160, 10, 10)),
        el("dup2", "root", "span", 0, {"id": "dup"}, "y", box=(0, 170, 10, 10)),
        el("in", "root", "input", 0, {"type": "checkbox", "name": "analytics"}, box=(0, 180, 10, 10)),
    ]),
}


# ---------------------------------------------------------------- classifier corpus

POSITIVE = [
    "We use cookies to improve your experience. Accept Decline",
    "This website uses cookies to ensure you get the best experience on our website. Got it",
    "We and our partners use cookies and similar technologies to personalise content and ads. Accept all Reject all Manage settings",
    "By clicking Accept all cookies you agree to the storing of cookies on your device. Accept all cookies Cookie settings",
    "We value your privacy. We use cookies to enhance your browsing experience and analyse our traffic. Customize Reject all Accept all",
    "Cookie consent. We use necessary cookies to make our site work and optional analytics cookies. Allow all Use necessary cookies only",
    "Your privacy choices. We and our 842 partners store and access information on your device. Agree Disagree More options",
    "This site uses cookies for analytics and personalised content. OK",
    "Privacy preference center. Manage consent preferences. Strictly necessary cookies Always active Performance cookies Functional cookies Confirm my choices",
    "We use cookies and similar tracking technologies. Do not sell or share my personal information. Accept",
    "Cookies help us deliver our services. By using our services you agree to our use of cookies. Learn more Got it",
    "We would like to use cookies to understand how you use the site. Yes I accept No thanks",
    "Can we use optional cookies? These cookies help us keep improving the site. Accept optional cookies Reject optional cookies",
    "Manage cookie preferences. Analytics cookies Advertising cookies Save settings Accept all",
    "Our site uses tracking technologies for measurement and advertising. Allow Refuse",
    "Tell us whether you accept cookies. We use cookies to collect information about how you use this service. Accept additional cookies Reject additional cookies View cookies",
    "GDPR consent. We process your data with your consent for personalised ads and ad measurement. Consent Do not consent Manage options",
    "We use cookies to give you the best online experience. Please let us know if you agree to all of these cookies. Yes I'm happy Settings",
    "This website stores cookies on your computer. These cookies are used to collect information about how you interact with our website. Accept Decline",
    "Cookie notice. We use cookies for essential site functions and to measure performance. Accept all Essential only",
    "Legitimate interest. Some vendors process data without consent. Object to legitimate interest Save & exit",
    "Privacy settings. Marketing cookies Personalisation cookies Statistics cookies Save my choices Accept all",
    "Hi! We use cookies to see how you use our site. Is that ok? Sure No",
    "We care about your privacy. Cookies and third party tools help us improve. Accept Reject Preferences",
    "This site uses cookies from Google to deliver its services and to analyse traffic. Learn more OK got it",
    "You can choose how we use cookies. Select Accept all to agree or Manage to pick categories. Accept all Manage",
    "We use cookies to personalise content and ads, to provide social media features and to analyse our traffic. Allow selection Allow all cookies",
    "Do not allow non-essential cookies. Save Accept",
    "Consent management. Choose which purposes we may use your data for. Save and close Accept all Reject all",
    "Cookies on this site. We'd like to set additional cookies to remember your settings. Accept Reject View cookies",
]

NEGATIVE = [
    "Breaking news: markets fall",
    "Home News Sport Weather Culture",
    "Sign up for our newsletter and get ten percent off your first order. Subscribe",
    "Chat with us. We typically reply in a few minutes. Start chat",
    "About us Contact Careers Press Terms of use",
    "Free shipping on orders over fifty dollars. Shop now",
    "Log in to continue. Email Password Forgot password Log in",
    "City council approves new tram line. The council voted on Tuesday to fund the eastern extension.",
    "Related articles: the best hiking trails in the Alps; ten tips for cheap flights",
    "Download our app for a faster experience. Open app Not now",
    "Privacy policy Terms Sitemap",
    "Add to cart. Size M L XL. Colour navy",
    "Share this story on Facebook Twitter Email",
    "Search products, brands and more. Search",
    "Your basket is empty. Continue shopping",
    "Trending documentaries. Watch the most talked about series of the month.",
    "Comments (32) Sort by newest Load more comments",
    "Enable notifications to get alerts for breaking news. Allow Block",
    "Page not found. The page you are looking for does not exist. Go home",
    "Weekend breaks under two hours away. From lakeside cabins to old town apartments.",
    "Copyright 2024 Example Media Group. All rights reserved.",
    "Accept the terms of service to create an account. Create account",
    "Settings Profile Notifications Billing Sign out",
    "Read our privacy policy to learn how we protect your data when you contact support.",
    "Limited offer: two for one on all winter jackets this weekend only. See offer",
    "Unanswered questions this week. Browse the latest questions from the community.",
    "Skip to main content",
    "Choose your region: Europe Americas Asia Pacific",
    "Rate this recipe. One star Two stars Three stars Four stars Five stars",
    "Live scores. Arsenal 2 Chelsea 1. Full time",
]


def main():
    os.makedirs(os.path.join(HERE, "sites"), exist_ok=True)
    os.makedirs(os.path.join(HERE, "pages"), exist_ok=True)
    os.makedirs(os.path.join(HERE, "classifier"), exist_ok=True)
    seen = set()
    for s in SITES:
        assert s["domain"] not in seen, s["domain"]
        seen.add(s["domain"])
        for pg in s["pages"].values():
            strip_hints(pg["nodes"])
        with open(os.path.join(HERE, "sites", s["domain"] + ".json"), "w") as f:
            json.dump(s, f, indent=1, sort_keys=True)
            f.write("\n")
    for name, p in PAGES.items():
        with open(os.path.join(HERE, "pages", name + ".json"), "w") as f:
            json.dump(p, f, indent=1)
            f.write("\n")
    with open(os.path.join(HERE, "classifier", "labeled.jsonl"), "w") as f:
        for t in POSITIVE:
            f.write(json.dumps({"text": t, "label": 1}) + "\n")
        for t in NEGATIVE:
            f.write(json.dumps({"text": t, "label": 0}) + "\n")
    with open(os.path.join(HERE, "measure_domains.txt"), "w") as f:
        f.write("# measurement subset: 6 notices, 2 of them single-button, 3 with switches on by default\n")
        for d in MEASURE_DOMAINS:
            f.write(d + "\n")
    with open(os.path.join(HERE, "all_domains.txt"), "w") as f:
        for s in SITES:
            f.write(s["domain"] + "\n")
    print(f"{len(SITES)} sites, {len(PAGES)} pages, {len(POSITIVE) + len(NEGATIVE)} labeled texts", file=sys.stderr)


if __name__ == "__main__":
    main()
