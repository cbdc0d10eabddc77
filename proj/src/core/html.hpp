// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Forgiving tag-level HTML scan for offered-action harvesting: anchors and
// forms only, no DOM. Good enough to find what a served page lets the user
// click or submit.

#ifndef WAFMODEL_CORE_HTML_HPP
#define WAFMODEL_CORE_HTML_HPP

#include <optional>
#include <string>
#include <vector>

namespace waf {

struct HtmlLink {
    std::string href;
};

struct HtmlFormInput {
    std::string name;
    std::string value; // default / hidden value
};

struct HtmlForm {
    std::string action; // may be empty = current URL
    std::string method; // upper-cased, defaults to GET
    std::vector<HtmlFormInput> inputs;
};

struct HtmlScan {
    std::vector<HtmlLink> links;
    std::vector<HtmlForm> forms;
};

HtmlScan scan_html(const std::string& body);

// Decodes the handful of entities that matter in attribute values
// (&amp; &lt; &gt; &quot; &#39; &#x..; &#..;).
std::string html_entity_decode(const std::string& text);

// Splits an absolute or server-relative URL into routable parts.
struct UrlParts {
    std::string scheme; // empty for relative references
    std::string host;
    int port = 0;       // 0 = scheme default
    std::string target; // path[?query], always starting with '/'
};

// RFC 3986-style reference resolution against a base (scheme http assumed).
// Returns nullopt for non-HTTP schemes (javascript:, mailto:, data:, ...).
std::optional<UrlParts> resolve_url(const UrlParts& base, const std::string& reference);

std::optional<UrlParts> parse_url(const std::string& url);

} // namespace waf

#endif
