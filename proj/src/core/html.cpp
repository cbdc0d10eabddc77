// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/html.hpp"

#include <cctype>
#include <map>

#include "core/bytes.hpp"

namespace waf {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f';
}

// Parses the inside of a tag ("a href=... class=...") into lowercase
// attribute names and entity-decoded values. Quoted and bare values both
// accepted; flag attributes get an empty value.
struct Tag {
    std::string name;
    bool closing = false;
    std::map<std::string, std::string> attrs;
};

std::optional<Tag> parse_tag(std::string_view inner)
{
    Tag tag;
    size_t i = 0;
    while (i < inner.size() && is_space(inner[i])) ++i;
    if (i < inner.size() && inner[i] == '/') {
        tag.closing = true;
        ++i;
    }
    size_t name_start = i;
    while (i < inner.size() && !is_space(inner[i]) && inner[i] != '/') ++i;
    tag.name = ascii_lower(inner.substr(name_start, i - name_start));
    if (tag.name.empty()) return std::nullopt;

    while (i < inner.size()) {
        while (i < inner.size() && (is_space(inner[i]) || inner[i] == '/')) ++i;
        if (i >= inner.size()) break;
        size_t attr_start = i;
        while (i < inner.size() && !is_space(inner[i]) && inner[i] != '=' && inner[i] != '/')
            ++i;
        std::string attr = ascii_lower(inner.substr(attr_start, i - attr_start));
        if (attr.empty()) { ++i; continue; }
        std::string value;
        while (i < inner.size() && is_space(inner[i])) ++i;
        if (i < inner.size() && inner[i] == '=') {
            ++i;
            while (i < inner.size() && is_space(inner[i])) ++i;
            if (i < inner.size() && (inner[i] == '"' || inner[i] == '\'')) {
                char quote = inner[i++];
                size_t vstart = i;
                while (i < inner.size() && inner[i] != quote) ++i;
                value = std::string(inner.substr(vstart, i - vstart));
                if (i < inner.size()) ++i;
            } else {
                size_t vstart = i;
                while (i < inner.size() && !is_space(inner[i])) ++i;
                value = std::string(inner.substr(vstart, i - vstart));
            }
        }
        tag.attrs.emplace(std::move(attr), html_entity_decode(value));
    }
    return tag;
}

} // namespace

std::string html_entity_decode(const std::string& text)
{
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        size_t semi = text.find(';', i + 1);
        if (semi == std::string::npos || semi - i > 10) {
            out.push_back(text[i++]);
            continue;
        }
        std::string_view ent(text.data() + i + 1, semi - i - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else if (!ent.empty() && ent[0] == '#') {
            uint32_t cp = 0;
            bool ok = ent.size() > 1;
            if (ent.size() > 2 && (ent[1] == 'x' || ent[1] == 'X')) {
                for (size_t k = 2; k < ent.size() && ok; ++k) {
                    char c = ent[k];
                    int v = (c >= '0' && c <= '9')   ? c - '0'
                            : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                            : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                                     : -1;
                    if (v < 0) ok = false;
                    else cp = cp * 16 + static_cast<uint32_t>(v);
                }
            } else {
                for (size_t k = 1; k < ent.size() && ok; ++k) {
                    if (ent[k] < '0' || ent[k] > '9') ok = false;
                    else cp = cp * 10 + static_cast<uint32_t>(ent[k] - '0');
                }
            }
            if (!ok || cp == 0 || cp > 0x10FFFF) {
                out.push_back(text[i++]);
                continue;
            }
            // utf-8 encode
            if (cp < 0x80) out.push_back(static_cast<char>(cp));
            else if (cp < 0x800) {
                out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else if (cp < 0x10000) {
                out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else {
                out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            }
        } else {
            out.push_back(text[i++]);
            continue;
        }
        i = semi + 1;
    }
    return out;
}

HtmlScan scan_html(const std::string& body)
{
    HtmlScan scan;
    HtmlForm* open_form = nullptr;

    size_t i = 0;
    while (i < body.size()) {
        size_t lt = body.find('<', i);
        if (lt == std::string::npos) break;
        // skip comments outright
        if (body.compare(lt, 4, "<!--") == 0) {
            size_t end = body.find("-->", lt + 4);
            i = end == std::string::npos ? body.size() : end + 3;
            continue;
        }
        size_t gt = body.find('>', lt + 1);
        if (gt == std::string::npos) break;
        auto tag = parse_tag(std::string_view(body).substr(lt + 1, gt - lt - 1));
        i = gt + 1;
        if (!tag) continue;

        if (tag->name == "a" && !tag->closing) {
            auto it = tag->attrs.find("href");
            if (it != tag->attrs.end() && !it->second.empty())
                scan.links.push_back({it->second});
        } else if (tag->name == "form") {
            if (tag->closing) {
                open_form = nullptr;
            } else {
                HtmlForm form;
                auto a = tag->attrs.find("action");
                if (a != tag->attrs.end()) form.action = a->second;
                auto m = tag->attrs.find("method");
                form.method = m == tag->attrs.end() || m->second.empty()
                                  ? "GET"
                                  : ascii_lower(m->second);
                for (char& c : form.method)
                    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
                scan.forms.push_back(std::move(form));
                open_form = &scan.forms.back();
            }
        } else if (tag->name == "input" && !tag->closing && open_form) {
            auto n = tag->attrs.find("name");
            if (n == tag->attrs.end() || n->second.empty()) continue;
            auto t = tag->attrs.find("type");
            if (t != tag->attrs.end() && ascii_lower(t->second) == "file")
                continue; // file inputs carry no replayable default
            auto v = tag->attrs.find("value");
            open_form->inputs.push_back({n->second, v == tag->attrs.end() ? "" : v->second});
        }
    }
    return scan;
}

std::optional<UrlParts> parse_url(const std::string& url)
{
    UrlParts parts;
    std::string_view rest = url;
    size_t scheme_end = rest.find("://");
    if (scheme_end != std::string_view::npos) {
        parts.scheme = ascii_lower(rest.substr(0, scheme_end));
        if (parts.scheme != "http" && parts.scheme != "https") return std::nullopt;
        rest = rest.substr(scheme_end + 3);
        size_t path_start = rest.find('/');
        std::string_view authority =
            path_start == std::string_view::npos ? rest : rest.substr(0, path_start);
        size_t colon = authority.rfind(':');
        if (colon != std::string_view::npos) {
            int port = 0;
            for (char c : authority.substr(colon + 1)) {
                if (c < '0' || c > '9') return std::nullopt;
                port = port * 10 + (c - '0');
                if (port > 65535) return std::nullopt;
            }
            parts.port = port;
            parts.host = ascii_lower(authority.substr(0, colon));
        } else {
            parts.host = ascii_lower(authority);
        }
        if (parts.port == 0) parts.port = parts.scheme == "https" ? 443 : 80;
        parts.target = path_start == std::string_view::npos
                           ? "/"
                           : std::string(rest.substr(path_start));
    } else {
        parts.target = std::string(rest);
        if (parts.target.empty()) parts.target = "/";
    }
    size_t frag = parts.target.find('#');
    if (frag != std::string::npos) parts.target.resize(frag);
    if (parts.target.empty()) parts.target = "/";
    return parts;
}

std::optional<UrlParts> resolve_url(const UrlParts& base, const std::string& reference)
{
    if (reference.empty()) return std::nullopt;
    // reject non-http schemes: "javascript:", "mailto:", "data:", ...
    size_t colon = reference.find(':');
    size_t slash = reference.find('/');
    if (colon != std::string::npos && (slash == std::string::npos || colon < slash)) {
        std::string scheme = ascii_lower(reference.substr(0, colon));
        if (scheme != "http" && scheme != "https") return std::nullopt;
    }

    if (reference.rfind("http://", 0) == 0 || reference.rfind("https://", 0) == 0)
        return parse_url(reference);

    UrlParts out = base;
    if (reference.rfind("//", 0) == 0)
        return parse_url("http:" + reference);

    std::string ref = reference;
    size_t frag = ref.find('#');
    if (frag != std::string::npos) ref.resize(frag);
    if (ref.empty()) return std::nullopt;

    if (ref[0] == '/') {
        out.target = ref;
        return out;
    }
    if (ref[0] == '?') {
        size_t q = out.target.find('?');
        out.target = (q == std::string::npos ? out.target : out.target.substr(0, q)) + ref;
        return out;
    }
    // relative path: resolve against the base path's directory
    std::string base_path = out.target;
    size_t q = base_path.find('?');
    if (q != std::string::npos) base_path.resize(q);
    size_t last_slash = base_path.rfind('/');
    base_path = last_slash == std::string::npos ? "/" : base_path.substr(0, last_slash + 1);

    std::string merged = base_path + ref;
    // dot-segment removal
    std::vector<std::string> segments;
    size_t pos = 1; // skip leading '/'
    std::string path_part = merged;
    std::string query_part;
    size_t mq = merged.find('?');
    if (mq != std::string::npos) {
        path_part = merged.substr(0, mq);
        query_part = merged.substr(mq);
    }
    bool trailing_slash = !path_part.empty() && path_part.back() == '/';
    while (pos <= path_part.size()) {
        size_t sl = path_part.find('/', pos);
        std::string seg = sl == std::string::npos ? path_part.substr(pos)
                                                  : path_part.substr(pos, sl - pos);
        if (seg == "..") {
            if (!segments.empty()) segments.pop_back();
        } else if (seg != "." && !seg.empty()) {
            segments.push_back(seg);
        }
        if (sl == std::string::npos) break;
        pos = sl + 1;
    }
    std::string rebuilt = "/";
    for (size_t k = 0; k < segments.size(); ++k) {
        rebuilt += segments[k];
        if (k + 1 < segments.size()) rebuilt += "/";
    }
    if (trailing_slash && rebuilt.back() != '/') rebuilt += "/";
    out.target = rebuilt + query_part;
    return out;
}

} // namespace waf
