// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/predicate.hpp"

namespace waf {

Regex Regex::compile(const std::string& source)
{
    Regex r;
    r.source_ = source;
    try {
        r.compiled_ = std::regex(source, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw PredicateParseError("bad regex '" + source + "': " + e.what());
    }
    return r;
}

bool Regex::full_match(const Bytes& text) const
{
    return std::regex_match(text.begin(), text.end(), compiled_);
}

std::vector<std::string> Regex::capture_all(const std::string& text) const
{
    std::vector<std::string> out;
    auto begin = std::sregex_iterator(text.begin(), text.end(), compiled_);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        if (m.size() >= 2 && m[1].matched)
            out.push_back(m[1].str());
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

NodeAddress parse_address(std::string_view text, const std::string& context)
{
    auto addr = NodeAddress::parse(text);
    if (!addr)
        throw PredicateParseError("bad address '" + std::string(text) + "' in " + context);
    return *addr;
}

PredicateAtom parse_atom(std::string_view text)
{
    PredicateAtom atom;
    std::string ctx = "atom '" + std::string(text) + "'";

    if (text.starts_with("exists(") && text.ends_with(")")) {
        atom.kind = PredicateAtom::Kind::exists;
        atom.address = parse_address(trim(text.substr(7, text.size() - 8)), ctx);
        return atom;
    }
    if (text.starts_with("absent(") && text.ends_with(")")) {
        atom.kind = PredicateAtom::Kind::absent;
        atom.address = parse_address(trim(text.substr(7, text.size() - 8)), ctx);
        return atom;
    }
    if (size_t op = text.find(" =~ "); op != std::string_view::npos) {
        atom.kind = PredicateAtom::Kind::match;
        atom.address = parse_address(trim(text.substr(0, op)), ctx);
        atom.regex = Regex::compile(std::string(trim(text.substr(op + 4))));
        return atom;
    }
    if (size_t op = text.find(" ^= "); op != std::string_view::npos) {
        atom.kind = PredicateAtom::Kind::prefix;
        atom.address = parse_address(trim(text.substr(0, op)), ctx);
        atom.literal = Bytes(trim(text.substr(op + 4)));
        return atom;
    }
    if (size_t op = text.find(" = "); op != std::string_view::npos) {
        atom.kind = PredicateAtom::Kind::eq;
        atom.address = parse_address(trim(text.substr(0, op)), ctx);
        atom.literal = Bytes(trim(text.substr(op + 3)));
        return atom;
    }
    throw PredicateParseError("unrecognized " + ctx);
}

// " AND " separators, case-insensitive keyword.
std::vector<std::string_view> split_conjunction(std::string_view text)
{
    std::vector<std::string_view> parts;
    size_t start = 0;
    for (size_t i = 0; i + 5 <= text.size(); ++i) {
        if (text[i] == ' ' &&
            (text[i + 1] == 'A' || text[i + 1] == 'a') &&
            (text[i + 2] == 'N' || text[i + 2] == 'n') &&
            (text[i + 3] == 'D' || text[i + 3] == 'd') &&
            text[i + 4] == ' ') {
            parts.push_back(text.substr(start, i - start));
            start = i + 5;
            i += 4;
        }
    }
    parts.push_back(text.substr(start));
    return parts;
}

} // namespace

bool PredicateAtom::eval(const ParseTree& tree) const
{
    const ParseNode* node = resolve(tree, address);
    switch (kind) {
    case Kind::exists:
        return node != nullptr;
    case Kind::absent:
        return node == nullptr;
    case Kind::eq:
        return node && node->is_leaf() && node->value == literal;
    case Kind::prefix:
        return node && node->is_leaf() && node->value.starts_with(literal);
    case Kind::match:
        return node && node->is_leaf() && regex.full_match(node->value);
    }
    return false;
}

std::string PredicateAtom::to_string() const
{
    switch (kind) {
    case Kind::exists: return "exists(" + address.to_string() + ")";
    case Kind::absent: return "absent(" + address.to_string() + ")";
    case Kind::eq:     return address.to_string() + " = " + literal;
    case Kind::prefix: return address.to_string() + " ^= " + literal;
    case Kind::match:  return address.to_string() + " =~ " + regex.source();
    }
    return {};
}

Predicate Predicate::parse(const std::string& text)
{
    Predicate p;
    p.text_ = text;
    std::string_view body = trim(text);
    if (body.empty()) return p; // always true
    for (std::string_view part : split_conjunction(body)) {
        part = trim(part);
        if (part.empty())
            throw PredicateParseError("empty atom in '" + text + "'");
        p.atoms_.push_back(parse_atom(part));
    }
    return p;
}

bool Predicate::eval(const ParseTree& tree) const
{
    for (const auto& atom : atoms_)
        if (!atom.eval(tree)) return false;
    return true;
}

std::optional<size_t> Predicate::first_failing_atom(const ParseTree& tree) const
{
    for (size_t i = 0; i < atoms_.size(); ++i)
        if (!atoms_[i].eval(tree)) return i;
    return std::nullopt;
}

} // namespace waf
