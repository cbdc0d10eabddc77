// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Conjunctive predicates over parse trees. Text form: atoms joined by
// " AND ". Atom forms:
//
//   <addr> = <literal>      leaf equals the literal bytes
//   <addr> =~ <regex>       leaf fully matches the anchored regex
//   <addr> ^= <literal>     leaf starts with the literal
//   exists(<addr>)          address resolves
//   absent(<addr>)          address does not resolve
//
// Evaluation is total: a missing address makes the atom false (or true for
// absent), never an error.

#ifndef WAFMODEL_CORE_PREDICATE_HPP
#define WAFMODEL_CORE_PREDICATE_HPP

#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/tree.hpp"

namespace waf {

struct PredicateParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Compiled anchored regex; match() covers the whole input or fails.
class Regex {
public:
    Regex() = default;
    static Regex compile(const std::string& source); // throws PredicateParseError
    bool full_match(const Bytes& text) const;
    const std::string& source() const { return source_; }
    size_t mark_count() const { return compiled_.mark_count(); }
    // Unanchored scan; returns every first-capture-group match in order.
    std::vector<std::string> capture_all(const std::string& text) const;

private:
    std::string source_;
    std::regex compiled_;
};

struct PredicateAtom {
    enum class Kind { eq, match, prefix, exists, absent };
    Kind kind = Kind::exists;
    NodeAddress address;
    Bytes literal;   // eq / prefix
    Regex regex;     // match

    bool eval(const ParseTree& tree) const;
    std::string to_string() const;
};

class Predicate {
public:
    Predicate() = default;

    // Parses the text grammar above. Empty text is the always-true predicate.
    static Predicate parse(const std::string& text); // throws PredicateParseError

    bool eval(const ParseTree& tree) const;
    // Index of the first atom that evaluates false, for explain traces.
    std::optional<size_t> first_failing_atom(const ParseTree& tree) const;

    const std::vector<PredicateAtom>& atoms() const { return atoms_; }
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::vector<PredicateAtom> atoms_;
};

} // namespace waf

#endif
