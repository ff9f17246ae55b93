#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlsearch/document.hpp"
#include "nlsearch/schema.hpp"

namespace nlsearch {

enum class RemovalReason { OutOfBank, Exclusivity, BoundConflict };
std::string_view to_string(RemovalReason reason);

struct Removal {
    std::string field;
    std::string value;
    RemovalReason reason;
};

struct ScrubReport {
    std::vector<Removal> removals;
    SearchEntityDocument doc_after;
};

/// Error-removal pass: drops out-of-bank categorical values (canonicalizing
/// the rest to bank casing), drops management_levels and departments when
/// titles is present, swaps reversed bound pairs, and drops fields emptied
/// by removals. Total and idempotent.
ScrubReport scrub(const SearchEntityDocument& doc, const SchemaRegistry& schema);

struct Clause {
    enum class Kind { Range, Membership, TextMatch, ScopedMembership };
    Kind kind = Kind::Membership;
    /// Emission name: the field name, or the bound family prefix
    /// ("revenue") for ranges.
    std::string field;
    std::string sub_key;  // ScopedMembership only
    std::optional<std::int64_t> min, max;
    std::vector<std::string> values;  // sorted case-insensitively

    bool operator==(const Clause&) const = default;
};

struct QueryAst {
    std::vector<Clause> clauses;

    bool operator==(const QueryAst&) const = default;
};

/// Requires a scrubbed document; throws CompileContractError on bank or
/// exclusivity violations. Clauses come out in registry order.
QueryAst compile(const SearchEntityDocument& doc, const SchemaRegistry& schema);

/// Single-line object-literal form; byte-identical for equal ASTs.
std::string serialize_canonical(const QueryAst& ast);

/// Solr-flavored filter string, e.g.
/// `revenue:[500000 TO *] AND contact_info:("Email" OR "Phone")`.
std::string serialize_filter(const QueryAst& ast);

/// Inverse of serialize_filter under the published grammar
/// (docs/filter_grammar.md). Throws Error on malformed input.
QueryAst parse_filter(std::string_view text, const SchemaRegistry& schema);

}  // namespace nlsearch
