#include "nlsearch/compiler.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "nlsearch/errors.hpp"

namespace nlsearch {

std::string_view to_string(RemovalReason reason) {
    switch (reason) {
        case RemovalReason::OutOfBank: return "out_of_bank";
        case RemovalReason::Exclusivity: return "exclusivity";
        case RemovalReason::BoundConflict: return "bound_conflict";
    }
    return "?";
}

namespace {

bool ci_less(const std::string& a, const std::string& b) {
    const std::string la = to_lower(a), lb = to_lower(b);
    return la != lb ? la < lb : a < b;
}

void sort_ci(std::vector<std::string>& values) {
    std::sort(values.begin(), values.end(), ci_less);
}

}  // namespace

ScrubReport scrub(const SearchEntityDocument& doc, const SchemaRegistry& schema) {
    ScrubReport report;
    report.doc_after = doc;
    SearchEntityDocument& out = report.doc_after;

    // titles wins over the coarser fields
    if (out.has("titles")) {
        for (const char* excluded : {"management_levels", "departments"}) {
            if (const DocumentValue* v = out.find(excluded)) {
                for (const auto& value : std::get<StringList>(*v)) {
                    report.removals.push_back({excluded, value, RemovalReason::Exclusivity});
                }
                out.erase(excluded);
            }
        }
    }

    for (const auto& spec : schema.fields()) {
        if (spec.kind == FieldKind::Categorical) {
            const DocumentValue* v = out.find(spec.name);
            if (!v) continue;
            if (spec.shape == InputShape::StringListMap) {
                LocationMap kept;
                for (const auto& [sub, list] : std::get<LocationMap>(*v)) {
                    StringList canon;
                    for (const auto& value : list) {
                        if (auto c = sub_bank_lookup(spec, sub, value)) {
                            canon.push_back(*c);
                        } else {
                            report.removals.push_back(
                                {spec.name + "." + sub, value, RemovalReason::OutOfBank});
                        }
                    }
                    if (!canon.empty()) kept[sub] = std::move(canon);
                }
                if (kept.empty()) {
                    out.erase(spec.name);
                } else {
                    out.set(spec.name, std::move(kept));
                }
            } else if (spec.shape == InputShape::ScalarString) {
                const auto& s = std::get<std::string>(*v);
                if (auto c = word_bank_lookup(spec, s)) {
                    out.set(spec.name, *c);
                } else {
                    report.removals.push_back({spec.name, s, RemovalReason::OutOfBank});
                    out.erase(spec.name);
                }
            } else {
                StringList canon;
                for (const auto& value : std::get<StringList>(*v)) {
                    if (auto c = word_bank_lookup(spec, value)) {
                        canon.push_back(*c);
                    } else {
                        report.removals.push_back({spec.name, value, RemovalReason::OutOfBank});
                    }
                }
                if (canon.empty()) {
                    out.erase(spec.name);
                } else {
                    out.set(spec.name, std::move(canon));
                }
            }
        } else if (spec.kind == FieldKind::Integer) {
            const auto units = bound_units(spec);
            const DocumentValue* lo = out.find(units[0]);
            const DocumentValue* hi = out.find(units[1]);
            if (lo && hi) {
                const auto lo_v = std::get<std::int64_t>(*lo);
                const auto hi_v = std::get<std::int64_t>(*hi);
                if (lo_v > hi_v) {
                    report.removals.push_back({spec.name,
                                               std::to_string(lo_v) + " > " + std::to_string(hi_v),
                                               RemovalReason::BoundConflict});
                    out.set(units[0], hi_v);
                    out.set(units[1], lo_v);
                }
            }
        }
    }
    return report;
}

QueryAst compile(const SearchEntityDocument& doc, const SchemaRegistry& schema) {
    if (!validate_against_bank(doc, schema).empty()) {
        throw CompileContractError("document has out-of-bank values; scrub first");
    }
    if (doc.has("titles") && (doc.has("management_levels") || doc.has("departments"))) {
        throw CompileContractError("titles is exclusive with management_levels/departments");
    }

    QueryAst ast;
    for (const auto& spec : schema.fields()) {
        if (spec.kind == FieldKind::Integer) {
            const auto units = bound_units(spec);
            const DocumentValue* lo = doc.find(units[0]);
            const DocumentValue* hi = doc.find(units[1]);
            if (!lo && !hi) continue;
            Clause c;
            c.kind = Clause::Kind::Range;
            c.field = bound_prefix(spec);
            if (lo) c.min = std::get<std::int64_t>(*lo);
            if (hi) c.max = std::get<std::int64_t>(*hi);
            if (c.min && c.max && *c.min > *c.max) {
                throw CompileContractError("reversed bound pair for " + spec.name);
            }
            ast.clauses.push_back(std::move(c));
            continue;
        }
        const DocumentValue* v = doc.find(spec.name);
        if (!v) continue;
        if (spec.shape == InputShape::StringListMap) {
            const auto& map = std::get<LocationMap>(*v);
            for (const auto& sub : spec.sub_keys) {
                auto it = map.find(sub);
                if (it == map.end() || it->second.empty()) continue;
                Clause c;
                c.kind = Clause::Kind::ScopedMembership;
                c.field = spec.name;
                c.sub_key = sub;
                for (const auto& value : it->second) {
                    c.values.push_back(*sub_bank_lookup(spec, sub, value));
                }
                sort_ci(c.values);
                ast.clauses.push_back(std::move(c));
            }
            continue;
        }
        Clause c;
        c.kind = spec.kind == FieldKind::Categorical ? Clause::Kind::Membership
                                                     : Clause::Kind::TextMatch;
        c.field = spec.name;
        if (spec.shape == InputShape::ScalarString) {
            const auto& s = std::get<std::string>(*v);
            c.values = {spec.kind == FieldKind::Categorical ? *word_bank_lookup(spec, s) : s};
        } else {
            for (const auto& value : std::get<StringList>(*v)) {
                c.values.push_back(spec.kind == FieldKind::Categorical
                                       ? *word_bank_lookup(spec, value)
                                       : value);
            }
            sort_ci(c.values);
        }
        ast.clauses.push_back(std::move(c));
    }
    return ast;
}

std::string serialize_canonical(const QueryAst& ast) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& c : ast.clauses) {
        switch (c.kind) {
            case Clause::Kind::Range: {
                nlohmann::ordered_json range = nlohmann::ordered_json::object();
                if (c.min) range["min"] = *c.min;
                if (c.max) range["max"] = *c.max;
                out[c.field] = std::move(range);
                break;
            }
            case Clause::Kind::ScopedMembership:
                out[c.field][c.sub_key] = c.values;
                break;
            case Clause::Kind::Membership:
            case Clause::Kind::TextMatch:
                out[c.field] = c.values;
                break;
        }
    }
    return out.dump();
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"' || ch == '\\') out.push_back('\\');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string serialize_filter(const QueryAst& ast) {
    std::string out;
    for (const auto& c : ast.clauses) {
        if (!out.empty()) out += " AND ";
        if (c.kind == Clause::Kind::ScopedMembership) {
            out += c.field + "." + c.sub_key;
        } else {
            out += c.field;
        }
        out += ':';
        if (c.kind == Clause::Kind::Range) {
            out += '[';
            out += c.min ? std::to_string(*c.min) : "*";
            out += " TO ";
            out += c.max ? std::to_string(*c.max) : "*";
            out += ']';
        } else {
            out += '(';
            for (std::size_t i = 0; i < c.values.size(); ++i) {
                if (i) out += " OR ";
                out += quote(c.values[i]);
            }
            out += ')';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Filter-string parser (docs/filter_grammar.md)
// ---------------------------------------------------------------------------

namespace {

struct FilterParser {
    std::string_view text;
    std::size_t pos = 0;
    const SchemaRegistry& schema;

    [[noreturn]] void fail(const std::string& what) {
        throw Error("filter parse error at offset " + std::to_string(pos) + ": " + what);
    }

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void expect(std::string_view lit) {
        if (text.substr(pos, lit.size()) != lit) fail("expected '" + std::string(lit) + "'");
        pos += lit.size();
    }

    bool consume(std::string_view lit) {
        if (text.substr(pos, lit.size()) != lit) return false;
        pos += lit.size();
        return true;
    }

    std::string ident() {
        std::size_t start = pos;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            ++pos;
        }
        if (pos == start) fail("expected identifier");
        return std::string(text.substr(start, pos - start));
    }

    std::string quoted() {
        expect("\"");
        std::string out;
        while (!eof()) {
            char c = text[pos++];
            if (c == '\\') {
                if (eof()) fail("dangling escape");
                out.push_back(text[pos++]);
            } else if (c == '"') {
                return out;
            } else {
                out.push_back(c);
            }
        }
        fail("unterminated string");
    }

    std::optional<std::int64_t> bound() {
        if (consume("*")) return std::nullopt;
        std::size_t start = pos;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        if (pos == start) fail("expected integer or '*'");
        return std::stoll(std::string(text.substr(start, pos - start)));
    }

    Clause clause() {
        Clause c;
        c.field = ident();
        if (consume(".")) {
            c.kind = Clause::Kind::ScopedMembership;
            c.sub_key = ident();
        }
        expect(":");
        if (consume("[")) {
            if (c.kind == Clause::Kind::ScopedMembership) fail("range cannot be scoped");
            c.kind = Clause::Kind::Range;
            c.min = bound();
            expect(" TO ");
            c.max = bound();
            expect("]");
            // map the emission prefix back to the registry field
            bool known = false;
            for (const auto& spec : schema.fields()) {
                if (spec.kind == FieldKind::Integer && bound_prefix(spec) == c.field) {
                    known = true;
                    break;
                }
            }
            if (!known) fail("unknown range field '" + c.field + "'");
            return c;
        }
        expect("(");
        c.values.push_back(quoted());
        while (consume(" OR ")) c.values.push_back(quoted());
        expect(")");
        if (c.kind == Clause::Kind::ScopedMembership) {
            const FieldSpec& spec = schema.field(c.field);
            if (spec.shape != InputShape::StringListMap) fail("field is not map-shaped");
        } else {
            const FieldSpec& spec = schema.field(c.field);
            c.kind = spec.kind == FieldKind::Categorical ? Clause::Kind::Membership
                                                         : Clause::Kind::TextMatch;
        }
        return c;
    }

    QueryAst parse() {
        QueryAst ast;
        if (trim(text).empty()) return ast;
        ast.clauses.push_back(clause());
        while (!eof()) {
            expect(" AND ");
            ast.clauses.push_back(clause());
        }
        return ast;
    }
};

}  // namespace

QueryAst parse_filter(std::string_view text, const SchemaRegistry& schema) {
    FilterParser parser{text, 0, schema};
    return parser.parse();
}

}  // namespace nlsearch
