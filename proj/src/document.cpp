#include "nlsearch/document.hpp"

#include <algorithm>
#include <set>

#include "nlsearch/errors.hpp"

namespace nlsearch {

std::string bound_prefix(const FieldSpec& spec) {
    const std::string suffix = "_bounds";
    if (spec.name.size() > suffix.size() &&
        spec.name.compare(spec.name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return spec.name.substr(0, spec.name.size() - suffix.size());
    }
    return spec.name;
}

std::vector<std::string> bound_units(const FieldSpec& spec) {
    const std::string prefix = bound_prefix(spec);
    return {prefix + "_min", prefix + "_max"};
}

const FieldSpec* bound_unit_field(const SchemaRegistry& schema, std::string_view unit_name) {
    for (const auto& spec : schema.fields()) {
        if (spec.kind != FieldKind::Integer) continue;
        for (const auto& unit : bound_units(spec)) {
            if (unit == unit_name) return &spec;
        }
    }
    return nullptr;
}

bool SearchEntityDocument::has(std::string_view key) const {
    return values_.find(std::string(key)) != values_.end();
}

const DocumentValue* SearchEntityDocument::find(std::string_view key) const {
    auto it = values_.find(std::string(key));
    return it == values_.end() ? nullptr : &it->second;
}

void SearchEntityDocument::set(std::string key, DocumentValue value) {
    values_[std::move(key)] = std::move(value);
}

void SearchEntityDocument::erase(std::string_view key) { values_.erase(std::string(key)); }

std::string_view to_string(ParseFailure::Kind kind) {
    switch (kind) {
        case ParseFailure::Kind::NotJson: return "not_json";
        case ParseFailure::Kind::WrongRoot: return "wrong_root";
        case ParseFailure::Kind::UnknownField: return "unknown_field";
        case ParseFailure::Kind::TypeMismatch: return "type_mismatch";
    }
    return "?";
}

ParseOutcome ParseOutcome::success(SearchEntityDocument doc, std::vector<CoercionNote> notes) {
    ParseOutcome out;
    out.valid_ = true;
    out.doc_ = std::move(doc);
    out.notes_ = std::move(notes);
    return out;
}

ParseOutcome ParseOutcome::failure(ParseFailure why) {
    ParseOutcome out;
    out.valid_ = false;
    out.why_ = std::move(why);
    return out;
}

const SearchEntityDocument& ParseOutcome::document() const {
    if (!valid_) throw ContractViolation("document() on invalid ParseOutcome");
    return doc_;
}

const ParseFailure& ParseOutcome::why() const {
    if (valid_) throw ContractViolation("why() on valid ParseOutcome");
    return why_;
}

std::optional<std::string> extract_json(std::string_view raw) {
    for (std::size_t start = 0; start < raw.size(); ++start) {
        if (raw[start] != '{') continue;
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < raw.size(); ++i) {
            const char c = raw[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    return std::string(raw.substr(start, i - start + 1));
                }
            }
        }
        // unbalanced from this '{'; no later '{' can balance either
        break;
    }
    return std::nullopt;
}

namespace {

using nlohmann::ordered_json;

struct Parser {
    const SchemaRegistry& schema;
    std::vector<CoercionNote> notes;
    SearchEntityDocument doc;
    std::optional<ParseFailure> fail;

    void mismatch(const std::string& field, const std::string& detail) {
        if (!fail) fail = ParseFailure{ParseFailure::Kind::TypeMismatch, field + ": " + detail};
    }

    std::optional<std::int64_t> parse_bound(const std::string& key, const ordered_json& v) {
        if (v.is_number_integer()) {
            const auto n = v.get<std::int64_t>();
            if (n < 0) {
                mismatch(key, "negative integer bound");
                return std::nullopt;
            }
            return n;
        }
        if (v.is_string()) {
            const std::string s = trim(v.get<std::string>());
            if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
                    return std::isdigit(c);
                })) {
                notes.push_back({key, "numeric_string", "integer"});
                return static_cast<std::int64_t>(std::stoll(s));
            }
        }
        mismatch(key, "expected a non-negative integer");
        return std::nullopt;
    }

    // Lowercase-dedup keeping the first occurrence's casing.
    std::optional<StringList> parse_list(const std::string& key, const ordered_json& v) {
        StringList items;
        bool coerced_scalar = false;
        if (v.is_string()) {
            items.push_back(v.get<std::string>());
            coerced_scalar = true;
        } else if (v.is_array()) {
            for (const auto& e : v) {
                if (!e.is_string()) {
                    mismatch(key, "list entries must be strings");
                    return std::nullopt;
                }
                items.push_back(e.get<std::string>());
            }
        } else {
            mismatch(key, "expected a list of strings");
            return std::nullopt;
        }
        for (const auto& s : items) {
            if (trim(s).empty()) {
                mismatch(key, "empty string in list");
                return std::nullopt;
            }
        }
        if (coerced_scalar) notes.push_back({key, "scalar_string", "string_list"});
        StringList deduped;
        std::set<std::string> seen;
        for (const auto& s : items) {
            if (seen.insert(to_lower(s)).second) deduped.push_back(s);
        }
        if (deduped.size() != items.size()) {
            notes.push_back({key, "list_with_duplicates", "deduplicated_list"});
        }
        return deduped;
    }

    void handle_field(const FieldSpec& spec, const ordered_json& v) {
        switch (spec.shape) {
            case InputShape::ScalarString: {
                if (!v.is_string() || trim(v.get<std::string>()).empty()) {
                    mismatch(spec.name, "expected a non-empty string");
                    return;
                }
                doc.set(spec.name, v.get<std::string>());
                return;
            }
            case InputShape::StringList: {
                auto list = parse_list(spec.name, v);
                if (!list) return;
                if (list->empty()) {
                    notes.push_back({spec.name, "empty_list", "absent"});
                    return;
                }
                doc.set(spec.name, std::move(*list));
                return;
            }
            case InputShape::StringListMap: {
                if (!v.is_object()) {
                    mismatch(spec.name, "expected an object of string lists");
                    return;
                }
                LocationMap map;
                for (const auto& [sub, sub_v] : v.items()) {
                    if (std::find(spec.sub_keys.begin(), spec.sub_keys.end(), sub) ==
                        spec.sub_keys.end()) {
                        if (!fail) {
                            fail = ParseFailure{ParseFailure::Kind::UnknownField,
                                                spec.name + "." + sub};
                        }
                        return;
                    }
                    auto list = parse_list(spec.name + "." + sub, sub_v);
                    if (!list) return;
                    if (!list->empty()) map[sub] = std::move(*list);
                }
                if (map.empty()) {
                    notes.push_back({spec.name, "empty_map", "absent"});
                    return;
                }
                doc.set(spec.name, std::move(map));
                return;
            }
            case InputShape::ScalarInteger:
                // bound fields arrive as flat unit keys, never under the
                // family name
                if (!fail) {
                    fail = ParseFailure{ParseFailure::Kind::UnknownField, spec.name};
                }
                return;
        }
    }
};

}  // namespace

ParseOutcome parse_document(std::string_view candidate, const SchemaRegistry& schema) {
    auto extracted = extract_json(candidate);
    if (!extracted) {
        ordered_json whole = ordered_json::parse(trim(candidate), nullptr, false);
        if (!whole.is_discarded() && !whole.is_object()) {
            return ParseOutcome::failure(
                {ParseFailure::Kind::WrongRoot, "top-level JSON value is not an object"});
        }
        return ParseOutcome::failure({ParseFailure::Kind::NotJson, "no JSON object found"});
    }
    ordered_json root = ordered_json::parse(*extracted, nullptr, false);
    if (root.is_discarded()) {
        return ParseOutcome::failure({ParseFailure::Kind::NotJson, "malformed JSON object"});
    }

    Parser p{schema, {}, {}, std::nullopt};
    for (const auto& [key, value] : root.items()) {
        if (const FieldSpec* bound = bound_unit_field(schema, key)) {
            (void)bound;
            if (auto n = p.parse_bound(key, value)) p.doc.set(key, *n);
        } else if (const FieldSpec* spec = schema.find(key)) {
            p.handle_field(*spec, value);
        } else {
            p.fail = ParseFailure{ParseFailure::Kind::UnknownField, key};
        }
        if (p.fail) return ParseOutcome::failure(*p.fail);
    }
    return ParseOutcome::success(std::move(p.doc), std::move(p.notes));
}

std::vector<BankViolation> validate_against_bank(const SearchEntityDocument& doc,
                                                 const SchemaRegistry& schema) {
    std::vector<BankViolation> out;
    for (const auto& spec : schema.fields()) {
        if (spec.kind != FieldKind::Categorical) continue;
        const DocumentValue* value = doc.find(spec.name);
        if (!value) continue;
        if (spec.shape == InputShape::StringListMap) {
            const auto& map = std::get<LocationMap>(*value);
            for (const auto& [sub, list] : map) {
                for (const auto& v : list) {
                    if (!sub_bank_lookup(spec, sub, v)) out.push_back({spec.name + "." + sub, v});
                }
            }
        } else if (spec.shape == InputShape::ScalarString) {
            const auto& s = std::get<std::string>(*value);
            if (!word_bank_lookup(spec, s)) out.push_back({spec.name, s});
        } else {
            for (const auto& v : std::get<StringList>(*value)) {
                if (!word_bank_lookup(spec, v)) out.push_back({spec.name, v});
            }
        }
    }
    return out;
}

nlohmann::ordered_json to_json(const SearchEntityDocument& doc, const SchemaRegistry& schema) {
    ordered_json out = ordered_json::object();
    for (const auto& spec : schema.fields()) {
        if (spec.kind == FieldKind::Integer) {
            for (const auto& unit : bound_units(spec)) {
                if (const DocumentValue* v = doc.find(unit)) {
                    out[unit] = std::get<std::int64_t>(*v);
                }
            }
            continue;
        }
        const DocumentValue* v = doc.find(spec.name);
        if (!v) continue;
        if (spec.shape == InputShape::StringListMap) {
            ordered_json map = ordered_json::object();
            const auto& loc = std::get<LocationMap>(*v);
            for (const auto& sub : spec.sub_keys) {
                auto it = loc.find(sub);
                if (it != loc.end()) map[sub] = it->second;
            }
            out[spec.name] = std::move(map);
        } else if (spec.shape == InputShape::ScalarString) {
            out[spec.name] = std::get<std::string>(*v);
        } else {
            out[spec.name] = std::get<StringList>(*v);
        }
    }
    return out;
}

std::string serialize(const SearchEntityDocument& doc, const SchemaRegistry& schema) {
    return to_json(doc, schema).dump();
}

std::string serialize_pretty(const SearchEntityDocument& doc, const SchemaRegistry& schema) {
    return to_json(doc, schema).dump(2);
}

}  // namespace nlsearch
