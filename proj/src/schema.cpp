#include "nlsearch/schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nlsearch/errors.hpp"

namespace nlsearch {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string_view to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::Integer: return "integer";
        case FieldKind::Categorical: return "categorical";
        case FieldKind::FreeText: return "free_text";
    }
    return "?";
}

std::string_view to_string(InputShape shape) {
    switch (shape) {
        case InputShape::ScalarString: return "scalar_string";
        case InputShape::ScalarInteger: return "scalar_integer";
        case InputShape::StringList: return "string_list";
        case InputShape::StringListMap: return "string_list_map";
    }
    return "?";
}

std::string_view to_string(MetricKind metric) {
    switch (metric) {
        case MetricKind::Exact: return "exact";
        case MetricKind::Jaccard: return "jaccard";
        case MetricKind::Cosine: return "cosine";
        case MetricKind::Semantic: return "semantic";
    }
    return "?";
}

const std::vector<MetricKind>& metrics_for(FieldKind kind) {
    static const std::vector<MetricKind> integer{MetricKind::Exact};
    static const std::vector<MetricKind> categorical{MetricKind::Exact, MetricKind::Jaccard};
    static const std::vector<MetricKind> free_text{MetricKind::Exact, MetricKind::Cosine,
                                                   MetricKind::Semantic};
    switch (kind) {
        case FieldKind::Integer: return integer;
        case FieldKind::Categorical: return categorical;
        case FieldKind::FreeText: return free_text;
    }
    return integer;
}

namespace {

void validate_bank(const std::string& field, const std::vector<std::string>& bank) {
    std::set<std::string> seen;
    for (const auto& entry : bank) {
        if (!seen.insert(to_lower(entry)).second) {
            throw SchemaConfigError("field '" + field + "': word bank entry '" + entry +
                                    "' duplicated (case-insensitive)");
        }
    }
}

}  // namespace

SchemaRegistry::SchemaRegistry(std::vector<FieldSpec> fields) : fields_(std::move(fields)) {
    std::set<std::string> names;
    for (const auto& spec : fields_) {
        if (spec.name.empty()) throw SchemaConfigError("field with empty name");
        if (!names.insert(spec.name).second) {
            throw DuplicateFieldError("duplicate field name '" + spec.name + "'");
        }
        if (spec.kind == FieldKind::Categorical) {
            if (spec.shape == InputShape::StringListMap) {
                if (spec.sub_keys.empty()) {
                    throw SchemaConfigError("field '" + spec.name +
                                            "': map-shaped field needs sub_keys");
                }
                for (const auto& [key, bank] : spec.sub_banks) validate_bank(spec.name, bank);
            } else {
                if (spec.word_bank.empty()) {
                    throw SchemaConfigError("field '" + spec.name +
                                            "': categorical field needs a word bank");
                }
                validate_bank(spec.name, spec.word_bank);
            }
        }
        if (spec.shape == InputShape::StringListMap && spec.kind != FieldKind::Categorical) {
            throw SchemaConfigError("field '" + spec.name +
                                    "': string_list_map is only supported for categorical fields");
        }
    }
}

const FieldSpec* SchemaRegistry::find(std::string_view name) const {
    for (const auto& spec : fields_) {
        if (spec.name == name) return &spec;
    }
    return nullptr;
}

const FieldSpec& SchemaRegistry::field(std::string_view name) const {
    const FieldSpec* spec = find(name);
    if (!spec) throw UnknownFieldError("unknown field '" + std::string(name) + "'");
    return *spec;
}

std::optional<std::string> word_bank_lookup(const FieldSpec& spec, std::string_view value) {
    if (spec.kind != FieldKind::Categorical) {
        throw ContractViolation("word_bank_lookup on non-categorical field '" + spec.name + "'");
    }
    const std::string needle = to_lower(trim(value));
    for (const auto& entry : spec.word_bank) {
        if (to_lower(entry) == needle) return entry;
    }
    return std::nullopt;
}

std::optional<std::string> sub_bank_lookup(const FieldSpec& spec, std::string_view sub_key,
                                           std::string_view value) {
    if (spec.shape != InputShape::StringListMap) {
        throw ContractViolation("sub_bank_lookup on non-map field '" + spec.name + "'");
    }
    auto it = spec.sub_banks.find(std::string(sub_key));
    const std::string trimmed = trim(value);
    if (it == spec.sub_banks.end() || it->second.empty()) {
        // open sub-key
        return trimmed.empty() ? std::nullopt : std::optional<std::string>(trimmed);
    }
    const std::string needle = to_lower(trimmed);
    for (const auto& entry : it->second) {
        if (to_lower(entry) == needle) return entry;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Config load / dump (docs/schema_config.md)
// ---------------------------------------------------------------------------

namespace {

using nlohmann::ordered_json;

FieldKind parse_kind(const std::string& s, const std::string& field) {
    if (s == "integer") return FieldKind::Integer;
    if (s == "categorical") return FieldKind::Categorical;
    if (s == "free_text") return FieldKind::FreeText;
    throw SchemaConfigError("field '" + field + "': unknown kind '" + s + "'");
}

InputShape parse_shape(const std::string& s, const std::string& field) {
    if (s == "scalar_string") return InputShape::ScalarString;
    if (s == "scalar_integer") return InputShape::ScalarInteger;
    if (s == "string_list") return InputShape::StringList;
    if (s == "string_list_map") return InputShape::StringListMap;
    throw SchemaConfigError("field '" + field + "': unknown shape '" + s + "'");
}

std::vector<std::string> parse_bank(const ordered_json& j, const std::string& field,
                                    std::string* ref_out) {
    if (j.is_string()) {
        const std::string ref = j.get<std::string>();
        if (ref == "open") return {};
        if (!ref.empty() && ref.front() == '@') {
            if (ref_out) *ref_out = ref;
            return builtin_bank(ref.substr(1));
        }
        throw SchemaConfigError("field '" + field + "': bank reference '" + ref +
                                "' must be \"open\" or start with '@'");
    }
    if (!j.is_array()) {
        throw SchemaConfigError("field '" + field + "': word bank must be an array or reference");
    }
    std::vector<std::string> bank;
    for (const auto& e : j) {
        if (!e.is_string()) {
            throw SchemaConfigError("field '" + field + "': word bank entries must be strings");
        }
        bank.push_back(e.get<std::string>());
    }
    return bank;
}

}  // namespace

SchemaRegistry load_schema(const std::string& config_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(config_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaConfigError(std::string("schema config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("fields") || !doc["fields"].is_array()) {
        throw SchemaConfigError("schema config must be an object with a \"fields\" array");
    }
    std::vector<FieldSpec> fields;
    for (const auto& f : doc["fields"]) {
        if (!f.is_object() || !f.contains("name") || !f["name"].is_string()) {
            throw SchemaConfigError("every field entry needs a string \"name\"");
        }
        FieldSpec spec;
        spec.name = f["name"].get<std::string>();
        if (!f.contains("kind") || !f.contains("shape")) {
            throw SchemaConfigError("field '" + spec.name + "': missing kind or shape");
        }
        spec.kind = parse_kind(f["kind"].get<std::string>(), spec.name);
        spec.shape = parse_shape(f["shape"].get<std::string>(), spec.name);
        if (f.contains("description")) spec.description = f["description"].get<std::string>();
        if (f.contains("guidelines")) {
            for (const auto& g : f["guidelines"]) spec.guidelines.push_back(g.get<std::string>());
        }
        if (f.contains("word_bank")) {
            spec.word_bank = parse_bank(f["word_bank"], spec.name, &spec.bank_ref);
        }
        if (f.contains("sub_keys")) {
            if (!f["sub_keys"].is_object()) {
                throw SchemaConfigError("field '" + spec.name + "': sub_keys must be an object");
            }
            for (const auto& [key, bank] : f["sub_keys"].items()) {
                spec.sub_keys.push_back(key);
                std::string ref;
                spec.sub_banks[key] = parse_bank(bank, spec.name + "." + key, &ref);
                if (!ref.empty()) spec.sub_bank_refs[key] = ref;
            }
        }
        fields.push_back(std::move(spec));
    }
    return SchemaRegistry(std::move(fields));
}

std::string dump_schema(const SchemaRegistry& registry) {
    ordered_json out;
    out["fields"] = ordered_json::array();
    for (const auto& spec : registry.fields()) {
        ordered_json f;
        f["name"] = spec.name;
        f["kind"] = std::string(to_string(spec.kind));
        f["shape"] = std::string(to_string(spec.shape));
        if (!spec.description.empty()) f["description"] = spec.description;
        if (!spec.guidelines.empty()) f["guidelines"] = spec.guidelines;
        if (spec.shape == InputShape::StringListMap) {
            ordered_json subs = ordered_json::object();
            for (const auto& key : spec.sub_keys) {
                auto ref = spec.sub_bank_refs.find(key);
                if (ref != spec.sub_bank_refs.end()) {
                    subs[key] = ref->second;
                } else if (spec.sub_banks.at(key).empty()) {
                    subs[key] = "open";
                } else {
                    subs[key] = spec.sub_banks.at(key);
                }
            }
            f["sub_keys"] = subs;
        } else if (spec.kind == FieldKind::Categorical) {
            if (!spec.bank_ref.empty()) {
                f["word_bank"] = spec.bank_ref;
            } else {
                f["word_bank"] = spec.word_bank;
            }
        }
        out["fields"].push_back(std::move(f));
    }
    return out.dump(2) + "\n";
}

}  // namespace nlsearch
