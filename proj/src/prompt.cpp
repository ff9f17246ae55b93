#include "nlsearch/prompt.hpp"

#include <sstream>

#include <json.hpp>

#include "nlsearch/errors.hpp"

namespace nlsearch {

extern const char* kDefaultShotsJson;  // generated from data/shots.json

namespace {

std::string shape_label(const FieldSpec& spec) {
    switch (spec.shape) {
        case InputShape::ScalarString: return "str";
        case InputShape::ScalarInteger: return "int";
        case InputShape::StringList: return "List[str]";
        case InputShape::StringListMap: return "Dict[str, List[str]]";
    }
    return "?";
}

// Trivial banks (the built-in geography lists) are referenced by name
// instead of being listed entry by entry.
bool is_trivial_bank(const std::string& ref) {
    return ref == "@us_states" || ref == "@ca_provinces";
}

void render_field_block(std::ostream& out, const FieldSpec& spec) {
    if (spec.kind == FieldKind::Integer) {
        const auto units = bound_units(spec);
        out << "\"" << units[0] << "\": int, \"" << units[1] << "\": int\n";
    } else {
        out << "\"" << spec.name << "\": " << shape_label(spec) << "\n";
    }
    out << "Description: " << spec.description << "\n";
    if (!spec.guidelines.empty()) {
        out << "Guidelines: ";
        for (std::size_t i = 0; i < spec.guidelines.size(); ++i) {
            if (i) out << ' ';
            out << spec.guidelines[i];
        }
        out << "\n";
    }
    if (spec.shape == InputShape::StringListMap) {
        out << "Keys:\n";
        for (const auto& sub : spec.sub_keys) {
            auto ref = spec.sub_bank_refs.find(sub);
            const auto& bank = spec.sub_banks.at(sub);
            out << "- \"" << sub << "\": ";
            if (bank.empty()) {
                out << "any location string is accepted here.\n";
            } else if (ref != spec.sub_bank_refs.end() && is_trivial_bank(ref->second)) {
                if (ref->second == "@us_states") {
                    out << "one of the 50 US states, or \"United States\" for a whole-country "
                           "search.\n";
                } else {
                    out << "one of the Canadian provinces and territories, or \"Canada\" for a "
                           "whole-country search.\n";
                }
            } else {
                out << "must be zero or more of: ";
                for (std::size_t i = 0; i < bank.size(); ++i) {
                    if (i) out << ", ";
                    out << bank[i];
                }
                out << "\n";
            }
        }
    } else if (spec.kind == FieldKind::Categorical && !is_trivial_bank(spec.bank_ref)) {
        out << "Choices (comma separated):\n";
        for (std::size_t i = 0; i < spec.word_bank.size(); ++i) {
            if (i) out << ",";
            out << spec.word_bank[i];
        }
        out << "\n";
    }
}

}  // namespace

std::string render_shot(const FewShotExample& shot, const SchemaRegistry& schema,
                        bool include_reasoning) {
    std::ostringstream out;
    out << "Prompt: " << shot.query << "\n\n";
    out << "Answer in json format:\n" << serialize_pretty(shot.answer, schema) << "\n";
    if (include_reasoning && !shot.reasoning.empty()) {
        out << "\nReasoning:\n" << shot.reasoning << "\n";
    }
    return out.str();
}

std::string build_system_message(const SchemaRegistry& schema,
                                 const std::vector<FewShotExample>& shots) {
    std::ostringstream out;
    out << "You are a search assistant for a go-to-market sales platform. Users type natural "
           "language search requests for companies and contacts; your job is to translate each "
           "request into a single JSON object of advanced search fields, called a search entity "
           "document. The search backend executes that document, so precision matters more than "
           "creativity.\n\n";
    out << "Output contract: answer with a single JSON object and nothing else. Do not wrap the "
           "object in code fences, do not add prose before or after it, and do not explain your "
           "answer. Include only the fields the request actually asks for; omit everything "
           "else. Never output empty lists, empty strings, or null values. Field names must be "
           "exactly as defined below, in snake_case. List-valued fields must always be JSON "
           "lists, even when they hold a single entry.\n\n";
    out << "Categorical fields accept only the listed choices, matched exactly. If the request "
           "asks for a categorical value that is not among the choices, leave that field out "
           "rather than inventing a value. Integer fields accept plain non-negative integers "
           "with no separators, units, or currency symbols.\n\n";
    out << "The supported fields are defined below.\n\n";
    for (const auto& spec : schema.fields()) {
        render_field_block(out, spec);
        out << "\n";
    }
    if (!shots.empty()) {
        out << "Here are worked examples of requests and the documents they translate to, with "
               "the reasoning behind each answer.\n\n";
        for (std::size_t i = 0; i < shots.size(); ++i) {
            if (i) out << "\n";
            out << render_shot(shots[i], schema, true);
        }
    }
    return out.str();
}

PromptBundle render_prompt(const SchemaRegistry& schema, const std::vector<FewShotExample>& shots,
                           const std::string& user_query) {
    if (trim(user_query).empty()) throw EmptyQueryError("query is empty");
    PromptBundle bundle;
    bundle.system_message = build_system_message(schema, shots);
    bundle.shots = shots;
    bundle.user_query = user_query;
    return bundle;
}

std::vector<FewShotExample> load_shot_library(const std::string& text,
                                              const SchemaRegistry& schema) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaConfigError(std::string("shot library is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw SchemaConfigError("shot library must be a JSON array");
    std::vector<FewShotExample> shots;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("query") || !entry.contains("answer")) {
            throw SchemaConfigError("every shot needs \"query\" and \"answer\"");
        }
        FewShotExample shot;
        shot.query = entry["query"].get<std::string>();
        if (entry.contains("reasoning")) shot.reasoning = entry["reasoning"].get<std::string>();
        ParseOutcome outcome = parse_document(entry["answer"].dump(), schema);
        if (!outcome.valid()) {
            throw SchemaConfigError("shot '" + shot.query + "': answer is invalid (" +
                                    std::string(to_string(outcome.why().kind)) + ": " +
                                    outcome.why().detail + ")");
        }
        if (!outcome.coercions().empty()) {
            throw SchemaConfigError("shot '" + shot.query +
                                    "': answer required coercions; shots must be exact");
        }
        shot.answer = outcome.document();
        shots.push_back(std::move(shot));
    }
    return shots;
}

std::string dump_shot_library(const std::vector<FewShotExample>& shots,
                              const SchemaRegistry& schema) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& shot : shots) {
        nlohmann::ordered_json entry;
        entry["query"] = shot.query;
        entry["answer"] = to_json(shot.answer, schema);
        entry["reasoning"] = shot.reasoning;
        out.push_back(std::move(entry));
    }
    return out.dump(2) + "\n";
}

std::vector<FewShotExample> default_shot_library() {
    return load_shot_library(kDefaultShotsJson, default_schema());
}

}  // namespace nlsearch
