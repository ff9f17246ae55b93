#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nlsearch/schema.hpp"

namespace nlsearch {

using StringList = std::vector<std::string>;
using LocationMap = std::map<std::string, StringList>;

/// One field value: integer bound, scalar string, string list, or the
/// location sub-key map.
using DocumentValue = std::variant<std::int64_t, std::string, StringList, LocationMap>;

/// Integer bound fields serialize as flat `<prefix>_min` / `<prefix>_max`
/// keys; the prefix is the field name with any trailing "_bounds" dropped
/// ("revenue_bounds" -> "revenue").
std::string bound_prefix(const FieldSpec& spec);
std::vector<std::string> bound_units(const FieldSpec& spec);

/// Resolves a bound unit key ("revenue_min") back to its registry field;
/// nullptr when the key is not a bound unit of any integer field.
const FieldSpec* bound_unit_field(const SchemaRegistry& schema, std::string_view unit_name);

/// The validated intermediary document: field name (or bound unit name)
/// to value. Immutable by convention once parsed.
class SearchEntityDocument {
  public:
    bool has(std::string_view key) const;
    const DocumentValue* find(std::string_view key) const;
    void set(std::string key, DocumentValue value);
    void erase(std::string_view key);
    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }
    const std::map<std::string, DocumentValue>& values() const { return values_; }

    bool operator==(const SearchEntityDocument&) const = default;

  private:
    std::map<std::string, DocumentValue> values_;
};

struct CoercionNote {
    std::string field;
    std::string from_shape;
    std::string to_shape;
};

struct ParseFailure {
    enum class Kind { NotJson, WrongRoot, UnknownField, TypeMismatch };
    Kind kind = Kind::NotJson;
    std::string detail;
};

std::string_view to_string(ParseFailure::Kind kind);

class ParseOutcome {
  public:
    static ParseOutcome success(SearchEntityDocument doc, std::vector<CoercionNote> notes);
    static ParseOutcome failure(ParseFailure why);

    bool valid() const { return valid_; }
    const SearchEntityDocument& document() const;
    const std::vector<CoercionNote>& coercions() const { return notes_; }
    const ParseFailure& why() const;

  private:
    bool valid_ = false;
    SearchEntityDocument doc_;
    std::vector<CoercionNote> notes_;
    ParseFailure why_;
};

/// Returns the first balanced top-level `{...}` object literal in raw,
/// ignoring braces inside string literals. Prose and code fences around
/// it are stripped by construction.
std::optional<std::string> extract_json(std::string_view raw);

/// Extracts and validates a candidate LLM reply into a document.
ParseOutcome parse_document(std::string_view candidate, const SchemaRegistry& schema);

struct BankViolation {
    std::string field;
    std::string value;
};

/// One violation per categorical value with no bank match; the document
/// is left unchanged (removal is the compiler's job).
std::vector<BankViolation> validate_against_bank(const SearchEntityDocument& doc,
                                                 const SchemaRegistry& schema);

/// Wire form: single JSON object, keys in registry order, bound fields
/// as flat `revenue_min`/... keys.
nlohmann::ordered_json to_json(const SearchEntityDocument& doc, const SchemaRegistry& schema);
std::string serialize(const SearchEntityDocument& doc, const SchemaRegistry& schema);
std::string serialize_pretty(const SearchEntityDocument& doc, const SchemaRegistry& schema);

}  // namespace nlsearch
