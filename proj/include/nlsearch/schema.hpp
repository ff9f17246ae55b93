#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlsearch {

enum class FieldKind { Integer, Categorical, FreeText };
enum class InputShape { ScalarString, ScalarInteger, StringList, StringListMap };
enum class MetricKind { Exact, Jaccard, Cosine, Semantic };

std::string_view to_string(FieldKind kind);
std::string_view to_string(InputShape shape);
std::string_view to_string(MetricKind metric);

/// Metrics applicable to a field kind: integer -> {exact},
/// categorical -> {exact, jaccard}, free-text -> {exact, cosine, semantic}.
const std::vector<MetricKind>& metrics_for(FieldKind kind);

struct FieldSpec {
    std::string name;
    FieldKind kind = FieldKind::FreeText;
    InputShape shape = InputShape::StringList;
    std::string description;
    std::vector<std::string> guidelines;
    /// Canonical-cased permitted values. Required and non-empty iff
    /// kind == Categorical, except for map-shaped fields which carry
    /// per-sub-key banks instead.
    std::vector<std::string> word_bank;
    /// Set when the word bank is one of the built-in banks; used by the
    /// config dumper and the system-message renderer ("trivial" banks are
    /// referenced by name, not listed).
    std::string bank_ref;
    /// For StringListMap fields only: sub-key order and per-sub-key banks.
    /// An empty bank list means the sub-key accepts any string.
    std::vector<std::string> sub_keys;
    std::map<std::string, std::vector<std::string>> sub_banks;
    std::map<std::string, std::string> sub_bank_refs;
};

class SchemaRegistry {
  public:
    explicit SchemaRegistry(std::vector<FieldSpec> fields);

    const std::vector<FieldSpec>& fields() const { return fields_; }
    const FieldSpec& field(std::string_view name) const;
    const FieldSpec* find(std::string_view name) const;
    std::size_t size() const { return fields_.size(); }

  private:
    std::vector<FieldSpec> fields_;
};

/// The 15-field default registry for the sales-search product.
SchemaRegistry default_schema();

/// Parses a JSON schema-config document (see docs/schema_config.md).
SchemaRegistry load_schema(const std::string& config_text);

/// Inverse of load_schema; load_schema(dump_schema(r)) is structurally
/// equal to r.
std::string dump_schema(const SchemaRegistry& registry);

/// Case-insensitive bank lookup after trimming surrounding whitespace;
/// returns the canonical-cased entry. Throws ContractViolation if spec is
/// not categorical.
std::optional<std::string> word_bank_lookup(const FieldSpec& spec, std::string_view value);

/// Lookup against a map-shaped field's per-sub-key bank. Open sub-keys
/// (empty bank) echo the trimmed value back.
std::optional<std::string> sub_bank_lookup(const FieldSpec& spec, std::string_view sub_key,
                                           std::string_view value);

/// Built-in banks addressable from config as "@us_states" etc.
const std::vector<std::string>& builtin_bank(std::string_view name);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

}  // namespace nlsearch
