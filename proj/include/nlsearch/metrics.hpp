#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlsearch/document.hpp"
#include "nlsearch/schema.hpp"

namespace nlsearch {

class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    /// Deterministic for a fixed provider configuration; must be safe for
    /// concurrent calls.
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// 64-dimensional deterministic provider: token vectors are seeded hashes
/// of the token's character trigrams mapped to the unit sphere, text
/// vectors the mean of token vectors.
std::shared_ptr<EmbeddingProvider> default_embedding_provider(std::uint64_t seed);

/// 1 if the values match after lowercasing strings and sorting lists,
/// else 0. Throws ContractViolation on shape mismatch.
double exact_match(const DocumentValue& a, const DocumentValue& b);

/// |a ∩ b| / |a ∪ b| over lowercased, deduplicated sets; both-empty is 1.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Cosine of the term-frequency vectors of the two texts (lowercased,
/// tokenized on whitespace and punctuation); 0 if either is empty.
double cosine_sim(std::string_view a, std::string_view b);

/// Cosine of the embedding vectors, negatives clamped to 0.
double semantic_sim(std::string_view a, std::string_view b, const EmbeddingProvider& provider);

/// Lowercased whitespace/punctuation tokens, exposed for oracles.
std::vector<std::string> tokenize(std::string_view text);

struct FieldScore {
    std::string field;
    std::map<MetricKind, double> scores;
};

/// One scored unit: a non-integer field, or one bound key of an integer
/// field. The default schema yields 17 units carrying 34 metric values.
struct ScoringUnit {
    std::string name;
    FieldKind kind = FieldKind::FreeText;
    const FieldSpec* spec = nullptr;
};

std::vector<ScoringUnit> scoring_units(const SchemaRegistry& schema);

/// Omission rule: both absent -> every applicable metric 1; exactly one
/// present -> every applicable metric 0; both present -> computed.
FieldScore score_field(const ScoringUnit& unit, const DocumentValue* gt,
                       const DocumentValue* pred, const EmbeddingProvider& provider);

struct QueryScore {
    std::vector<FieldScore> field_scores;
    double average = 0.0;
};

struct ScoreOptions {
    /// When false, only units present in at least one of the two documents
    /// contribute to the average.
    bool all_units = true;
};

QueryScore score_query(const SearchEntityDocument& gt, const SearchEntityDocument& pred,
                       const SchemaRegistry& schema, const EmbeddingProvider& provider,
                       const ScoreOptions& options = {});

/// Flattening used for cosine/semantic on list and map values: sorted
/// lowercase elements joined with single spaces.
std::string flatten_text(const DocumentValue& value);

/// Categorical set form: lowercase elements; map values tagged as
/// "sub_key:value".
std::set<std::string> value_set(const DocumentValue& value);

}  // namespace nlsearch
