#pragma once

#include <string>
#include <vector>

#include "nlsearch/document.hpp"
#include "nlsearch/schema.hpp"

namespace nlsearch {

struct FewShotExample {
    std::string query;
    SearchEntityDocument answer;
    std::string reasoning;
};

struct PromptBundle {
    std::string system_message;
    std::vector<FewShotExample> shots;
    std::string user_query;
    /// Set by the refiner on retries; appended to the user turn.
    std::string refinement_suffix;
};

/// Renders the full system message: role, output contract, one block per
/// field (name, shape, description, guidelines, word bank where the bank
/// is non-trivial), then the worked examples. Deterministic.
std::string build_system_message(const SchemaRegistry& schema,
                                 const std::vector<FewShotExample>& shots);

/// Throws EmptyQueryError when the query is blank after trimming.
PromptBundle render_prompt(const SchemaRegistry& schema, const std::vector<FewShotExample>& shots,
                           const std::string& user_query);

/// One Prompt / Answer-in-json / Reasoning block.
std::string render_shot(const FewShotExample& shot, const SchemaRegistry& schema,
                        bool include_reasoning = true);

/// The curated built-in shot library (12 shots). Every answer parses with
/// zero coercions against the default schema.
std::vector<FewShotExample> default_shot_library();

/// Shot-library file format: JSON array of {query, answer, reasoning}
/// records (docs/shot_library.md). Answers failing validation are
/// rejected with SchemaConfigError.
std::vector<FewShotExample> load_shot_library(const std::string& text,
                                              const SchemaRegistry& schema);

std::string dump_shot_library(const std::vector<FewShotExample>& shots,
                              const SchemaRegistry& schema);

}  // namespace nlsearch
