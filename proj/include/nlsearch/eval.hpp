#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nlsearch/document.hpp"
#include "nlsearch/gateway.hpp"
#include "nlsearch/metrics.hpp"
#include "nlsearch/prompt.hpp"
#include "nlsearch/schema.hpp"

namespace nlsearch {

struct DatasetRecord {
    std::string id;
    std::string query;
    SearchEntityDocument ground_truth;
};

/// Line-delimited `{"id", "query", "ground_truth"}` records. Fail-fast:
/// throws DatasetError listing every offending line.
std::vector<DatasetRecord> load_dataset(std::istream& in, const SchemaRegistry& schema);
std::vector<DatasetRecord> load_dataset_file(const std::string& path,
                                             const SchemaRegistry& schema);

struct SplitSpec {
    double test_fraction = 0.10;
    double train_fraction = 0.80;       // of the remainder
    double validation_fraction = 0.20;  // of the remainder
    std::uint64_t seed = 0;
};

struct SplitResult {
    std::vector<DatasetRecord> train, validation, test;
};

/// Seed-stable shuffle, then a largest-remainder partition into
/// train/validation/test (defaults give the global 72/18/10 split).
SplitResult split_dataset(const std::vector<DatasetRecord>& records, const SplitSpec& spec);

using Translator = std::function<TranslationRecord(const DatasetRecord&)>;

/// A translator backed by the refinement loop and a shared client.
Translator make_translator(const SchemaRegistry& schema, const std::vector<FewShotExample>& shots,
                           CompletionClient& client, const RefinementPolicy& policy = {});

struct QueryResult {
    std::string id;
    QueryScore score;
    int attempts = 0;
    bool failed = false;
};

struct EvaluationReport {
    std::vector<QueryResult> per_query;  // sorted by id
    std::map<std::string, std::map<MetricKind, double>> per_field_means;
    double overall_mean = 0.0;
    std::array<int, 20> histogram{};  // per-query averages over [0,1]
    /// Per-unit histograms of the exact-match metric.
    std::map<std::string, std::array<int, 20>> exact_histograms;
};

/// Runs translation + scoring over the corpus with up to in_flight_cap
/// records translated concurrently. Failed translations score as an empty
/// prediction and are flagged. Deterministic for a deterministic
/// translator regardless of the cap.
EvaluationReport run_eval(const std::vector<DatasetRecord>& records, const Translator& translator,
                          const SchemaRegistry& schema, const EmbeddingProvider& provider,
                          int in_flight_cap = 1, const ScoreOptions& options = {});

/// One chat-pair line per record: system message + user query in,
/// serialized ground truth out.
void export_finetune(const std::vector<DatasetRecord>& records, const SchemaRegistry& schema,
                     const std::vector<FewShotExample>& shots, std::ostream& out);

void render_report_text(const EvaluationReport& report, const SchemaRegistry& schema,
                        std::ostream& out);
void render_report_json(const EvaluationReport& report, const SchemaRegistry& schema,
                        std::ostream& out);
void render_report_csv(const EvaluationReport& report, const SchemaRegistry& schema,
                       std::ostream& out);

}  // namespace nlsearch
