#include "nlsearch/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <set>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nlsearch/errors.hpp"
#include "nlsearch/rng.hpp"

namespace nlsearch {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

int histogram_bin(double v) {
    const int bin = static_cast<int>(v * 20.0);
    return std::clamp(bin, 0, 19);
}

}  // namespace

std::vector<DatasetRecord> load_dataset(std::istream& in, const SchemaRegistry& schema) {
    std::vector<DatasetRecord> records;
    std::vector<std::string> problems;
    std::set<std::string> seen_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        ordered_json j = ordered_json::parse(trimmed, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            problems.push_back("line " + std::to_string(line_no) + ": not a JSON object");
            continue;
        }
        if (!j.contains("id") || !j["id"].is_string() || !j.contains("query") ||
            !j["query"].is_string() || !j.contains("ground_truth") ||
            !j["ground_truth"].is_object()) {
            problems.push_back("line " + std::to_string(line_no) +
                               ": needs string id, string query, object ground_truth");
            continue;
        }
        DatasetRecord record;
        record.id = j["id"].get<std::string>();
        record.query = j["query"].get<std::string>();
        if (!seen_ids.insert(record.id).second) {
            problems.push_back("line " + std::to_string(line_no) + ": duplicate id '" +
                               record.id + "'");
            continue;
        }
        ParseOutcome outcome = parse_document(j["ground_truth"].dump(), schema);
        if (!outcome.valid()) {
            problems.push_back("line " + std::to_string(line_no) + ": ground_truth invalid (" +
                               std::string(to_string(outcome.why().kind)) + ": " +
                               outcome.why().detail + ")");
            continue;
        }
        if (!outcome.coercions().empty()) {
            problems.push_back("line " + std::to_string(line_no) +
                               ": ground_truth required coercions");
            continue;
        }
        record.ground_truth = outcome.document();
        records.push_back(std::move(record));
    }
    if (!problems.empty()) {
        std::string what = "dataset has " + std::to_string(problems.size()) + " bad record(s):";
        for (const auto& p : problems) what += "\n  " + p;
        throw DatasetError(what);
    }
    return records;
}

std::vector<DatasetRecord> load_dataset_file(const std::string& path,
                                             const SchemaRegistry& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    return load_dataset(in, schema);
}

SplitResult split_dataset(const std::vector<DatasetRecord>& records, const SplitSpec& spec) {
    if (records.size() < 10) {
        throw DatasetError("dataset too small to split: " + std::to_string(records.size()) +
                           " records (need >= 10)");
    }
    if (std::abs(spec.train_fraction + spec.validation_fraction - 1.0) > 1e-9) {
        throw DatasetError("train_fraction and validation_fraction must sum to 1");
    }

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    SplitMix rng(spec.seed ^ 0x5e7a11dULL);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.bounded(i)]);
    }

    const double n = static_cast<double>(records.size());
    const double remain = 1.0 - spec.test_fraction;
    const double targets[3] = {n * remain * spec.train_fraction,
                               n * remain * spec.validation_fraction, n * spec.test_fraction};
    std::size_t counts[3];
    double remainders[3];
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        counts[i] = static_cast<std::size_t>(std::floor(targets[i]));
        remainders[i] = targets[i] - std::floor(targets[i]);
        assigned += counts[i];
    }
    // largest-remainder rounding, ties to the earlier bucket
    while (assigned < records.size()) {
        int best = 0;
        for (int i = 1; i < 3; ++i) {
            if (remainders[i] > remainders[best]) best = i;
        }
        ++counts[best];
        remainders[best] = -1.0;
        ++assigned;
    }

    SplitResult result;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < counts[0]; ++i) result.train.push_back(records[order[pos++]]);
    for (std::size_t i = 0; i < counts[1]; ++i) result.validation.push_back(records[order[pos++]]);
    for (std::size_t i = 0; i < counts[2]; ++i) result.test.push_back(records[order[pos++]]);
    return result;
}

Translator make_translator(const SchemaRegistry& schema, const std::vector<FewShotExample>& shots,
                           CompletionClient& client, const RefinementPolicy& policy) {
    return [&schema, shots, &client, policy](const DatasetRecord& record) {
        return translate(record.query, schema, shots, client, policy);
    };
}

EvaluationReport run_eval(const std::vector<DatasetRecord>& records, const Translator& translator,
                          const SchemaRegistry& schema, const EmbeddingProvider& provider,
                          int in_flight_cap, const ScoreOptions& options) {
    if (records.empty()) throw ContractViolation("run_eval needs a nonempty record list");
    if (in_flight_cap < 1) throw ContractViolation("in_flight_cap must be >= 1");

    std::vector<QueryResult> results(records.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= records.size()) return;
            const DatasetRecord& record = records[i];
            QueryResult& out = results[i];
            out.id = record.id;
            try {
                SearchEntityDocument pred;
                try {
                    TranslationRecord tr = translator(record);
                    out.attempts = static_cast<int>(tr.attempts.size());
                    pred = *tr.final;
                } catch (const TranslationFailed& failure) {
                    out.attempts = static_cast<int>(failure.record.attempts.size());
                    out.failed = true;  // empty prediction
                } catch (const BackendUnavailable&) {
                    out.failed = true;
                }
                out.score = score_query(record.ground_truth, pred, schema, provider, options);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(in_flight_cap), records.size());
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);

    // id-sorted reduction keeps aggregation independent of worker
    // interleaving
    std::sort(results.begin(), results.end(),
              [](const QueryResult& a, const QueryResult& b) { return a.id < b.id; });

    EvaluationReport report;
    report.per_query = std::move(results);

    std::map<std::string, std::map<MetricKind, double>> sums;
    double avg_sum = 0.0;
    for (const auto& qr : report.per_query) {
        avg_sum += qr.score.average;
        ++report.histogram[histogram_bin(qr.score.average)];
        for (const auto& fs : qr.score.field_scores) {
            for (const auto& [metric, score] : fs.scores) {
                sums[fs.field][metric] += score;
                if (metric == MetricKind::Exact) {
                    ++report.exact_histograms[fs.field][histogram_bin(score)];
                }
            }
        }
    }
    const double n = static_cast<double>(report.per_query.size());
    report.overall_mean = avg_sum / n;
    for (auto& [field, metric_sums] : sums) {
        for (auto& [metric, sum] : metric_sums) {
            report.per_field_means[field][metric] = sum / n;
        }
    }
    return report;
}

void export_finetune(const std::vector<DatasetRecord>& records, const SchemaRegistry& schema,
                     const std::vector<FewShotExample>& shots, std::ostream& out) {
    if (records.empty()) {
        out << "# fine-tune export: 0 records\n";
        if (!out) throw IoError("write failure during fine-tune export");
        return;
    }
    const std::string system_message = build_system_message(schema, shots);
    for (const auto& record : records) {
        ordered_json line;
        line["system"] = system_message;
        line["prompt"] = record.query;
        line["completion"] = serialize(record.ground_truth, schema);
        out << line.dump() << "\n";
    }
    if (!out) throw IoError("write failure during fine-tune export");
}

namespace {

std::vector<std::string> unit_order(const SchemaRegistry& schema) {
    std::vector<std::string> out;
    for (const auto& unit : scoring_units(schema)) out.push_back(unit.name);
    return out;
}

const std::map<MetricKind, double>* find_means(const EvaluationReport& report,
                                               const std::string& unit) {
    auto it = report.per_field_means.find(unit);
    return it == report.per_field_means.end() ? nullptr : &it->second;
}

}  // namespace

void render_report_text(const EvaluationReport& report, const SchemaRegistry& schema,
                        std::ostream& out) {
    out << "Per-field mean scores\n";
    out << "---------------------\n";
    char row[160];
    std::snprintf(row, sizeof(row), "%-24s %10s %10s %10s %10s\n", "Field", "Exact", "Jaccard",
                  "Cosine", "Semantic");
    out << row;
    for (const auto& unit : unit_order(schema)) {
        const auto* means = find_means(report, unit);
        std::string cells[4] = {"-", "-", "-", "-"};
        if (means) {
            for (const auto& [metric, mean] : *means) {
                cells[static_cast<int>(metric)] = fmt(mean);
            }
        }
        std::snprintf(row, sizeof(row), "%-24s %10s %10s %10s %10s\n", unit.c_str(),
                      cells[0].c_str(), cells[1].c_str(), cells[2].c_str(), cells[3].c_str());
        out << row;
    }
    out << "\nQueries: " << report.per_query.size() << "\n";
    int failures = 0;
    for (const auto& qr : report.per_query) failures += qr.failed ? 1 : 0;
    out << "Failed translations: " << failures << "\n";
    out << "Overall mean: " << fmt(report.overall_mean) << "\n";
    out << "\nHistogram of per-query averages (20 bins over [0,1])\n";
    for (int i = 0; i < 20; ++i) {
        std::snprintf(row, sizeof(row), "  [%4.2f,%4.2f%s %d\n", i * 0.05, (i + 1) * 0.05,
                      i == 19 ? "]" : ")", report.histogram[i]);
        out << row;
    }
}

void render_report_json(const EvaluationReport& report, const SchemaRegistry& schema,
                        std::ostream& out) {
    ordered_json j;
    j["overall_mean"] = report.overall_mean;
    j["queries"] = report.per_query.size();
    j["per_field_means"] = ordered_json::object();
    for (const auto& unit : unit_order(schema)) {
        const auto* means = find_means(report, unit);
        if (!means) continue;
        ordered_json m = ordered_json::object();
        for (const auto& [metric, mean] : *means) m[std::string(to_string(metric))] = mean;
        j["per_field_means"][unit] = std::move(m);
    }
    j["histogram"] = report.histogram;
    j["exact_histograms"] = ordered_json::object();
    for (const auto& unit : unit_order(schema)) {
        auto it = report.exact_histograms.find(unit);
        if (it != report.exact_histograms.end()) j["exact_histograms"][unit] = it->second;
    }
    j["per_query"] = ordered_json::array();
    for (const auto& qr : report.per_query) {
        j["per_query"].push_back({{"id", qr.id},
                                  {"average", qr.score.average},
                                  {"attempts", qr.attempts},
                                  {"failed", qr.failed}});
    }
    out << j.dump(2) << "\n";
}

void render_report_csv(const EvaluationReport& report, const SchemaRegistry& schema,
                       std::ostream& out) {
    out << "field,metric,mean\n";
    for (const auto& unit : unit_order(schema)) {
        const auto* means = find_means(report, unit);
        if (!means) continue;
        for (const auto& [metric, mean] : *means) {
            out << unit << "," << to_string(metric) << "," << fmt(mean) << "\n";
        }
    }
    out << "\nid,average,attempts,failed\n";
    for (const auto& qr : report.per_query) {
        out << qr.id << "," << fmt(qr.score.average) << "," << qr.attempts << ","
            << (qr.failed ? 1 : 0) << "\n";
    }
}

}  // namespace nlsearch
