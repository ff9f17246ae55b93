#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlsearch/compiler.hpp"
#include "nlsearch/document.hpp"
#include "nlsearch/errors.hpp"
#include "nlsearch/eval.hpp"
#include "nlsearch/gateway.hpp"
#include "nlsearch/metrics.hpp"
#include "nlsearch/prompt.hpp"
#include "nlsearch/schema.hpp"

namespace {

using namespace nlsearch;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct MockScript {
    bool keyed = false;
    std::vector<std::string> sequential;
    std::map<std::string, std::vector<std::string>> by_query;
};

MockScript load_mock_script(const std::string& path) {
    MockScript script;
    auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
    if (doc.is_array()) {
        for (const auto& e : doc) script.sequential.push_back(e.get<std::string>());
        return script;
    }
    if (doc.is_object()) {
        script.keyed = true;
        for (const auto& [query, replies] : doc.items()) {
            if (replies.is_string()) {
                script.by_query[query] = {replies.get<std::string>()};
            } else {
                for (const auto& r : replies) {
                    script.by_query[query].push_back(r.get<std::string>());
                }
            }
        }
        return script;
    }
    throw IoError("mock script must be a JSON array or an object keyed by query");
}

struct CliConfig {
    std::string schema_path;
    std::string shots_path;
    std::string backend = "mock";
    std::string base_url;
    std::string model;
    std::string api_key_env = "NLSEARCH_API_KEY";
    std::string mock_script_path;
    std::string format = "both";
    int max_attempts = 3;
    int in_flight = 1;
    std::uint64_t seed = 0;
    bool verbose = false;

    SchemaRegistry schema() const {
        return schema_path.empty() ? default_schema() : load_schema(read_file(schema_path));
    }
    std::vector<FewShotExample> shots(const SchemaRegistry& registry) const {
        return shots_path.empty() ? default_shot_library()
                                  : load_shot_library(read_file(shots_path), registry);
    }
    RefinementPolicy policy() const {
        RefinementPolicy p;
        p.max_attempts = max_attempts;
        return p;
    }
};

// One client per query so keyed scripts replay deterministically under
// concurrency.
struct ClientFactory {
    const CliConfig& config;
    MockScript script;
    std::shared_ptr<CompletionClient> shared;

    explicit ClientFactory(const CliConfig& cfg) : config(cfg) {
        if (config.backend == "http") {
            HttpBackendConfig http;
            http.base_url = config.base_url;
            http.model = config.model;
            http.api_key_env = config.api_key_env;
            shared = make_http_client(http);
        } else {
            if (config.mock_script_path.empty()) {
                throw IoError("mock backend needs --mock-script");
            }
            script = load_mock_script(config.mock_script_path);
            if (!script.keyed) {
                shared = std::make_shared<MockClient>(script.sequential);
            }
        }
    }

    std::shared_ptr<CompletionClient> for_query(const std::string& query) {
        if (shared) return shared;
        auto it = script.by_query.find(query);
        return std::make_shared<MockClient>(
            it == script.by_query.end() ? std::vector<std::string>{} : it->second);
    }
};

void print_transcript(const TranslationRecord& record, std::ostream& out) {
    for (std::size_t i = 0; i < record.attempts.size(); ++i) {
        const Attempt& a = record.attempts[i];
        out << "attempt " << (i + 1) << ": "
            << (a.outcome.valid()
                    ? std::string("valid")
                    : std::string(to_string(a.outcome.why().kind)) + " (" +
                          a.outcome.why().detail + ")")
            << "\n  raw: " << a.raw_response << "\n";
    }
}

int cmd_translate(const CliConfig& config, const std::string& query) {
    const SchemaRegistry schema = config.schema();
    const auto shots = config.shots(schema);
    ClientFactory factory(config);
    auto client = factory.for_query(query);
    try {
        TranslationRecord record = translate(query, schema, shots, *client, config.policy());
        std::cout << serialize(*record.final, schema) << "\n";
        if (config.format == "filter" || config.format == "both") {
            const ScrubReport scrubbed = scrub(*record.final, schema);
            std::cout << serialize_filter(compile(scrubbed.doc_after, schema)) << "\n";
        }
        if (config.verbose) print_transcript(record, std::cerr);
        return 0;
    } catch (const TranslationFailed& failure) {
        std::cerr << "translation failed: " << failure.what() << "\n";
        print_transcript(failure.record, std::cerr);
        return 1;
    }
}

int cmd_compile(const CliConfig& config, const std::string& path) {
    const SchemaRegistry schema = config.schema();
    ParseOutcome outcome = parse_document(read_file(path), schema);
    if (!outcome.valid()) {
        std::cerr << "parse failed: " << to_string(outcome.why().kind) << " ("
                  << outcome.why().detail << ")\n";
        return 1;
    }
    const ScrubReport report = scrub(outcome.document(), schema);
    for (const auto& removal : report.removals) {
        std::cerr << "warning: removed " << removal.field << " = \"" << removal.value << "\" ("
                  << to_string(removal.reason) << ")\n";
    }
    const QueryAst ast = compile(report.doc_after, schema);
    if (config.format == "canonical" || config.format == "both") {
        std::cout << serialize_canonical(ast) << "\n";
    }
    if (config.format == "filter" || config.format == "both") {
        std::cout << serialize_filter(ast) << "\n";
    }
    return 0;
}

int cmd_eval(const CliConfig& config, const std::string& dataset_path,
             const std::string& out_dir) {
    const SchemaRegistry schema = config.schema();
    const auto shots = config.shots(schema);
    const auto records = load_dataset_file(dataset_path, schema);
    ClientFactory factory(config);
    const RefinementPolicy policy = config.policy();

    Translator translator = [&](const DatasetRecord& record) {
        auto client = factory.for_query(record.query);
        return translate(record.query, schema, shots, *client, policy);
    };
    const auto provider = default_embedding_provider(config.seed);
    EvaluationReport report =
        run_eval(records, translator, schema, *provider, config.in_flight);

    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/report.txt");
        render_report_text(report, schema, out);
    }
    {
        std::ofstream out(out_dir + "/report.json");
        render_report_json(report, schema, out);
    }
    {
        std::ofstream out(out_dir + "/report.csv");
        render_report_csv(report, schema, out);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", report.overall_mean);
    std::cout << "Overall mean: " << buf << "\n";
    return 0;
}

int cmd_export(const CliConfig& config, const std::string& dataset_path,
               const std::string& out_path) {
    const SchemaRegistry schema = config.schema();
    const auto shots = config.shots(schema);
    const auto records = load_dataset_file(dataset_path, schema);
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot open output file: " + out_path);
    export_finetune(records, schema, shots, out);
    std::cout << "exported " << records.size() << " record(s) to " << out_path << "\n";
    return 0;
}

int cmd_repl(const CliConfig& config) {
    const SchemaRegistry schema = config.schema();
    const auto shots = config.shots(schema);
    ClientFactory factory(config);
    std::string line;
    std::cout << "query> " << std::flush;
    while (std::getline(std::cin, line)) {
        const std::string query = trim(line);
        if (query == ":quit" || query == ":q") break;
        if (!query.empty()) {
            try {
                auto client = factory.for_query(query);
                TranslationRecord record =
                    translate(query, schema, shots, *client, config.policy());
                std::cout << serialize_pretty(*record.final, schema) << "\n";
                const ScrubReport scrubbed = scrub(*record.final, schema);
                std::cout << serialize_filter(compile(scrubbed.doc_after, schema)) << "\n";
            } catch (const Error& e) {
                std::cout << "error: " << e.what() << "\n";
            }
        }
        std::cout << "query> " << std::flush;
    }
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Natural-language search query translation toolkit"};
    app.require_subcommand(1);

    CliConfig config;
    app.add_option("--schema", config.schema_path, "Schema config file (JSON)");
    app.add_option("--shots", config.shots_path, "Shot library file (JSON)");
    app.add_option("--backend", config.backend, "Completion backend: mock or http")
        ->check(CLI::IsMember({"mock", "http"}));
    app.add_option("--base-url", config.base_url, "HTTP backend base URL");
    app.add_option("--model", config.model, "Model name for the HTTP backend");
    app.add_option("--api-key-env", config.api_key_env,
                   "Environment variable holding the API key");
    app.add_option("--mock-script", config.mock_script_path,
                   "Mock replay script (JSON array, or object keyed by query)");
    app.add_option("--max-attempts", config.max_attempts, "Refinement attempt budget")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", config.seed, "Seed for the embedding provider and splits");
    app.add_option("--in-flight", config.in_flight, "Concurrent translations during eval")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", config.format, "Output format")
        ->check(CLI::IsMember({"canonical", "filter", "both"}));
    app.add_flag("-v,--verbose", config.verbose, "Print the translation transcript");

    std::string query, input_path, out_dir = "eval-out", out_path = "finetune.jsonl";
    auto* translate_cmd = app.add_subcommand("translate", "Translate one query to a document");
    translate_cmd->add_option("query", query, "Natural language query")->required();
    auto* compile_cmd = app.add_subcommand("compile", "Compile a document file to a query");
    compile_cmd->add_option("file", input_path, "Document JSON file")->required();
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a dataset and write reports");
    eval_cmd->add_option("dataset", input_path, "Dataset file (JSONL)")->required();
    eval_cmd->add_option("--out-dir", out_dir, "Report output directory");
    auto* export_cmd = app.add_subcommand("export-finetune", "Export chat-pair training data");
    export_cmd->add_option("dataset", input_path, "Dataset file (JSONL)")->required();
    export_cmd->add_option("-o,--output", out_path, "Output file (JSONL)");
    auto* schema_cmd = app.add_subcommand("schema", "Print the active schema config");
    auto* repl_cmd = app.add_subcommand("repl", "Interactive read-translate-print loop");

    CLI11_PARSE(app, argc, argv);

    try {
        if (translate_cmd->parsed()) return cmd_translate(config, query);
        if (compile_cmd->parsed()) return cmd_compile(config, input_path);
        if (eval_cmd->parsed()) return cmd_eval(config, input_path, out_dir);
        if (export_cmd->parsed()) return cmd_export(config, input_path, out_path);
        if (schema_cmd->parsed()) {
            std::cout << dump_schema(config.schema());
            return 0;
        }
        if (repl_cmd->parsed()) return cmd_repl(config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
