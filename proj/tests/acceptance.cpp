#include <doctest.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nlsearch/compiler.hpp"
#include "nlsearch/errors.hpp"
#include "nlsearch/eval.hpp"
#include "nlsearch/gateway.hpp"
#include "nlsearch/metrics.hpp"
#include "nlsearch/prompt.hpp"
#include "nlsearch/rng.hpp"

using namespace nlsearch;

namespace {

const SchemaRegistry& schema() {
    static const SchemaRegistry s = default_schema();
    return s;
}

const EmbeddingProvider& provider() {
    static const auto p = default_embedding_provider(42);
    return *p;
}

void report(const char* name) { std::printf("[PASS] %s\n", name); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), ("cannot open " + path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --- generators ------------------------------------------------------------

const std::vector<std::string>& word_pool() {
    static const std::vector<std::string> pool = {
        "crm",    "software", "hospital", "cloud",   "security", "lawyer",
        "data",   "scientist", "sales",   "manager", "oil",      "gas"};
    return pool;
}

std::string random_phrase(SplitMix& rng) {
    std::string out;
    const std::uint64_t n = 1 + rng.bounded(3);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += word_pool()[rng.bounded(word_pool().size())];
    }
    return out;
}

// Shape-valid document over the default schema; values may be out of bank
// and bound pairs may be reversed (scrub's job to fix).
SearchEntityDocument random_document(SplitMix& rng, bool allow_invalid_values) {
    SearchEntityDocument doc;
    for (const auto& spec : schema().fields()) {
        if (rng.bounded(3) != 0) continue;  // each field present ~1/3 of the time
        if (spec.kind == FieldKind::Integer) {
            for (const auto& unit : bound_units(spec)) {
                if (rng.bounded(2)) doc.set(unit, std::int64_t(rng.bounded(100000)));
            }
        } else if (spec.shape == InputShape::StringListMap) {
            LocationMap map;
            for (const auto& sub : spec.sub_keys) {
                if (rng.bounded(3) != 0) continue;
                StringList values;
                const auto& bank = spec.sub_banks.at(sub);
                if (!bank.empty() && (!allow_invalid_values || rng.bounded(2))) {
                    values.push_back(bank[rng.bounded(bank.size())]);
                } else {
                    values.push_back(random_phrase(rng));
                }
                map[sub] = values;
            }
            if (!map.empty()) doc.set(spec.name, map);
        } else if (spec.shape == InputShape::ScalarString) {
            if (spec.kind == FieldKind::Categorical && (!allow_invalid_values || rng.bounded(2))) {
                doc.set(spec.name, spec.word_bank[rng.bounded(spec.word_bank.size())]);
            } else {
                doc.set(spec.name, random_phrase(rng));
            }
        } else {
            StringList values;
            std::set<std::string> seen;
            const std::uint64_t n = 1 + rng.bounded(3);
            for (std::uint64_t i = 0; i < n; ++i) {
                std::string v;
                if (spec.kind == FieldKind::Categorical &&
                    (!allow_invalid_values || rng.bounded(2))) {
                    v = spec.word_bank[rng.bounded(spec.word_bank.size())];
                } else {
                    v = random_phrase(rng);
                }
                if (seen.insert(to_lower(v)).second) values.push_back(v);
            }
            doc.set(spec.name, values);
        }
    }
    return doc;
}

}  // namespace

TEST_CASE("syntax-error elimination under a fault-injecting backend") {
    const auto start = std::chrono::steady_clock::now();
    SplitMix rng(2024);
    const auto shots = default_shot_library();
    RefinementPolicy policy;
    policy.max_attempts = 3;

    int escaped_syntax_errors = 0;
    int successes = 0;
    for (int i = 0; i < 1000; ++i) {
        const SearchEntityDocument doc = random_document(rng, false);
        std::vector<std::string> script;
        if (rng.uniform01() < 0.5) {
            script.push_back("I'm sorry, I didn't quite catch that (" + std::to_string(i) + ")");
        }
        script.push_back("Answer:\n" + serialize(doc, schema()));
        MockClient client(script);
        const TranslationRecord record =
            translate("simulated query " + std::to_string(i), schema(), shots, client, policy);
        REQUIRE(record.final.has_value());
        ++successes;
        // shape validity: the final document re-parses cleanly
        const ParseOutcome reparsed = parse_document(serialize(*record.final, schema()), schema());
        if (!reparsed.valid()) ++escaped_syntax_errors;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(successes == 1000);
    REQUIRE(escaped_syntax_errors == 0);
    REQUIRE(elapsed < 10.0);
    report("syntax-error elimination: 1000/1000 refined translations shape-valid, 0 escapes");
}

TEST_CASE("metric oracle equivalence") {
    const auto start = std::chrono::steady_clock::now();
    SplitMix rng(7);

    // jaccard against element-by-element enumeration
    for (int i = 0; i < 10000; ++i) {
        std::set<std::string> a, b;
        for (std::uint64_t k = 0, n = rng.bounded(6); k < n; ++k) {
            a.insert(word_pool()[rng.bounded(word_pool().size())]);
        }
        for (std::uint64_t k = 0, n = rng.bounded(6); k < n; ++k) {
            b.insert(word_pool()[rng.bounded(word_pool().size())]);
        }
        std::size_t inter = 0;
        std::set<std::string> uni;
        for (const auto& x : a) {
            uni.insert(x);
            if (b.count(x)) ++inter;
        }
        for (const auto& x : b) uni.insert(x);
        const double expected =
            uni.empty() ? 1.0
                        : static_cast<double>(inter) / static_cast<double>(uni.size());
        REQUIRE(jaccard(a, b) == expected);
    }

    // cosine against a naive dot/norm oracle over token bags
    for (int i = 0; i < 10000; ++i) {
        std::string a, b;
        for (std::uint64_t k = 0, n = rng.bounded(6); k < n; ++k) {
            a += word_pool()[rng.bounded(word_pool().size())] + " ";
        }
        for (std::uint64_t k = 0, n = rng.bounded(6); k < n; ++k) {
            b += word_pool()[rng.bounded(word_pool().size())] + " ";
        }
        std::map<std::string, double> fa, fb;
        for (const auto& t : tokenize(a)) fa[t] += 1.0;
        for (const auto& t : tokenize(b)) fb[t] += 1.0;
        double expected = 0.0;
        if (!fa.empty() && !fb.empty()) {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (const auto& [t, f] : fa) na += f * f;
            for (const auto& [t, f] : fb) nb += f * f;
            for (const auto& [t, f] : fa) {
                if (fb.count(t)) dot += f * fb.at(t);
            }
            expected = dot / (std::sqrt(na) * std::sqrt(nb));
        }
        REQUIRE(std::abs(cosine_sim(a, b) - expected) <= 1e-12);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(elapsed < 30.0);
    report("metric oracle equivalence: jaccard exact and cosine within 1e-12 on 10000 pairs each");
}

TEST_CASE("aggregation arithmetic") {
    SplitMix rng(11);
    SearchEntityDocument gt = random_document(rng, false);
    gt.set("employee_min", std::int64_t{5000});
    REQUIRE(score_query(gt, gt, schema(), provider()).average == 1.0);

    SearchEntityDocument missing = gt;
    missing.erase("employee_min");
    REQUIRE(std::abs(score_query(gt, missing, schema(), provider()).average - 33.0 / 34.0) <=
            1e-12);

    // independent oracle: enumerate all 34 metric values and average
    for (int i = 0; i < 1000; ++i) {
        const SearchEntityDocument a = random_document(rng, false);
        const SearchEntityDocument b = random_document(rng, false);
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& unit : scoring_units(schema())) {
            const DocumentValue* g = a.find(unit.name);
            const DocumentValue* p = b.find(unit.name);
            for (const MetricKind metric : metrics_for(unit.kind)) {
                double v;
                if (!g && !p) {
                    v = 1.0;
                } else if (!g || !p) {
                    v = 0.0;
                } else {
                    switch (metric) {
                        case MetricKind::Exact: v = exact_match(*g, *p); break;
                        case MetricKind::Jaccard: v = jaccard(value_set(*g), value_set(*p)); break;
                        case MetricKind::Cosine:
                            v = cosine_sim(flatten_text(*g), flatten_text(*p));
                            break;
                        case MetricKind::Semantic:
                            v = semantic_sim(flatten_text(*g), flatten_text(*p), provider());
                            break;
                    }
                }
                sum += v;
                ++count;
            }
        }
        REQUIRE(count == 34);
        const double expected = sum / 34.0;
        REQUIRE(std::abs(score_query(a, b, schema(), provider()).average - expected) <= 1e-12);
    }
    report("aggregation arithmetic: 33/34 and 1.0 exact, 1000 pairs match the enumeration oracle");
}

TEST_CASE("scrub rules hold on generated documents") {
    SplitMix rng(13);
    for (int i = 0; i < 1000; ++i) {
        const SearchEntityDocument doc = random_document(rng, true);
        const ScrubReport first = scrub(doc, schema());
        REQUIRE(validate_against_bank(first.doc_after, schema()).empty());
        if (first.doc_after.has("titles")) {
            REQUIRE_FALSE(first.doc_after.has("management_levels"));
            REQUIRE_FALSE(first.doc_after.has("departments"));
        }
        for (const auto& spec : schema().fields()) {
            if (spec.kind != FieldKind::Integer) continue;
            const auto units = bound_units(spec);
            const DocumentValue* lo = first.doc_after.find(units[0]);
            const DocumentValue* hi = first.doc_after.find(units[1]);
            if (lo && hi) {
                REQUIRE(std::get<std::int64_t>(*lo) <= std::get<std::int64_t>(*hi));
            }
        }
        const ScrubReport second = scrub(first.doc_after, schema());
        REQUIRE(second.removals.empty());
        REQUIRE(second.doc_after == first.doc_after);
    }
    report("scrub rules: bank, exclusivity, bound order, and idempotence on 1000 documents");
}

TEST_CASE("serialization round-trip") {
    SplitMix rng(17);
    auto ci_less = [](const std::string& a, const std::string& b) {
        const std::string la = to_lower(a), lb = to_lower(b);
        return la != lb ? la < lb : a < b;
    };
    const std::vector<std::string> tricky = {"plain", "with space", "qu\"ote", "back\\slash",
                                             "(parens)", "A AND B", "x OR y"};
    for (int i = 0; i < 1000; ++i) {
        QueryAst ast;
        for (const auto& spec : schema().fields()) {
            if (rng.bounded(2)) continue;
            Clause c;
            if (spec.kind == FieldKind::Integer) {
                c.kind = Clause::Kind::Range;
                c.field = bound_prefix(spec);
                if (rng.bounded(2)) c.min = std::int64_t(rng.bounded(100000));
                if (rng.bounded(2)) c.max = std::int64_t((c.min ? *c.min : 0) + rng.bounded(1000));
                if (!c.min && !c.max) continue;
            } else if (spec.shape == InputShape::StringListMap) {
                c.kind = Clause::Kind::ScopedMembership;
                c.field = spec.name;
                c.sub_key = spec.sub_keys[rng.bounded(spec.sub_keys.size())];
                c.values.push_back(tricky[rng.bounded(tricky.size())]);
            } else {
                c.kind = spec.kind == FieldKind::Categorical ? Clause::Kind::Membership
                                                             : Clause::Kind::TextMatch;
                c.field = spec.name;
                std::set<std::string> seen;
                for (std::uint64_t k = 0, n = 1 + rng.bounded(3); k < n; ++k) {
                    const std::string v = tricky[rng.bounded(tricky.size())];
                    if (seen.insert(v).second) c.values.push_back(v);
                }
                std::sort(c.values.begin(), c.values.end(), ci_less);
            }
            ast.clauses.push_back(std::move(c));
        }
        const std::string filter = serialize_filter(ast);
        REQUIRE(parse_filter(filter, schema()) == ast);
        REQUIRE(serialize_canonical(ast) == serialize_canonical(ast));
    }
    report("serialization round-trip: 1000 ASTs survive filter re-parse; canonical is stable");
}

TEST_CASE("few-shot fidelity against the golden file") {
    const auto shots = default_shot_library();
    const PromptBundle bundle = render_prompt(schema(), shots, "placeholder query");
    const std::string golden =
        read_file(std::string(NLSEARCH_TEST_DATA_DIR) + "/prompt_golden.txt");
    REQUIRE_FALSE(golden.empty());
    REQUIRE(bundle.system_message.find(golden) != std::string::npos);
    REQUIRE(bundle.system_message.find("Leave this empty if \"titles\" is not empty") !=
            std::string::npos);

    std::istringstream words(bundle.system_message);
    std::string word;
    std::size_t count = 0;
    while (words >> word) ++count;
    REQUIRE(count >= 2000);
    report("few-shot fidelity: golden shot block and guideline present, system message >= 2000 words");
}

TEST_CASE("split arithmetic is exact and seed-stable") {
    std::vector<DatasetRecord> records;
    for (int i = 0; i < 500; ++i) {
        DatasetRecord r;
        r.id = "r" + std::to_string(i);
        r.query = "q" + std::to_string(i);
        records.push_back(std::move(r));
    }
    SplitSpec spec;
    spec.seed = 31337;
    const SplitResult first = split_dataset(records, spec);
    REQUIRE(first.train.size() == 360);
    REQUIRE(first.validation.size() == 90);
    REQUIRE(first.test.size() == 50);
    for (int run = 0; run < 4; ++run) {
        const SplitResult again = split_dataset(records, spec);
        for (std::size_t i = 0; i < first.train.size(); ++i) {
            REQUIRE(again.train[i].id == first.train[i].id);
        }
        for (std::size_t i = 0; i < first.test.size(); ++i) {
            REQUIRE(again.test[i].id == first.test[i].id);
        }
    }
    report("split arithmetic: 500 records split 360/90/50, identical across 5 seeded runs");
}

TEST_CASE("end-to-end determinism of the eval command") {
    namespace fs = std::filesystem;
    const std::string scratch = NLSEARCH_SCRATCH_DIR;
    fs::create_directories(scratch);
    const std::string dataset = std::string(NLSEARCH_DATA_DIR) + "/sample_dataset.jsonl";
    const std::string script = std::string(NLSEARCH_DATA_DIR) + "/sample_mock_script.json";

    auto run = [&](int in_flight, const std::string& tag) {
        const std::string out_dir = scratch + "/" + tag;
        fs::remove_all(out_dir);
        std::ostringstream cmd;
        cmd << '"' << NLSEARCH_CLI_PATH << '"' << " --backend mock --mock-script \"" << script
            << "\" --in-flight " << in_flight << " eval \"" << dataset << "\" --out-dir \""
            << out_dir << "\" > " << out_dir << ".stdout 2>&1";
        fs::create_directories(out_dir);
        REQUIRE(std::system(cmd.str().c_str()) == 0);
        return std::array<std::string, 3>{read_file(out_dir + "/report.txt"),
                                          read_file(out_dir + "/report.json"),
                                          read_file(out_dir + "/report.csv")};
    };

    const auto serial_a = run(1, "serial-a");
    const auto serial_b = run(1, "serial-b");
    const auto parallel_a = run(8, "parallel-a");
    const auto parallel_b = run(8, "parallel-b");
    for (int i = 0; i < 3; ++i) {
        REQUIRE(serial_a[i] == serial_b[i]);
        REQUIRE(serial_a[i] == parallel_a[i]);
        REQUIRE(serial_a[i] == parallel_b[i]);
    }
    REQUIRE_FALSE(serial_a[0].empty());
    report("end-to-end determinism: byte-identical reports across runs and in_flight {1, 8}");
}
