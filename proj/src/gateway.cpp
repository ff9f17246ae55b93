#include "nlsearch/gateway.hpp"

#include <chrono>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "nlsearch/errors.hpp"

namespace nlsearch {

MockClient::MockClient(std::vector<std::string> script) : script_(std::move(script)) {}

std::string MockClient::complete(const CompletionRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);
    recorded_.push_back(request);
    if (next_ >= script_.size()) {
        throw BackendUnavailable("mock script exhausted after " + std::to_string(next_) +
                                 " responses");
    }
    return script_[next_++];
}

std::vector<CompletionRequest> MockClient::recorded() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return recorded_;
}

namespace {

class HttpClient final : public CompletionClient {
  public:
    explicit HttpClient(HttpBackendConfig config) : config_(std::move(config)) {}

    std::string complete(const CompletionRequest& request) override {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (!key || !*key) {
            throw AuthError("credential variable " + config_.api_key_env + " is not set");
        }

        nlohmann::json body;
        body["model"] = config_.model;
        body["temperature"] = request.temperature;
        body["max_tokens"] = request.max_output_tokens;
        body["messages"] = nlohmann::json::array();
        body["messages"].push_back({{"role", "system"}, {"content", request.system_message}});
        for (const auto& turn : request.turns) {
            body["messages"].push_back({{"role", turn.role}, {"content", turn.text}});
        }

        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_seconds);
        client.set_read_timeout(config_.timeout_seconds);
        httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
        auto res = client.Post(config_.path, headers, body.dump(), "application/json");
        if (!res) {
            throw BackendUnavailable("transport failure: " + httplib::to_string(res.error()),
                                     /*retryable=*/true);
        }
        if (res->status == 401 || res->status == 403) {
            throw AuthError("backend rejected credentials (HTTP " +
                            std::to_string(res->status) + ")");
        }
        if (res->status >= 500) {
            throw BackendUnavailable("backend error HTTP " + std::to_string(res->status),
                                     /*retryable=*/true);
        }
        if (res->status != 200) {
            throw BackendUnavailable("unexpected HTTP " + std::to_string(res->status));
        }
        auto parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
            throw BackendUnavailable("malformed backend response");
        }
        return parsed["choices"][0]["message"]["content"].get<std::string>();
    }

  private:
    HttpBackendConfig config_;
};

std::string replace_all(std::string text, std::string_view needle, std::string_view with) {
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), with);
        pos += with.size();
    }
    return text;
}

std::string failure_reason(const ParseFailure& why) {
    switch (why.kind) {
        case ParseFailure::Kind::NotJson:
            return "was not a single valid JSON object";
        case ParseFailure::Kind::WrongRoot:
            return "was not a JSON object at the top level";
        case ParseFailure::Kind::UnknownField:
            return "used a field that is not in the schema (" + why.detail + ")";
        case ParseFailure::Kind::TypeMismatch:
            return "used a wrong value type (" + why.detail + ")";
    }
    return "was invalid";
}

}  // namespace

std::unique_ptr<CompletionClient> make_http_client(HttpBackendConfig config) {
    return std::make_unique<HttpClient>(std::move(config));
}

CompletionRequest build_request(const PromptBundle& bundle) {
    CompletionRequest request;
    request.system_message = bundle.system_message;
    std::string user_text = bundle.user_query;
    if (!bundle.refinement_suffix.empty()) {
        user_text += "\n\n" + bundle.refinement_suffix;
    }
    request.turns.push_back({"user", user_text});
    return request;
}

TranslationRecord translate(const std::string& query, const SchemaRegistry& schema,
                            const std::vector<FewShotExample>& shots, CompletionClient& client,
                            const RefinementPolicy& policy) {
    if (policy.max_attempts < 1) throw ContractViolation("max_attempts must be >= 1");
    PromptBundle bundle = render_prompt(schema, shots, query);

    TranslationRecord record;
    record.query = query;
    for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        const CompletionRequest request = build_request(bundle);
        const auto start = std::chrono::steady_clock::now();
        const std::string raw = client.complete(request);
        const auto elapsed = std::chrono::steady_clock::now() - start;

        ParseOutcome outcome = parse_document(raw, schema);
        record.attempts.push_back(
            {raw, outcome,
             std::chrono::duration<double, std::milli>(elapsed).count()});
        if (outcome.valid()) {
            record.final = outcome.document();
            return record;
        }
        bundle.refinement_suffix = replace_all(
            replace_all(policy.alteration_template, "{attempt}", std::to_string(attempt + 1)),
            "{reason}", failure_reason(outcome.why()));
    }
    throw TranslationFailed("no valid document after " + std::to_string(policy.max_attempts) +
                                " attempts for query: " + query,
                            std::move(record));
}

}  // namespace nlsearch
