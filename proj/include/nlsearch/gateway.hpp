#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nlsearch/document.hpp"
#include "nlsearch/errors.hpp"
#include "nlsearch/prompt.hpp"
#include "nlsearch/schema.hpp"

namespace nlsearch {

struct Turn {
    std::string role;  // "user" or "assistant"
    std::string text;
};

struct CompletionRequest {
    std::string system_message;
    std::vector<Turn> turns;
    int max_output_tokens = 1024;
    double temperature = 0.0;
};

class CompletionClient {
  public:
    virtual ~CompletionClient() = default;
    /// Returns the backend's raw text. Throws BackendUnavailable or
    /// AuthError. Must be safe for concurrent calls.
    virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Replays a fixed script in order and records every request it received.
class MockClient final : public CompletionClient {
  public:
    explicit MockClient(std::vector<std::string> script);

    std::string complete(const CompletionRequest& request) override;
    std::vector<CompletionRequest> recorded() const;

  private:
    std::vector<std::string> script_;
    std::size_t next_ = 0;
    mutable std::mutex mutex_;
    std::vector<CompletionRequest> recorded_;
};

struct HttpBackendConfig {
    std::string base_url;  // e.g. "https://api.example.com"
    std::string path = "/v1/chat/completions";
    std::string model;
    /// Name of the environment variable holding the API key; credentials
    /// are never passed directly.
    std::string api_key_env = "NLSEARCH_API_KEY";
    int timeout_seconds = 60;
};

/// OpenAI-style chat-completion backend. Throws AuthError when the key
/// variable is unset or the server rejects it; BackendUnavailable
/// (retryable for transport and 5xx failures) otherwise.
std::unique_ptr<CompletionClient> make_http_client(HttpBackendConfig config);

struct RefinementPolicy {
    int max_attempts = 3;
    /// {attempt} and {reason} placeholders.
    std::string alteration_template =
        "Attempt {attempt}: your previous reply {reason}. Return ONLY one JSON object with the "
        "documented search fields and nothing else.";
};

struct Attempt {
    std::string raw_response;
    ParseOutcome outcome;
    double latency_ms = 0.0;
};

struct TranslationRecord {
    std::string query;
    std::vector<Attempt> attempts;
    std::optional<SearchEntityDocument> final;
};

struct TranslationFailed : Error {
    TranslationFailed(const std::string& what, TranslationRecord record)
        : Error(what), record(std::move(record)) {}
    TranslationRecord record;
};

/// The execution-refinement loop: prompt, parse, and on failure re-prompt
/// with a corrective suffix until the reply parses or the attempt budget
/// runs out (then throws TranslationFailed with the full record).
TranslationRecord translate(const std::string& query, const SchemaRegistry& schema,
                            const std::vector<FewShotExample>& shots, CompletionClient& client,
                            const RefinementPolicy& policy = {});

CompletionRequest build_request(const PromptBundle& bundle);

}  // namespace nlsearch
