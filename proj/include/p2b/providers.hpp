#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "p2b/common.hpp"
#include "p2b/errors.hpp"

namespace p2b {

struct GenerationConfig {
    std::string model_id;
    int context_limit_tokens = 0;
    double temperature = 0.0;  // fixed; determinism is the whole point
    int max_response_tokens = 0;
};

using EmbeddingVector = std::vector<double>;

// ceil(utf8_bytes / 4); empty text estimates to 0. A deliberate heuristic:
// it only gates chunk sizes, and the chunker carries a safety margin that
// absorbs the difference from any real tokenizer.
int estimate_tokens(const std::string& text);

// Throws BudgetExceeded when prompt + response cannot fit the context.
void require_budget(const GenerationConfig& config, const std::string& prompt);

class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    virtual std::string generate(const GenerationConfig& config,
                                 const std::string& prompt) = 0;
};

class TextEmbedder {
public:
    virtual ~TextEmbedder() = default;
    // One unit vector per input, order preserved. Empty input text is an
    // error (EmptyInputText), not a zero vector.
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

// Deterministic stand-in for a chat-completion endpoint. Output is a pure
// function of (seed, prompt); optional scripts pin exact responses for
// specific prompts so tests can stage any provider behavior.
class MockGenerator : public TextGenerator {
public:
    explicit MockGenerator(std::uint64_t seed = 42) : seed_(seed) {}

    void script_exact(const std::string& prompt, const std::string& response);
    void script_hash(std::uint64_t prompt_hash, const std::string& response);

    std::string generate(const GenerationConfig& config,
                         const std::string& prompt) override;

private:
    std::uint64_t seed_;
    std::unordered_map<std::string, std::string> exact_;
    std::unordered_map<std::uint64_t, std::string> by_hash_;
};

// Hash-seeded pseudo-random unit vectors: identical text, identical vector.
class MockEmbedder : public TextEmbedder {
public:
    explicit MockEmbedder(int dim = 48, std::uint64_t seed = 0)
        : dim_(dim), seed_(seed) {}

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    int dim_;
    std::uint64_t seed_;
};

struct RetryPolicy {
    int attempts = 3;
    int base_ms = 1000;  // doubled per attempt; tests shrink this
};

struct HttpRequest {
    std::string url;
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::string transport_error;  // non-empty means the request never completed

    bool transport_ok() const { return transport_error.empty(); }
};

// Pluggable so tests can stage failures without sockets.
using Transport = std::function<HttpResponse(const HttpRequest&)>;

Transport default_transport();

struct GenerationEndpoint {
    std::string endpoint_url;
    std::string model_id;
    int context_limit_tokens = 0;
    int max_response_tokens = 0;
    std::string api_key_env;  // empty: endpoint needs no credential
};

struct EmbeddingEndpoint {
    std::string endpoint_url;
    std::string model_id;
    std::string api_key_env;
};

struct ProviderConfig {
    GenerationEndpoint generation;
    EmbeddingEndpoint embedding;
    int concurrency_cap = 4;

    GenerationConfig generation_config() const;
};

ProviderConfig load_provider_config(const std::filesystem::path& path);

// Key for the named environment variable; nullopt when the config names no
// variable (credential-free endpoint). Named but unset or empty is an error:
// a silent unauthenticated call would be misleading.
std::optional<std::string> resolve_api_key(const std::string& api_key_env);

// Generic chat-completion client (vendor-neutral: endpoint URL, model id,
// temperature, messages). Credentials come exclusively from the environment
// variable named in the config.
class HttpGenerator : public TextGenerator {
public:
    explicit HttpGenerator(GenerationEndpoint endpoint, RetryPolicy retry = {},
                           Transport transport = {});

    std::string generate(const GenerationConfig& config,
                         const std::string& prompt) override;

private:
    GenerationEndpoint endpoint_;
    RetryPolicy retry_;
    Transport transport_;
};

class HttpEmbedder : public TextEmbedder {
public:
    explicit HttpEmbedder(EmbeddingEndpoint endpoint, RetryPolicy retry = {},
                          Transport transport = {});

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    EmbeddingEndpoint endpoint_;
    RetryPolicy retry_;
    Transport transport_;
};

}  // namespace p2b
