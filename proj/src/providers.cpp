#include "p2b/providers.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <json.hpp>

#ifndef P2B_NO_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace p2b {

int estimate_tokens(const std::string& text) {
    return static_cast<int>((text.size() + 3) / 4);
}

void require_budget(const GenerationConfig& config, const std::string& prompt) {
    int need = estimate_tokens(prompt) + config.max_response_tokens;
    if (need > config.context_limit_tokens) {
        throw BudgetExceeded("prompt (" + std::to_string(estimate_tokens(prompt)) +
                             " est. tokens) + response (" +
                             std::to_string(config.max_response_tokens) +
                             ") exceeds context limit " +
                             std::to_string(config.context_limit_tokens));
    }
}

void MockGenerator::script_exact(const std::string& prompt, const std::string& response) {
    exact_[prompt] = response;
}

void MockGenerator::script_hash(std::uint64_t prompt_hash, const std::string& response) {
    by_hash_[prompt_hash] = response;
}

std::string MockGenerator::generate(const GenerationConfig& config,
                                    const std::string& prompt) {
    require_budget(config, prompt);
    if (auto it = exact_.find(prompt); it != exact_.end()) return it->second;
    std::uint64_t h = fnv1a64(prompt);
    if (auto it = by_hash_.find(h); it != by_hash_.end()) return it->second;

    SplitMix64 g(h ^ seed_);
    std::uint64_t mix = g.next();
    if (prompt.rfind("Your task is to assess the compliance", 0) == 0) {
        int score = 1 + static_cast<int>(mix % 5);
        return "Score: " + std::to_string(score) +
               ". Explanation: Mock assessment of the supplied chunk (signature " +
               hex64(h) + ").";
    }
    if (prompt.rfind("Output a comprehensive answer", 0) == 0) {
        switch (mix % 4) {
            case 0: return "Yes, the documentation addresses this point directly (paragraph 0).";
            case 1: return "No, the documentation does not address this point (paragraph 0).";
            case 2: return "N/A, the retrieved paragraphs do not bear on this question.";
            default: return "No, I cannot answer";
        }
    }
    // Unknown prompt family: loud, unparseable on purpose so misrouted
    // prompts fail fast in tests.
    return "mock response " + hex64(mix);
}

std::vector<EmbeddingVector> MockEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (texts[i].empty()) {
            throw EmptyInputText("embed input at index " + std::to_string(i));
        }
        SplitMix64 g(fnv1a64(texts[i]) ^ seed_);
        EmbeddingVector v(dim_);
        double norm_sq = 0.0;
        for (int d = 0; d < dim_; ++d) {
            v[d] = 2.0 * g.next_unit() - 1.0;
            norm_sq += v[d] * v[d];
        }
        double norm = std::sqrt(norm_sq);
        if (norm < 1e-12) {
            v.assign(dim_, 0.0);
            v[0] = 1.0;
        } else {
            for (auto& x : v) x /= norm;
        }
        out.push_back(std::move(v));
    }
    return out;
}

GenerationConfig ProviderConfig::generation_config() const {
    return {generation.model_id, generation.context_limit_tokens, 0.0,
            generation.max_response_tokens};
}

ProviderConfig load_provider_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }

    ProviderConfig cfg;
    try {
        auto& gen = j.at("generation");
        cfg.generation.endpoint_url = gen.at("endpoint_url").get<std::string>();
        cfg.generation.model_id = gen.at("model_id").get<std::string>();
        cfg.generation.context_limit_tokens = gen.at("context_limit_tokens").get<int>();
        cfg.generation.max_response_tokens = gen.at("max_response_tokens").get<int>();
        cfg.generation.api_key_env = gen.value("api_key_env", std::string());
        auto& emb = j.at("embedding");
        cfg.embedding.endpoint_url = emb.at("endpoint_url").get<std::string>();
        cfg.embedding.model_id = emb.at("model_id").get<std::string>();
        cfg.embedding.api_key_env = emb.value("api_key_env", std::string());
        cfg.concurrency_cap = j.value("concurrency_cap", 4);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }

    if (cfg.generation.endpoint_url.empty() || cfg.generation.model_id.empty() ||
        cfg.embedding.endpoint_url.empty() || cfg.embedding.model_id.empty()) {
        throw ConfigError(path.string() + ": endpoint_url and model_id are required");
    }
    if (cfg.generation.context_limit_tokens <= 0 || cfg.generation.max_response_tokens <= 0) {
        throw ConfigError(path.string() + ": token limits must be positive");
    }
    if (cfg.concurrency_cap < 1) {
        throw ConfigError(path.string() + ": concurrency_cap must be >= 1");
    }
    return cfg;
}

std::optional<std::string> resolve_api_key(const std::string& api_key_env) {
    if (api_key_env.empty()) return std::nullopt;
    const char* value = std::getenv(api_key_env.c_str());
    if (value == nullptr || *value == '\0') {
        throw ConfigError("environment variable " + api_key_env +
                          " (named in the provider config) is not set");
    }
    return std::string(value);
}

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint url without scheme: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable(const HttpResponse& res) {
    if (!res.transport_ok()) return true;
    return res.status == 408 || res.status == 429 || res.status >= 500;
}

HttpResponse post_with_retry(const Transport& transport, const HttpRequest& req,
                             const RetryPolicy& retry) {
    HttpResponse res;
    for (int attempt = 1; attempt <= retry.attempts; ++attempt) {
        res = transport(req);
        if (!retryable(res)) return res;
        if (attempt < retry.attempts) {
            auto delay = std::chrono::milliseconds(
                static_cast<long long>(retry.base_ms) << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }
    }
    if (!res.transport_ok()) {
        throw ProviderUnavailable("transport failure after " +
                                  std::to_string(retry.attempts) + " attempts: " +
                                  res.transport_error);
    }
    throw ProviderUnavailable("status " + std::to_string(res.status) + " after " +
                              std::to_string(retry.attempts) + " attempts");
}

HttpRequest make_request(const std::string& url, const std::string& api_key_env,
                         const nlohmann::json& body) {
    HttpRequest req;
    req.url = url;
    req.body = body.dump();
    if (auto key = resolve_api_key(api_key_env)) {
        req.headers.emplace_back("Authorization", "Bearer " + *key);
    }
    return req;
}

std::string snippet(const std::string& body) {
    return body.size() <= 200 ? body : body.substr(0, 200) + "...";
}

}  // namespace

Transport default_transport() {
    return [](const HttpRequest& req) -> HttpResponse {
        auto [base, path] = split_url(req.url);
        httplib::Client client(base);
        client.set_connection_timeout(30, 0);
        client.set_read_timeout(180, 0);
        httplib::Headers headers(req.headers.begin(), req.headers.end());
        auto result = client.Post(path, headers, req.body, "application/json");
        if (!result) return {0, "", httplib::to_string(result.error())};
        return {result->status, result->body, ""};
    };
}

HttpGenerator::HttpGenerator(GenerationEndpoint endpoint, RetryPolicy retry,
                             Transport transport)
    : endpoint_(std::move(endpoint)),
      retry_(retry),
      transport_(transport ? std::move(transport) : default_transport()) {}

std::string HttpGenerator::generate(const GenerationConfig& config,
                                    const std::string& prompt) {
    require_budget(config, prompt);
    nlohmann::json body = {
        {"model", config.model_id},
        {"temperature", 0},
        {"max_tokens", config.max_response_tokens},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
    };
    auto res = post_with_retry(transport_,
                               make_request(endpoint_.endpoint_url,
                                            endpoint_.api_key_env, body),
                               retry_);
    if (res.status < 200 || res.status >= 300) {
        throw ProviderRefusal("status " + std::to_string(res.status) + ": " +
                              snippet(res.body));
    }
    try {
        auto j = nlohmann::json::parse(res.body);
        if (j.contains("error")) throw ProviderRefusal(snippet(res.body));
        auto text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (text.empty()) throw ProviderRefusal("empty completion");
        return text;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderRefusal(std::string("malformed completion payload: ") + e.what());
    }
}

HttpEmbedder::HttpEmbedder(EmbeddingEndpoint endpoint, RetryPolicy retry,
                           Transport transport)
    : endpoint_(std::move(endpoint)),
      retry_(retry),
      transport_(transport ? std::move(transport) : default_transport()) {}

std::vector<EmbeddingVector> HttpEmbedder::embed(const std::vector<std::string>& texts) {
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (texts[i].empty()) {
            throw EmptyInputText("embed input at index " + std::to_string(i));
        }
    }
    if (texts.empty()) return {};
    nlohmann::json body = {{"model", endpoint_.model_id}, {"input", texts}};
    auto res = post_with_retry(transport_,
                               make_request(endpoint_.endpoint_url,
                                            endpoint_.api_key_env, body),
                               retry_);
    if (res.status < 200 || res.status >= 300) {
        throw ProviderRefusal("status " + std::to_string(res.status) + ": " +
                              snippet(res.body));
    }
    std::vector<EmbeddingVector> out;
    try {
        auto j = nlohmann::json::parse(res.body);
        if (j.contains("error")) throw ProviderRefusal(snippet(res.body));
        for (auto& item : j.at("data")) {
            out.push_back(item.at("embedding").get<EmbeddingVector>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ProviderRefusal(std::string("malformed embedding payload: ") + e.what());
    }
    if (out.size() != texts.size()) {
        throw ProviderRefusal("embedding count mismatch: sent " +
                              std::to_string(texts.size()) + ", got " +
                              std::to_string(out.size()));
    }
    for (auto& v : out) {
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        double norm = std::sqrt(norm_sq);
        if (v.empty() || norm < 1e-12) throw ProviderRefusal("degenerate embedding vector");
        for (auto& x : v) x /= norm;  // re-normalize; unit norm is our invariant
    }
    return out;
}

}  // namespace p2b
