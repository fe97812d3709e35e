#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "p2b/checklist.hpp"
#include "p2b/corpus.hpp"
#include "p2b/dox.hpp"
#include "p2b/providers.hpp"
#include "p2b/records.hpp"

namespace p2b {

// Order-preserving map with at most `cap` workers. The result for items[i]
// lands at index i regardless of completion order; the first exception (by
// item index) is rethrown after all workers finish.
template <typename T, typename F>
auto parallel_map(const std::vector<T>& items, int cap, F&& fn)
    -> std::vector<decltype(fn(items[0]))> {
    using R = decltype(fn(items[0]));
    std::vector<R> results(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    if (items.empty()) return results;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            try {
                results[i] = fn(items[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t n_threads =
        std::min<std::size_t>(std::max(cap, 1), items.size());
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

struct QuestionFailure {
    std::string question_id;
    std::string error;
};

struct AssessmentRecord {
    nlohmann::json record;  // full per-platform evidence, ready to persist
    std::vector<QuestionFailure> failures;
};

// Latest document fetch timestamp; mock runs stamp records with it so two
// runs over the same corpus are byte-identical.
std::string latest_fetched_at(const PlatformCorpus& corpus);

std::string utc_now_iso8601();

AssessmentRecord run_direct_assessment(const PlatformCorpus& corpus,
                                       const Checklist& checklist,
                                       TextGenerator& generator,
                                       const GenerationConfig& config,
                                       const std::string& run_timestamp,
                                       int concurrency_cap);

struct RetrievalDoxOptions {
    int k = 20;
    double theta = 0.55;
    std::string aspect = "the ranking mechanism";
};

AssessmentRecord run_retrieval_dox_assessment(const PlatformCorpus& corpus,
                                              const Checklist& checklist,
                                              TextGenerator& generator,
                                              TextEmbedder& embedder,
                                              const GenerationConfig& config,
                                              const std::vector<ArchetypeTemplate>& archetypes,
                                              const RetrievalDoxOptions& options,
                                              const std::string& run_timestamp,
                                              int concurrency_cap);

// question_id -> Yes/No as persisted in an assessment record.
std::map<std::string, Binary> binary_map_of_record(const nlohmann::json& record);

struct Providers {
    std::unique_ptr<TextGenerator> generator;
    std::unique_ptr<TextEmbedder> embedder;
    GenerationConfig generation;
    int concurrency_cap = 4;
};

Providers make_mock_providers(std::uint64_t seed);
Providers make_http_providers(const ProviderConfig& config);

}  // namespace p2b
