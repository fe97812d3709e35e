#include "p2b/pipeline.hpp"

#include <algorithm>
#include <ctime>

#include "p2b/direct_assessor.hpp"
#include "p2b/retrieval.hpp"

namespace p2b {

std::string latest_fetched_at(const PlatformCorpus& corpus) {
    std::string latest;
    for (auto& d : corpus.documents) latest = std::max(latest, d.fetched_at);
    return latest;
}

std::string utc_now_iso8601() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

namespace {

nlohmann::json record_header(const PlatformCorpus& corpus, Strategy strategy,
                             const GenerationConfig& config,
                             const std::string& run_timestamp) {
    return {
        {"platform", corpus.platform_name},
        {"platform_type", to_string(corpus.platform_type)},
        {"strategy", to_string(strategy)},
        {"model_id", config.model_id},
        {"timestamp", run_timestamp},
    };
}

struct QuestionOutcome {
    nlohmann::json entry;  // null on failure
    std::string error;     // non-empty on failure
};

}  // namespace

AssessmentRecord run_direct_assessment(const PlatformCorpus& corpus,
                                       const Checklist& checklist,
                                       TextGenerator& generator,
                                       const GenerationConfig& config,
                                       const std::string& run_timestamp,
                                       int concurrency_cap) {
    auto questions = checklist.questions_for(corpus.platform_type);
    auto chunks = chunk_document(corpus, config, questions);

    auto outcomes = parallel_map(questions, concurrency_cap,
                                 [&](const ChecklistQuestion& q) -> QuestionOutcome {
        try {
            auto assessed = assess_question_direct(generator, config, chunks, q);
            nlohmann::json chunk_entries = nlohmann::json::array();
            for (auto& s : assessed.scores) {
                chunk_entries.push_back({
                    {"chunk_ref", s.chunk_ref},
                    {"prompt_hash", hex64(fnv1a64(build_direct_prompt(q, chunks[s.chunk_ref])))},
                    {"score", s.score},
                    {"explanation", s.explanation},
                });
            }
            for (auto& f : assessed.failures) {
                chunk_entries.push_back({
                    {"chunk_ref", f.chunk_ref},
                    {"prompt_hash", hex64(fnv1a64(build_direct_prompt(q, chunks[f.chunk_ref])))},
                    {"failed", true},
                    {"error", f.error},
                    {"raw_response", f.raw_response},
                });
            }
            return {{
                        {"question_id", q.id},
                        {"closed_text", q.closed_text},
                        {"ordinal_score", assessed.ordinal_score},
                        {"binary", to_string(assessed.binary)},
                        {"chunks", chunk_entries},
                    },
                    ""};
        } catch (const Error& e) {
            return {nlohmann::json(), e.what()};
        }
    });

    AssessmentRecord out;
    out.record = record_header(corpus, Strategy::Direct, config, run_timestamp);
    out.record["chunk_count"] = chunks.size();
    out.record["chunk_budget"] = chunk_budget(config, questions);
    auto entries = nlohmann::json::array();
    auto failures = nlohmann::json::array();
    for (std::size_t i = 0; i < questions.size(); ++i) {
        if (outcomes[i].error.empty()) {
            entries.push_back(std::move(outcomes[i].entry));
        } else {
            failures.push_back({{"question_id", questions[i].id},
                                {"error", outcomes[i].error}});
            out.failures.push_back({questions[i].id, outcomes[i].error});
        }
    }
    out.record["questions"] = std::move(entries);
    out.record["failures"] = std::move(failures);
    return out;
}

namespace {

// Synthesis prompts over a big top-k can overrun the context window; the
// lowest-ranked answers are dropped until the prompt fits. Returns the
// prompt and how many answers it kept.
std::pair<std::string, int> fit_synthesis_prompt(const std::string& open_text,
                                                 const std::vector<RetrievedAnswer>& answers,
                                                 const GenerationConfig& config) {
    for (int used = static_cast<int>(answers.size()); used >= 1; --used) {
        std::vector<RetrievedAnswer> kept(answers.begin(), answers.begin() + used);
        std::string prompt = build_synthesis_prompt(open_text, kept);
        if (estimate_tokens(prompt) + config.max_response_tokens <=
            config.context_limit_tokens) {
            return {prompt, used};
        }
    }
    throw BudgetExceeded("synthesis prompt exceeds the context window even with one answer");
}

}  // namespace

AssessmentRecord run_retrieval_dox_assessment(const PlatformCorpus& corpus,
                                              const Checklist& checklist,
                                              TextGenerator& generator,
                                              TextEmbedder& embedder,
                                              const GenerationConfig& config,
                                              const std::vector<ArchetypeTemplate>& archetypes,
                                              const RetrievalDoxOptions& options,
                                              const std::string& run_timestamp,
                                              int concurrency_cap) {
    auto questions = checklist.questions_for(corpus.platform_type);
    auto index = build_paragraph_index(corpus, embedder);
    ArchetypeSet archetype_set{options.aspect, archetypes};

    auto outcomes = parallel_map(questions, concurrency_cap,
                                 [&](const ChecklistQuestion& q) -> QuestionOutcome {
        try {
            auto answers = retrieve_top_k(q.open_text, index, embedder, options.k);
            auto [prompt, used] = fit_synthesis_prompt(
                q.open_text, answers, config);

            std::string response = generator.generate(config, prompt);
            SynthesizedAnswer synthesized;
            try {
                synthesized = parse_verdict(response);
            } catch (const Error&) {
                // Same policy as the direct strategy: one re-ask, then fail.
                response = generator.generate(config, prompt);
                synthesized = parse_verdict(response);
            }

            auto dox = dox_score(embedder, archetype_set, synthesized.text, options.theta);
            double relevance = explanatory_relevance(dox.dox, answers);

            nlohmann::json top_k = nlohmann::json::array();
            for (auto& a : answers) {
                top_k.push_back({
                    {"rank", a.rank},
                    {"doc_url", corpus.documents[a.paragraph.doc_index].url},
                    {"doc_index", a.paragraph.doc_index},
                    {"para_index", a.paragraph.para_index},
                    {"pertinence", a.pertinence},
                });
            }
            nlohmann::json per_archetype = nlohmann::json::object();
            for (auto& [name, value] : dox.per_archetype) per_archetype[name] = value;

            return {{
                        {"question_id", q.id},
                        {"open_text", q.open_text},
                        {"top_k", top_k},
                        {"answers_used", used},
                        {"synthesis_prompt_hash", hex64(fnv1a64(prompt))},
                        {"raw_response", response},
                        {"verdict", to_string(synthesized.verdict)},
                        {"binary", to_string(binary_of_verdict(synthesized.verdict))},
                        {"cited_ranks", synthesized.cited_paragraph_ranks},
                        {"invalid_citations",
                         invalid_citations(synthesized, static_cast<int>(answers.size()))},
                        {"dox", {{"per_archetype", per_archetype}, {"dox", dox.dox}}},
                        {"explanatory_relevance", relevance},
                    },
                    ""};
        } catch (const Error& e) {
            return {nlohmann::json(), e.what()};
        }
    });

    AssessmentRecord out;
    out.record = record_header(corpus, Strategy::RetrievalDox, config, run_timestamp);
    out.record["retrieval"] = {{"k", options.k},
                               {"theta", options.theta},
                               {"aspect", options.aspect},
                               {"paragraph_count", index.paragraphs.size()}};
    auto entries = nlohmann::json::array();
    auto failures = nlohmann::json::array();
    for (std::size_t i = 0; i < questions.size(); ++i) {
        if (outcomes[i].error.empty()) {
            entries.push_back(std::move(outcomes[i].entry));
        } else {
            failures.push_back({{"question_id", questions[i].id},
                                {"error", outcomes[i].error}});
            out.failures.push_back({questions[i].id, outcomes[i].error});
        }
    }
    out.record["questions"] = std::move(entries);
    out.record["failures"] = std::move(failures);
    return out;
}

std::map<std::string, Binary> binary_map_of_record(const nlohmann::json& record) {
    std::map<std::string, Binary> out;
    for (auto& q : record.at("questions")) {
        out[q.at("question_id").get<std::string>()] =
            q.at("binary").get<std::string>() == "Yes" ? Binary::Yes : Binary::No;
    }
    return out;
}

Providers make_mock_providers(std::uint64_t seed) {
    Providers p;
    p.generator = std::make_unique<MockGenerator>(seed);
    p.embedder = std::make_unique<MockEmbedder>(48, seed);
    p.generation = {"mock-generator", 8192, 0.0, 512};
    p.concurrency_cap = 4;
    return p;
}

Providers make_http_providers(const ProviderConfig& config) {
    Providers p;
    p.generator = std::make_unique<HttpGenerator>(config.generation);
    p.embedder = std::make_unique<HttpEmbedder>(config.embedding);
    p.generation = config.generation_config();
    p.concurrency_cap = config.concurrency_cap;
    return p;
}

}  // namespace p2b
