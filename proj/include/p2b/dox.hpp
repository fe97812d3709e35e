#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "p2b/providers.hpp"
#include "p2b/retrieval.hpp"

namespace p2b {

// Splits on ., ! or ? followed by whitespace and a capital (or end of text);
// never inside parentheses, so citation groups survive intact.
std::vector<std::string> sentence_split(const std::string& text);

struct ArchetypeTemplate {
    std::string archetype;  // "Why", "What", ...
    std::string text;       // rendered question with an {aspect} placeholder
};

// The eight fundamental-question templates, matching data/archetypes.json.
const std::vector<ArchetypeTemplate>& default_archetype_templates();

std::vector<ArchetypeTemplate> load_archetype_templates(const std::filesystem::path& path);

struct ArchetypeSet {
    std::string aspect;  // the explanandum, e.g. "the ranking mechanism"
    std::vector<ArchetypeTemplate> templates;

    // Each template with {aspect} substituted, in template order.
    std::vector<std::string> instantiate() const;
};

ArchetypeSet make_archetype_set(const std::string& aspect);

struct DoxResult {
    // archetype name -> answerability, in template order
    std::vector<std::pair<std::string, double>> per_archetype;
    double dox = 0.0;  // arithmetic mean of the per-archetype values
};

// Noisy-or over thresholded pertinences: with p'_i = max(0, p_i - theta) /
// (1 - theta), returns 1 - prod(1 - p'_i). Bounded, monotone in every input,
// and invariant to sentences at or below the threshold, which is exactly the
// behavior the score needs. Empty input gives 0.
double archetype_answerability(const std::vector<double>& pertinences, double theta);

// Mean archetype answerability of the answer text: each archetype question
// is scored against every sentence via embedding pertinence, aggregated with
// archetype_answerability. Empty text gives dox 0 without touching the
// embedder.
DoxResult dox_score(TextEmbedder& embedder, const ArchetypeSet& set,
                    const std::string& answer_text, double theta = 0.55);

// dox * max pertinence over the retrieved answers; 0 when either factor is
// absent.
double explanatory_relevance(double dox, const std::vector<RetrievedAnswer>& answers);

}  // namespace p2b
