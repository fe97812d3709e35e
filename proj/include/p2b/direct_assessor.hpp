#pragma once

#include <optional>
#include <string>
#include <vector>

#include "p2b/checklist.hpp"
#include "p2b/common.hpp"
#include "p2b/corpus.hpp"
#include "p2b/providers.hpp"

namespace p2b {

struct Chunk {
    std::string text;
    int token_estimate = 0;
    std::vector<int> source_doc_indices;
};

struct ChunkScore {
    int chunk_ref = -1;
    int score = 0;  // 1..5
    std::string explanation;
};

struct ChunkFailure {
    int chunk_ref = -1;
    std::string error;
    std::string raw_response;
};

// The scoring prompt with {question} and {chunk} placeholders.
const std::string& direct_prompt_template();

// Token budget left for chunk text once the template, the longest applicable
// question, a 64-token safety margin, and the response reservation are
// subtracted from the context window. Throws BudgetTooSmall when <= 0.
int chunk_budget(const GenerationConfig& config,
                 const std::vector<ChecklistQuestion>& questions);

// Greedy whole-paragraph packing in document order; oversize paragraphs fall
// back to sentence boundaries, oversize sentences to a hard byte split. Every
// chunk's token_estimate fits the budget and every retained paragraph lands
// in exactly one chunk, in order.
std::vector<Chunk> chunk_document(const PlatformCorpus& corpus,
                                  const GenerationConfig& config,
                                  const std::vector<ChecklistQuestion>& questions);

std::string build_direct_prompt(const ChecklistQuestion& question, const Chunk& chunk);

// Extracts "Score: <1-5>" (first occurrence; optional whitespace and
// trailing period) and the text after an "Explanation:" marker, or the whole
// response when the marker is absent. chunk_ref is left for the caller.
ChunkScore parse_score(const std::string& response);

struct DirectQuestionResult {
    std::string question_id;
    int ordinal_score = 0;
    Binary binary = Binary::No;
    std::vector<ChunkScore> scores;      // successfully parsed chunks
    std::vector<ChunkFailure> failures;  // excluded from the max
};

// Scores every chunk against one question and aggregates with max. A chunk
// whose response fails to parse is re-asked once, then recorded as failed;
// AllChunksFailed when nothing parses.
DirectQuestionResult assess_question_direct(TextGenerator& generator,
                                            const GenerationConfig& config,
                                            const std::vector<Chunk>& chunks,
                                            const ChecklistQuestion& question);

}  // namespace p2b
