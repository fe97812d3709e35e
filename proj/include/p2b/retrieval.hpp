#pragma once

#include <string>
#include <vector>

#include "p2b/common.hpp"
#include "p2b/corpus.hpp"
#include "p2b/providers.hpp"

namespace p2b {

struct RetrievedAnswer {
    Paragraph paragraph;
    double pertinence = 0.0;  // in [0,1]
    int rank = 0;
};

enum class Verdict { Yes, No, NA, CannotAnswer };

std::string to_string(Verdict v);

struct SynthesizedAnswer {
    Verdict verdict = Verdict::CannotAnswer;
    std::string text;
    std::vector<int> cited_paragraph_ranks;  // sorted, unique
};

// (cosine + 1) / 2, clamped to [0,1]. Expects unit vectors.
double pertinence_score(const EmbeddingVector& q, const EmbeddingVector& p);

// Paragraphs with their embeddings, computed once per corpus so the
// per-question retrieval loop does not re-embed the whole documentation.
struct ParagraphIndex {
    std::vector<Paragraph> paragraphs;
    std::vector<EmbeddingVector> embeddings;
};

ParagraphIndex build_paragraph_index(const PlatformCorpus& corpus, TextEmbedder& embedder);

// Top-k paragraphs by pertinence to the open question, ties broken by
// (doc_index, para_index) ascending so runs are stable.
std::vector<RetrievedAnswer> retrieve_top_k(const std::string& question_open,
                                            const ParagraphIndex& index,
                                            TextEmbedder& embedder, int k = 20);

std::vector<RetrievedAnswer> retrieve_top_k(const std::string& question_open,
                                            const PlatformCorpus& corpus,
                                            TextEmbedder& embedder, int k = 20);

// The verdict-synthesis prompt with {question} and {contents} placeholders.
const std::string& synthesis_prompt_template();

// {contents} becomes one "paragraph <rank>: <text>" block per answer, in
// rank order, joined by newlines.
std::string build_synthesis_prompt(const std::string& question_open,
                                   const std::vector<RetrievedAnswer>& answers);

// Leading token (after trimming, case-insensitive) decides the verdict:
// exactly "No, I cannot answer" first, then Yes / N/A / No. Citations are
// every "(paragraph(s) ...)" group's integers, sorted and deduplicated.
SynthesizedAnswer parse_verdict(const std::string& response);

// NA and CannotAnswer collapse to No: absent answers are non-compliance
// evidence in a binary report.
Binary binary_of_verdict(Verdict v);

// Cited ranks outside [0, answer_count). A warning signal, not an error:
// fabricated citations belong in the evidence trail.
std::vector<int> invalid_citations(const SynthesizedAnswer& answer, int answer_count);

}  // namespace p2b
