#include "p2b/direct_assessor.hpp"

#include <algorithm>
#include <regex>

#include "p2b/dox.hpp"  // sentence_split

namespace p2b {

const std::string& direct_prompt_template() {
    static const std::string tmpl =
        "Your task is to assess the compliance of this documentation based on the "
        "following question. Conduct a compliance assessment, focusing on both the "
        "technical and legal requirements.\n"
        "Your assessment should start with a numerical score from 1 to 5, where 1 "
        "indicates the question is not answered at all and 5 indicates it's perfectly "
        "answered. Following the score, provide a brief explanation highlighting the "
        "strengths or weaknesses in addressing the question. Consider the completeness, "
        "clarity, and legal implications in your explanation.\n"
        "For example, your assessment might look like: 'Score: 3. Explanation: The "
        "question was only partially answered. While the technical aspects are covered, "
        "it lacks legal disclosures.'\n"
        "Question:\n"
        "{question}\n"
        "Documentation:\n"
        "{chunk}";
    return tmpl;
}

int chunk_budget(const GenerationConfig& config,
                 const std::vector<ChecklistQuestion>& questions) {
    std::size_t longest = 0;
    for (auto& q : questions) longest = std::max(longest, q.closed_text.size());
    std::string longest_q;
    for (auto& q : questions) {
        if (q.closed_text.size() == longest) {
            longest_q = q.closed_text;
            break;
        }
    }
    int overhead = estimate_tokens(direct_prompt_template() + longest_q) + 64;
    int budget = config.context_limit_tokens - overhead - config.max_response_tokens;
    if (budget <= 0) {
        throw BudgetTooSmall("context " + std::to_string(config.context_limit_tokens) +
                             " leaves no room after prompt overhead " +
                             std::to_string(overhead) + " and response reservation " +
                             std::to_string(config.max_response_tokens));
    }
    return budget;
}

namespace {

// Byte pieces no longer than max_bytes, never cutting a UTF-8 sequence.
std::vector<std::string> hard_byte_split(const std::string& text, std::size_t max_bytes) {
    std::vector<std::string> pieces;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t len = std::min(max_bytes, text.size() - pos);
        while (len > 0 && pos + len < text.size() &&
               (static_cast<unsigned char>(text[pos + len]) & 0xC0) == 0x80) {
            --len;
        }
        if (len == 0) len = 1;  // defensive; a UTF-8 sequence is at most 4 bytes
        pieces.push_back(text.substr(pos, len));
        pos += len;
    }
    return pieces;
}

// An oversize paragraph becomes a run of budget-sized stretches: sentences
// packed greedily, single oversize sentences byte-split.
std::vector<std::string> split_oversize_paragraph(const std::string& text, int budget) {
    std::vector<std::string> stretches;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            stretches.push_back(current);
            current.clear();
        }
    };
    auto sentences = sentence_split(text);
    if (sentences.empty()) sentences.push_back(text);
    for (auto& s : sentences) {
        if (estimate_tokens(s) > budget) {
            flush();
            for (auto& piece : hard_byte_split(s, static_cast<std::size_t>(budget) * 4)) {
                stretches.push_back(piece);
            }
            continue;
        }
        std::string candidate = current.empty() ? s : current + " " + s;
        if (estimate_tokens(candidate) <= budget) {
            current = std::move(candidate);
        } else {
            flush();
            current = s;
        }
    }
    flush();
    return stretches;
}

}  // namespace

std::vector<Chunk> chunk_document(const PlatformCorpus& corpus,
                                  const GenerationConfig& config,
                                  const std::vector<ChecklistQuestion>& questions) {
    if (corpus.documents.empty()) throw EmptyCorpus(corpus.platform_name);
    int budget = chunk_budget(config, questions);

    std::vector<Chunk> chunks;
    std::string current;
    std::vector<int> current_docs;
    auto note_doc = [&](int doc_index) {
        if (current_docs.empty() || current_docs.back() != doc_index) {
            current_docs.push_back(doc_index);
        }
    };
    auto flush = [&] {
        if (!current.empty()) {
            chunks.push_back({current, estimate_tokens(current), current_docs});
            current.clear();
            current_docs.clear();
        }
    };

    for (auto& para : corpus_paragraphs(corpus)) {
        if (estimate_tokens(para.text) > budget) {
            flush();
            for (auto& stretch : split_oversize_paragraph(para.text, budget)) {
                chunks.push_back({stretch, estimate_tokens(stretch), {para.doc_index}});
            }
            continue;
        }
        std::string candidate =
            current.empty() ? para.text : current + "\n\n" + para.text;
        if (estimate_tokens(candidate) <= budget) {
            current = std::move(candidate);
            note_doc(para.doc_index);
        } else {
            flush();
            current = para.text;
            note_doc(para.doc_index);
        }
    }
    flush();
    return chunks;
}

std::string build_direct_prompt(const ChecklistQuestion& question, const Chunk& chunk) {
    std::string prompt = direct_prompt_template();
    prompt.replace(prompt.find("{question}"), 10, question.closed_text);
    prompt.replace(prompt.find("{chunk}"), 7, chunk.text);
    return prompt;
}

ChunkScore parse_score(const std::string& response) {
    static const std::regex pattern(R"(Score:\s*([0-9]+)\.?)");
    std::smatch m;
    if (!std::regex_search(response, m, pattern)) {
        throw UnparseableScore("no 'Score: <n>' in response");
    }
    int score;
    try {
        score = std::stoi(m[1].str());
    } catch (const std::out_of_range&) {
        throw OutOfRangeScore("'" + m[1].str() + "'");
    }
    if (score < 1 || score > 5) {
        throw OutOfRangeScore(std::to_string(score) + " outside [1,5]");
    }
    ChunkScore result;
    result.score = score;
    static const std::string marker = "Explanation:";
    auto at = response.find(marker);
    std::string expl =
        at == std::string::npos ? response : response.substr(at + marker.size());
    auto first = expl.find_first_not_of(" \t\r\n");
    auto last = expl.find_last_not_of(" \t\r\n");
    result.explanation =
        first == std::string::npos ? std::string() : expl.substr(first, last - first + 1);
    return result;
}

DirectQuestionResult assess_question_direct(TextGenerator& generator,
                                            const GenerationConfig& config,
                                            const std::vector<Chunk>& chunks,
                                            const ChecklistQuestion& question) {
    DirectQuestionResult result;
    result.question_id = question.id;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        std::string prompt = build_direct_prompt(question, chunks[i]);
        std::string response = generator.generate(config, prompt);
        ChunkScore parsed;
        bool ok = false;
        try {
            parsed = parse_score(response);
            ok = true;
        } catch (const Error&) {
            // One re-ask, then the chunk is excluded. Exclusion cannot
            // inflate the max, so this stays conservative.
            response = generator.generate(config, prompt);
            try {
                parsed = parse_score(response);
                ok = true;
            } catch (const Error& second_error) {
                result.failures.push_back(
                    {static_cast<int>(i), second_error.what(), response});
            }
        }
        if (ok) {
            parsed.chunk_ref = static_cast<int>(i);
            result.scores.push_back(std::move(parsed));
        }
    }
    if (result.scores.empty()) {
        throw AllChunksFailed("question " + question.id + ": no chunk yielded a parseable score");
    }
    result.ordinal_score = 0;
    for (auto& s : result.scores) result.ordinal_score = std::max(result.ordinal_score, s.score);
    result.binary = normalize_binary(result.ordinal_score);
    return result;
}

}  // namespace p2b
