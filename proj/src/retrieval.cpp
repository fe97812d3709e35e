#include "p2b/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <set>

namespace p2b {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "Yes";
        case Verdict::No: return "No";
        case Verdict::NA: return "N/A";
        case Verdict::CannotAnswer: return "CannotAnswer";
    }
    return "?";
}

double pertinence_score(const EmbeddingVector& q, const EmbeddingVector& p) {
    if (q.size() != p.size() || q.empty()) {
        throw DimensionMismatch(std::to_string(q.size()) + " vs " +
                                std::to_string(p.size()));
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) dot += q[i] * p[i];
    double score = (dot + 1.0) / 2.0;
    return std::clamp(score, 0.0, 1.0);
}

ParagraphIndex build_paragraph_index(const PlatformCorpus& corpus, TextEmbedder& embedder) {
    ParagraphIndex index;
    index.paragraphs = corpus_paragraphs(corpus);
    if (index.paragraphs.empty()) {
        throw NoParagraphs(corpus.platform_name + ": no retained paragraphs");
    }
    std::vector<std::string> texts;
    texts.reserve(index.paragraphs.size());
    for (auto& p : index.paragraphs) texts.push_back(p.text);
    index.embeddings = embedder.embed(texts);
    return index;
}

std::vector<RetrievedAnswer> retrieve_top_k(const std::string& question_open,
                                            const ParagraphIndex& index,
                                            TextEmbedder& embedder, int k) {
    if (index.paragraphs.empty()) throw NoParagraphs("empty paragraph index");
    if (k < 1) throw EmptyAnswerList("k must be >= 1");
    EmbeddingVector q = embedder.embed({question_open}).at(0);

    std::vector<RetrievedAnswer> all;
    all.reserve(index.paragraphs.size());
    for (std::size_t i = 0; i < index.paragraphs.size(); ++i) {
        all.push_back({index.paragraphs[i], pertinence_score(q, index.embeddings[i]), 0});
    }
    std::sort(all.begin(), all.end(), [](const RetrievedAnswer& a, const RetrievedAnswer& b) {
        if (a.pertinence != b.pertinence) return a.pertinence > b.pertinence;
        if (a.paragraph.doc_index != b.paragraph.doc_index) {
            return a.paragraph.doc_index < b.paragraph.doc_index;
        }
        return a.paragraph.para_index < b.paragraph.para_index;
    });
    if (all.size() > static_cast<std::size_t>(k)) all.resize(k);
    for (std::size_t i = 0; i < all.size(); ++i) all[i].rank = static_cast<int>(i);
    return all;
}

std::vector<RetrievedAnswer> retrieve_top_k(const std::string& question_open,
                                            const PlatformCorpus& corpus,
                                            TextEmbedder& embedder, int k) {
    return retrieve_top_k(question_open, build_paragraph_index(corpus, embedder),
                          embedder, k);
}

const std::string& synthesis_prompt_template() {
    static const std::string tmpl =
        "Output a comprehensive answer based only and exclusively on the information "
        "within the paragraphs below (if any can be used to answer) which were extracted "
        "from the documentation to be assessed. If no paragraph can answer the question, "
        "then output only \"No, I cannot answer\". Otherwise, the comprehensive answer "
        "must contain citations to the source paragraphs, e.g., blablabla (paragraphs 1 "
        "and 2), blabla (paragraph 0). It should also start with \"Yes\" if the answer is "
        "positive, \"No\" if the answer is negative, or \"N/A\" if the answer is not "
        "available.\n"
        "Question: {question}\n"
        "Paragraphs: {contents}";
    return tmpl;
}

std::string build_synthesis_prompt(const std::string& question_open,
                                   const std::vector<RetrievedAnswer>& answers) {
    if (answers.empty()) throw EmptyAnswerList("synthesis prompt over zero answers");
    std::string contents;
    for (auto& a : answers) {
        if (!contents.empty()) contents += '\n';
        contents += "paragraph " + std::to_string(a.rank) + ": " + a.paragraph.text;
    }
    std::string prompt = synthesis_prompt_template();
    prompt.replace(prompt.find("{question}"), 10, question_open);
    prompt.replace(prompt.find("{contents}"), 10, contents);
    return prompt;
}

namespace {

std::string trimmed(const std::string& s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool iprefix(const std::string& text, const std::string& prefix) {
    if (text.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

// "Yes" and "No" must end at a word boundary so "Note that..." is not a
// verdict; "N/A" already ends in a non-letter.
bool word_prefix(const std::string& text, const std::string& prefix) {
    if (!iprefix(text, prefix)) return false;
    if (text.size() == prefix.size()) return true;
    return std::isalpha(static_cast<unsigned char>(text[prefix.size()])) == 0;
}

std::vector<int> extract_citations(const std::string& text) {
    static const std::regex group(R"(\(\s*paragraphs?\s+([0-9][0-9,\s]*(?:and[0-9,\s]+)*)\))",
                                  std::regex::icase);
    std::set<int> ranks;
    auto begin = std::sregex_iterator(text.begin(), text.end(), group);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const std::string inner = (*it)[1].str();
        std::string digits;
        for (char c : inner) {
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits += c;
            } else if (!digits.empty()) {
                ranks.insert(std::stoi(digits));
                digits.clear();
            }
        }
        if (!digits.empty()) ranks.insert(std::stoi(digits));
    }
    return {ranks.begin(), ranks.end()};
}

}  // namespace

SynthesizedAnswer parse_verdict(const std::string& response) {
    std::string text = trimmed(response);
    SynthesizedAnswer answer;
    if (iprefix(text, "No, I cannot answer")) {
        answer.verdict = Verdict::CannotAnswer;
        return answer;  // text stays empty by design
    }
    if (word_prefix(text, "Yes")) {
        answer.verdict = Verdict::Yes;
    } else if (iprefix(text, "N/A")) {
        answer.verdict = Verdict::NA;
    } else if (word_prefix(text, "No")) {
        answer.verdict = Verdict::No;
    } else {
        throw UnparseableVerdict("no recognized leading token: '" +
                                 text.substr(0, std::min<std::size_t>(text.size(), 40)) +
                                 "'");
    }
    answer.text = text;
    answer.cited_paragraph_ranks = extract_citations(text);
    return answer;
}

Binary binary_of_verdict(Verdict v) {
    return v == Verdict::Yes ? Binary::Yes : Binary::No;
}

std::vector<int> invalid_citations(const SynthesizedAnswer& answer, int answer_count) {
    std::vector<int> bad;
    for (int r : answer.cited_paragraph_ranks) {
        if (r < 0 || r >= answer_count) bad.push_back(r);
    }
    return bad;
}

}  // namespace p2b
