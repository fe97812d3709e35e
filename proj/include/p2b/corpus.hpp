#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "p2b/errors.hpp"

namespace p2b {

enum class PlatformType { Intermediation, SearchEngine };

std::string to_string(PlatformType t);
PlatformType platform_type_from_string(const std::string& s);

struct Document {
    std::string url;
    std::string title;
    std::string fetched_at;  // UTC timestamp string, as fetched
    std::string content;     // LF-normalized plain text
};

struct Paragraph {
    int doc_index = 0;
    int para_index = 0;
    std::string text;
    int word_count = 0;
};

struct PlatformCorpus {
    std::string platform_name;
    PlatformType platform_type = PlatformType::Intermediation;
    std::vector<Document> documents;
};

struct CorpusStats {
    int link_count = 0;
    long long total_words = 0;
    // Average words per document in hundredths, truncated. Truncation, not
    // half-up: the replication fixtures' expected averages are truncations
    // (4056 words / 7 docs -> 579.42; half-up has no integer preimage there).
    long long avg_words_hundredths = 0;
};

// CRLF and lone CR become LF; trailing whitespace is stripped per line.
std::string normalize_content(const std::string& raw);

// Whitespace-delimited token count.
int count_words(const std::string& text);

// Blank-line-separated blocks of the normalized content, before any word
// count filtering. Joining the result with "\n\n" round-trips canonical
// input (single blank separators, no leading/trailing blanks).
std::vector<std::string> paragraph_blocks(const std::string& normalized);

// Blocks with fewer than 3 words are dropped (navigation crumbs); indices
// are contiguous over what remains.
std::vector<Paragraph> segment_paragraphs(const Document& doc, int doc_index = 0);

// All retained paragraphs of all documents, in document order.
std::vector<Paragraph> corpus_paragraphs(const PlatformCorpus& corpus);

PlatformCorpus load_manifest(const std::filesystem::path& path);

CorpusStats corpus_stats(const PlatformCorpus& corpus);

}  // namespace p2b
