#include "p2b/corpus.hpp"

#include "p2b/common.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace p2b {

std::string to_string(PlatformType t) {
    return t == PlatformType::Intermediation ? "intermediation" : "search_engine";
}

PlatformType platform_type_from_string(const std::string& s) {
    if (s == "intermediation") return PlatformType::Intermediation;
    if (s == "search_engine") return PlatformType::SearchEngine;
    throw MalformedManifest("unknown platform_type '" + s + "'");
}

std::string normalize_content(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    std::string line;
    auto flush_line = [&] {
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        out += line;
        line.clear();
    };
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == '\r') {
            if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
            flush_line();
            out += '\n';
        } else if (c == '\n') {
            flush_line();
            out += '\n';
        } else {
            line += c;
        }
    }
    flush_line();
    return out;
}

int count_words(const std::string& text) {
    int n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool ws = std::isspace(c) != 0;
        if (!ws && !in_word) ++n;
        in_word = !ws;
    }
    return n;
}

std::vector<std::string> paragraph_blocks(const std::string& normalized) {
    std::vector<std::string> blocks;
    std::string current;
    std::size_t pos = 0;
    while (pos <= normalized.size()) {
        std::size_t nl = normalized.find('\n', pos);
        std::string ln = normalized.substr(pos, nl == std::string::npos
                                                    ? std::string::npos
                                                    : nl - pos);
        if (ln.empty()) {
            if (!current.empty()) {
                blocks.push_back(current);
                current.clear();
            }
        } else {
            if (!current.empty()) current += '\n';
            current += ln;
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    if (!current.empty()) blocks.push_back(current);
    return blocks;
}

std::vector<Paragraph> segment_paragraphs(const Document& doc, int doc_index) {
    std::vector<Paragraph> out;
    int idx = 0;
    for (auto& block : paragraph_blocks(normalize_content(doc.content))) {
        int words = count_words(block);
        if (words < 3) continue;
        out.push_back({doc_index, idx++, block, words});
    }
    return out;
}

std::vector<Paragraph> corpus_paragraphs(const PlatformCorpus& corpus) {
    std::vector<Paragraph> all;
    for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
        auto paras = segment_paragraphs(corpus.documents[d], static_cast<int>(d));
        all.insert(all.end(), paras.begin(), paras.end());
    }
    return all;
}

PlatformCorpus load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedManifest(path.string() + ": " + e.what());
    }

    PlatformCorpus corpus;
    try {
        corpus.platform_name = j.at("platform_name").get<std::string>();
        corpus.platform_type =
            platform_type_from_string(j.at("platform_type").get<std::string>());
        std::set<std::string> urls;
        for (auto& d : j.at("documents")) {
            Document doc;
            doc.url = d.at("url").get<std::string>();
            doc.title = d.at("title").get<std::string>();
            doc.fetched_at = d.at("fetched_at").get<std::string>();
            doc.content = normalize_content(d.at("content").get<std::string>());
            if (!urls.insert(doc.url).second) {
                throw MalformedManifest(path.string() + ": duplicate url " + doc.url);
            }
            corpus.documents.push_back(std::move(doc));
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedManifest(path.string() + ": " + e.what());
    }
    if (corpus.platform_name.empty()) {
        throw MalformedManifest(path.string() + ": empty platform_name");
    }
    if (corpus.documents.empty()) throw EmptyCorpus(path.string());
    return corpus;
}

CorpusStats corpus_stats(const PlatformCorpus& corpus) {
    if (corpus.documents.empty()) throw EmptyCorpus(corpus.platform_name);
    CorpusStats stats;
    stats.link_count = static_cast<int>(corpus.documents.size());
    for (auto& doc : corpus.documents) {
        stats.total_words += count_words(normalize_content(doc.content));
    }
    stats.avg_words_hundredths = trunc_hundredths(stats.total_words, stats.link_count);
    return stats;
}

}  // namespace p2b
