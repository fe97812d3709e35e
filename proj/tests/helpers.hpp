#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "p2b/corpus.hpp"
#include "p2b/providers.hpp"

#ifndef P2B_SOURCE_DIR
#define P2B_SOURCE_DIR "."
#endif

namespace p2b_test {

inline std::filesystem::path source_path(const std::string& relative) {
    return std::filesystem::path(P2B_SOURCE_DIR) / relative;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline p2b::PlatformCorpus make_corpus(const std::string& name, p2b::PlatformType type,
                                       const std::vector<std::string>& contents) {
    p2b::PlatformCorpus corpus;
    corpus.platform_name = name;
    corpus.platform_type = type;
    for (std::size_t i = 0; i < contents.size(); ++i) {
        p2b::Document doc;
        doc.url = "https://example.test/doc" + std::to_string(i);
        doc.title = "doc " + std::to_string(i);
        doc.fetched_at = "2025-11-01T00:00:00Z";
        doc.content = contents[i];
        corpus.documents.push_back(doc);
    }
    return corpus;
}

// Embedder with a fixed vector per exact text. Tests stage 2-d unit vectors
// at chosen angles to dial in any pertinence they need.
class ScriptedEmbedder : public p2b::TextEmbedder {
public:
    void script(const std::string& text, p2b::EmbeddingVector v) {
        vectors_[text] = std::move(v);
    }

    // Unit vector whose pertinence against angle-0 texts is `pertinence`.
    void script_pertinence(const std::string& text, double pertinence) {
        double cosine = 2.0 * pertinence - 1.0;
        double angle = std::acos(cosine);
        script(text, {std::cos(angle), std::sin(angle)});
    }

    std::vector<p2b::EmbeddingVector> embed(const std::vector<std::string>& texts) override {
        std::vector<p2b::EmbeddingVector> out;
        for (auto& t : texts) {
            auto it = vectors_.find(t);
            if (it == vectors_.end()) {
                throw std::runtime_error("unscripted text: " + t);
            }
            out.push_back(it->second);
        }
        return out;
    }

private:
    std::map<std::string, p2b::EmbeddingVector> vectors_;
};

}  // namespace p2b_test
