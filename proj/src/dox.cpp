#include "p2b/dox.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace p2b {

std::vector<std::string> sentence_split(const std::string& text) {
    std::vector<std::string> sentences;
    std::string current;
    int paren_depth = 0;
    auto flush = [&] {
        auto first = current.find_first_not_of(" \t\r\n");
        if (first != std::string::npos) {
            auto last = current.find_last_not_of(" \t\r\n");
            sentences.push_back(current.substr(first, last - first + 1));
        }
        current.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        current += c;
        if (c == '(') ++paren_depth;
        if (c == ')' && paren_depth > 0) --paren_depth;
        if ((c == '.' || c == '!' || c == '?') && paren_depth == 0) {
            // Absorb a run of closers ("?!", "...").
            while (i + 1 < text.size() &&
                   (text[i + 1] == '.' || text[i + 1] == '!' || text[i + 1] == '?')) {
                current += text[++i];
            }
            std::size_t j = i + 1;
            while (j < text.size() &&
                   (text[j] == ' ' || text[j] == '\t' || text[j] == '\r' || text[j] == '\n')) {
                ++j;
            }
            if (j >= text.size()) {
                flush();
                i = j;
            } else if (j > i + 1 && text[j] >= 'A' && text[j] <= 'Z') {
                flush();
                i = j - 1;
            }
        }
    }
    flush();
    return sentences;
}

const std::vector<ArchetypeTemplate>& default_archetype_templates() {
    static const std::vector<ArchetypeTemplate> templates = {
        {"Why", "Why does {aspect} behave this way?"},
        {"What", "What is {aspect}?"},
        {"How", "How does {aspect} work?"},
        {"When", "When does {aspect} apply?"},
        {"Who", "Who is involved in {aspect}?"},
        {"Where", "Where does {aspect} apply?"},
        {"What-for", "What is {aspect} for?"},
        {"What-if", "What happens if {aspect} changes?"},
    };
    return templates;
}

std::vector<ArchetypeTemplate> load_archetype_templates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    std::vector<ArchetypeTemplate> templates;
    try {
        for (auto& rec : j) {
            templates.push_back({rec.at("archetype").get<std::string>(),
                                 rec.at("template").get<std::string>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    if (templates.empty()) throw ConfigError(path.string() + ": no archetypes");
    return templates;
}

std::vector<std::string> ArchetypeSet::instantiate() const {
    std::vector<std::string> questions;
    questions.reserve(templates.size());
    for (auto& t : templates) {
        std::string q = t.text;
        auto at = q.find("{aspect}");
        if (at != std::string::npos) q.replace(at, 8, aspect);
        questions.push_back(std::move(q));
    }
    return questions;
}

ArchetypeSet make_archetype_set(const std::string& aspect) {
    return {aspect, default_archetype_templates()};
}

double archetype_answerability(const std::vector<double>& pertinences, double theta) {
    if (theta < 0.0 || theta >= 1.0) {
        throw BadThreshold(std::to_string(theta) + " outside [0,1)");
    }
    double miss_all = 1.0;
    for (double p : pertinences) {
        double above = std::max(0.0, p - theta) / (1.0 - theta);
        miss_all *= 1.0 - above;
    }
    return 1.0 - miss_all;
}

DoxResult dox_score(TextEmbedder& embedder, const ArchetypeSet& set,
                    const std::string& answer_text, double theta) {
    if (set.aspect.empty()) throw ConfigError("archetype set without an aspect");
    if (set.templates.empty()) throw ConfigError("archetype set without templates");
    auto questions = set.instantiate();

    DoxResult result;
    auto sentences = sentence_split(answer_text);
    if (sentences.empty()) {
        for (auto& t : set.templates) result.per_archetype.emplace_back(t.archetype, 0.0);
        result.dox = 0.0;
        return result;
    }

    auto question_vecs = embedder.embed(questions);
    auto sentence_vecs = embedder.embed(sentences);

    double sum = 0.0;
    for (std::size_t a = 0; a < questions.size(); ++a) {
        std::vector<double> pertinences;
        pertinences.reserve(sentence_vecs.size());
        for (auto& sv : sentence_vecs) {
            pertinences.push_back(pertinence_score(question_vecs[a], sv));
        }
        double answerability = archetype_answerability(pertinences, theta);
        result.per_archetype.emplace_back(set.templates[a].archetype, answerability);
        sum += answerability;
    }
    result.dox = sum / static_cast<double>(questions.size());
    return result;
}

double explanatory_relevance(double dox, const std::vector<RetrievedAnswer>& answers) {
    if (answers.empty()) return 0.0;
    double max_pert = 0.0;
    for (auto& a : answers) max_pert = std::max(max_pert, a.pertinence);
    return dox * max_pert;
}

}  // namespace p2b
