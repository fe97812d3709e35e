#include "p2b/checklist.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

namespace p2b {

bool ChecklistQuestion::applies(PlatformType t) const {
    return std::find(applies_to.begin(), applies_to.end(), t) != applies_to.end();
}

namespace {

void validate(const std::vector<ChecklistQuestion>& bank) {
    std::set<std::string> ids;
    int n_int = 0, n_se = 0;
    std::set<std::string> survey;
    for (auto& q : bank) {
        if (q.id.empty()) throw MalformedChecklist("question with empty id");
        if (!ids.insert(q.id).second) throw MalformedChecklist("duplicate id " + q.id);
        if (q.closed_text.empty() || q.open_text.empty()) {
            throw MalformedChecklist(q.id + ": empty question text");
        }
        if (q.open_text.rfind("Does the documentation", 0) == 0) {
            throw MalformedChecklist(q.id + ": open form kept the closed-question frame");
        }
        if (q.legal_source.empty()) throw MalformedChecklist(q.id + ": empty legal_source");
        if (q.applies_to.empty()) throw MalformedChecklist(q.id + ": applies to nothing");
        if (q.applies(PlatformType::Intermediation)) ++n_int;
        if (q.applies(PlatformType::SearchEngine)) ++n_se;
        if (q.in_survey_subset) survey.insert(q.id);
    }
    if (n_int != 17 || n_se != 19) {
        throw MalformedChecklist("expected 17 intermediation / 19 search-engine questions, got " +
                                 std::to_string(n_int) + "/" + std::to_string(n_se));
    }
    if (survey != std::set<std::string>{"Q3", "Q4", "Q15", "Q16"}) {
        throw MalformedChecklist("survey subset must be exactly {Q3, Q4, Q15, Q16}");
    }
}

}  // namespace

Checklist Checklist::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedChecklist(path.string() + ": " + e.what());
    }

    Checklist list;
    try {
        for (auto& rec : j) {
            ChecklistQuestion q;
            q.id = rec.at("id").get<std::string>();
            q.closed_text = rec.at("closed_text").get<std::string>();
            q.open_text = rec.at("open_text").get<std::string>();
            for (auto& t : rec.at("applies_to")) {
                q.applies_to.push_back(platform_type_from_string(t.get<std::string>()));
            }
            q.legal_source = rec.at("legal_source").get<std::string>();
            q.in_survey_subset = rec.at("in_survey_subset").get<bool>();
            q.open_text_derived = rec.at("open_text_derived").get<bool>();
            list.bank_.push_back(std::move(q));
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedChecklist(path.string() + ": " + e.what());
    } catch (const MalformedManifest& e) {
        throw MalformedChecklist(path.string() + ": " + e.what());
    }
    validate(list.bank_);
    return list;
}

std::vector<ChecklistQuestion> Checklist::questions_for(PlatformType t) const {
    std::vector<ChecklistQuestion> out;
    for (auto& q : bank_) {
        if (q.applies(t)) out.push_back(q);
    }
    return out;
}

const ChecklistQuestion& Checklist::by_id(const std::string& id) const {
    for (auto& q : bank_) {
        if (q.id == id) return q;
    }
    throw UnknownQuestion(id);
}

const std::string& Checklist::open_form(const std::string& id) const {
    return by_id(id).open_text;
}

}  // namespace p2b
